#pragma once

// =============================================================================
// rfmatch - AC nodal analysis
// =============================================================================
// Assembles the node admittance matrix of a netlist at one frequency and
// configuration and converts to port parameters two ways: the Z-matrix by
// unit-current injection (ports open), and the Y-matrix by eliminating
// internal nodes, which exists for every passive circuit and is the default
// route to S-parameters.
// =============================================================================

#include <stdexcept>
#include <string>

#include "rfmatch/components.hpp"
#include "rfmatch/linalg.hpp"
#include "rfmatch/netlist.hpp"

namespace rfmatch {

/// Node admittance matrix over the non-ground nodes (row i = node id i+1).
/// Two-terminal elements stamp y = 1/Z; an ideal hybrid stamps its 4x4
/// admittance embedding across its nodes.
inline ComplexMatrix assemble_admittance(const Netlist& nl, double f, ConfigurationWord bits,
                                         const LossModel& loss) {
    if (f <= 0.0) throw std::invalid_argument("assemble_admittance: frequency must be > 0");
    const int n = nl.node_count() - 1;
    if (n < 1) throw std::invalid_argument("assemble_admittance: no non-ground nodes");
    ComplexMatrix y(static_cast<std::size_t>(n));
    auto stamp = [&](NodeId a, NodeId b, Complex val) {
        if (a > 0) {
            y(a - 1, a - 1) += val;
            if (b > 0) y(a - 1, b - 1) -= val;
        }
        if (b > 0) {
            y(b - 1, b - 1) += val;
            if (a > 0) y(b - 1, a - 1) -= val;
        }
    };
    for (const Element& e : nl.elements()) {
        if (e.kind == ElementKind::port) continue;
        if (e.kind == ElementKind::ideal_hybrid) {
            const ComplexMatrix yh = hybrid_admittance(ideal_hybrid_smatrix(e.z0).s, e.z0);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    if (e.nodes[i] > 0 && e.nodes[j] > 0)
                        y(e.nodes[i] - 1, e.nodes[j] - 1) += yh(i, j);
                }
            }
            continue;
        }
        stamp(e.nodes[0], e.nodes[1], element_admittance(e, f, bits, loss));
    }
    return y;
}

namespace detail {

inline std::vector<std::size_t> port_rows(const Netlist& nl,
                                          const std::vector<const Element*>& ports,
                                          std::size_t n) {
    std::vector<std::size_t> rows;
    std::set<NodeId> seen;
    for (const Element* p : ports) {
        if (p->nodes[0] <= 0)
            throw std::invalid_argument("port '" + p->label + "' sits on the ground node");
        if (!seen.insert(p->nodes[0]).second)
            throw std::invalid_argument("ports share node '" + nl.node_name(p->nodes[0]) + "'");
        rows.push_back(static_cast<std::size_t>(p->nodes[0] - 1));
        if (rows.back() >= n) throw std::logic_error("port node outside matrix");
    }
    return rows;
}

}  // namespace detail

/// Port impedance matrix: Z[i][j] = voltage at port i per unit current
/// injected at port j, all other ports open. Ports are ideal probes; their
/// reference impedances are not loaded into the circuit here. Throws
/// SingularMatrixError when the open-circuit response does not exist (a
/// floating subcircuit, or a network with no shunt path such as a bare
/// series element).
inline ComplexMatrix port_zmatrix(const Netlist& nl, double f, ConfigurationWord bits,
                                  const LossModel& loss) {
    const std::vector<const Element*> ports = nl.ports();
    if (ports.empty()) throw std::invalid_argument("port_zmatrix: netlist has no ports");
    const ComplexMatrix y = assemble_admittance(nl, f, bits, loss);
    const std::vector<std::size_t> rows = detail::port_rows(nl, ports, y.size());
    try {
        const LuDecomposition lu(y);
        const std::size_t np = ports.size();
        ComplexMatrix z(np);
        ComplexVector rhs(y.size(), Complex(0.0, 0.0));
        for (std::size_t j = 0; j < np; ++j) {
            rhs[rows[j]] = 1.0;
            const ComplexVector v = lu.solve(rhs);
            rhs[rows[j]] = 0.0;
            for (std::size_t i = 0; i < np; ++i) z(i, j) = v[rows[i]];
        }
        return z;
    } catch (const SingularMatrixError& err) {
        throw SingularMatrixError(std::string(err.what()) + " (f=" + format_value(f) +
                                  " Hz, word=" + std::to_string(bits.value()) + ")");
    }
}

/// Port admittance matrix: the node admittance matrix with every internal
/// node eliminated (Schur complement). Exists even for networks whose
/// open-circuit Z-matrix does not (e.g. a bare series element), which makes
/// it the robust path to S-parameters.
inline ComplexMatrix port_ymatrix(const Netlist& nl, double f, ConfigurationWord bits,
                                  const LossModel& loss) {
    const std::vector<const Element*> ports = nl.ports();
    if (ports.empty()) throw std::invalid_argument("port_ymatrix: netlist has no ports");
    const ComplexMatrix y = assemble_admittance(nl, f, bits, loss);
    const std::size_t n = y.size();
    const std::vector<std::size_t> prow = detail::port_rows(nl, ports, n);
    const std::size_t np = prow.size();

    std::vector<bool> is_port(n, false);
    for (const std::size_t r : prow) is_port[r] = true;
    std::vector<std::size_t> irow;
    for (std::size_t r = 0; r < n; ++r)
        if (!is_port[r]) irow.push_back(r);

    ComplexMatrix yp(np);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j) yp(i, j) = y(prow[i], prow[j]);
    if (irow.empty()) return yp;

    const std::size_t ni = irow.size();
    ComplexMatrix d(ni);
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < ni; ++j) d(i, j) = y(irow[i], irow[j]);
    try {
        const LuDecomposition lu(d);
        for (std::size_t j = 0; j < np; ++j) {
            ComplexVector c(ni);
            for (std::size_t i = 0; i < ni; ++i) c[i] = y(irow[i], prow[j]);
            const ComplexVector x = lu.solve(c);  // D^-1 C column
            for (std::size_t i = 0; i < np; ++i) {
                Complex acc(0.0, 0.0);
                for (std::size_t k = 0; k < ni; ++k) acc += y(prow[i], irow[k]) * x[k];
                yp(i, j) -= acc;
            }
        }
    } catch (const SingularMatrixError& err) {
        throw SingularMatrixError(std::string(err.what()) + " (f=" + format_value(f) +
                                  " Hz, word=" + std::to_string(bits.value()) + ")");
    }
    return yp;
}

/// S = (Z - z0 I)(Z + z0 I)^-1 for a real reference impedance z0.
inline SParameterBlock z_to_s(const ComplexMatrix& z, double z0, double f = 0.0) {
    if (z0 <= 0.0) throw std::invalid_argument("z_to_s: z0 must be > 0");
    const std::size_t n = z.size();
    ComplexMatrix zm = z;
    ComplexMatrix zp = z;
    for (std::size_t i = 0; i < n; ++i) {
        zm(i, i) -= z0;
        zp(i, i) += z0;
    }
    SParameterBlock block;
    block.f = f;
    block.z0 = z0;
    block.s = zm * invert(zp);
    return block;
}

/// Reflection coefficient of impedance z against real z0.
inline Complex reflection(Complex z, double z0) {
    if (z0 <= 0.0) throw std::invalid_argument("reflection: z0 must be > 0");
    const Complex denom = z + z0;
    if (std::abs(denom) == 0.0)
        throw std::domain_error("reflection: z = -z0 is non-passive");
    if (std::isinf(z.real()) || std::isinf(z.imag())) return Complex(1.0, 0.0);
    return (z - z0) / denom;
}

/// S = (I - z0 Y)(I + z0 Y)^-1 from a port admittance matrix.
inline SParameterBlock y_to_s(const ComplexMatrix& y, double z0, double f = 0.0) {
    if (z0 <= 0.0) throw std::invalid_argument("y_to_s: z0 must be > 0");
    const std::size_t n = y.size();
    ComplexMatrix ym = ComplexMatrix::identity(n);
    ComplexMatrix yp = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ym(i, j) -= z0 * y(i, j);
            yp(i, j) += z0 * y(i, j);
        }
    }
    SParameterBlock block;
    block.f = f;
    block.z0 = z0;
    block.s = ym * invert(yp);
    return block;
}

/// Full solve to S-parameters against the port-1 reference impedance (all
/// ports of the built networks share one z0). Goes through the port
/// admittance matrix, which exists for every passive circuit.
inline SParameterBlock solve_sparams(const Netlist& nl, double f, ConfigurationWord bits,
                                     const LossModel& loss) {
    const std::vector<const Element*> ports = nl.ports();
    if (ports.empty()) throw std::invalid_argument("solve_sparams: netlist has no ports");
    return y_to_s(port_ymatrix(nl, f, bits, loss), ports.front()->z0, f);
}

}  // namespace rfmatch
