#pragma once

// =============================================================================
// rfmatch - Frequency-dependent element models
// =============================================================================
// Electrical models for every element kind, the ideal 3-dB quadrature hybrid,
// the closed-form reflective-type phase-shifter response, and the design
// value table of the 620 MHz RF-MEMS matching network.
//
// Loss model: a single quality factor per reactance type, applied as a series
// resistance evaluated at the reference frequency,
//     inductor   R_s = w_ref L / Q_L
//     capacitor  ESR = 1 / (w_ref C Q_C)
// MEMS contact resistance R_on is added to a switched capacitor only in its
// actuated (high) state, where the ohmic contact carries the signal. A relay
// is R_on closed and C_off to ground open. `lossless` zeroes all of it.
// =============================================================================

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rfmatch/linalg.hpp"
#include "rfmatch/netlist.hpp"

namespace rfmatch {

// =============================================================================
// Loss model
// =============================================================================

struct LossModel {
    double q_l = 30.0;      ///< inductor quality factor at f_ref
    double q_c = 100.0;     ///< capacitor quality factor at f_ref
    double r_on = 1.5;      ///< MEMS ohmic contact resistance [ohm]
    double c_off = 50e-15;  ///< relay up-state coupling capacitance [F]
    double f_ref = 620e6;   ///< reference frequency for the Q values [Hz]
    bool lossless = false;  ///< zeroes every parasitic above

    static LossModel ideal() {
        LossModel m;
        m.lossless = true;
        return m;
    }
};

// =============================================================================
// Design values
// =============================================================================

/// A capacitance switchable between two fixed values by one MEMS bit.
struct TwoValued {
    double low = 0.0;
    double high = 0.0;
    double select(bool bit) const { return bit ? high : low; }
};

/// Component values of the reconfigurable matching network. Defaults are the
/// as-designed values; all capacitances in F, inductances in H.
struct ComponentTable {
    TwoValued c_pa{4.5e-12, 6.5e-12};     ///< section-1 shunt varactor
    TwoValued c_p{4e-12, 7e-12};          ///< section-2..4 shunt varactors
    TwoValued c_s{4e-12, 7e-12};          ///< series varactors resonating L_s
    double c_1 = 5.14e-12;                ///< coupler cross-arm capacitor
    double c_2 = 2.12e-12;                ///< coupler node capacitor
    TwoValued c_2var{2.12e-12, 5.5e-12};  ///< two-valued coupler node capacitor
    double c_decoup = 6e-12;              ///< DC block ahead of each reflective load
    TwoValued c_phase1{0.57e-12, 3.14e-12};  ///< reflective-load shunt varactor 1
    TwoValued c_phase2{2e-12, 7.14e-12};     ///< reflective-load shunt varactor 2
    double l_s = 16e-9;    ///< CL-section series inductor
    double l_h = 8.5e-9;   ///< coupler arm inductor
    double l_res = 16e-9;  ///< reflective-load series resonating inductor
    double f_design = 620e6;
    double z0 = 50.0;
};

// =============================================================================
// Element impedance / admittance
// =============================================================================

namespace detail {

inline double angular(double f) { return 2.0 * std::numbers::pi * f; }

inline double inductor_series_r(double l, double q_override, const LossModel& loss) {
    if (loss.lossless) return 0.0;
    const double q = q_override > 0.0 ? q_override : loss.q_l;
    return angular(loss.f_ref) * l / q;
}

inline double capacitor_esr(double c, double q_override, const LossModel& loss) {
    if (loss.lossless) return 0.0;
    const double q = q_override > 0.0 ? q_override : loss.q_c;
    return 1.0 / (angular(loss.f_ref) * c * q);
}

// Closed ideal relays would stamp an infinite admittance; floor the contact
// resistance instead.
inline constexpr double kMinContactResistance = 1e-9;

}  // namespace detail

inline Complex inductor_impedance(double l, double f, const LossModel& loss,
                                  double q_override = 0.0) {
    return Complex(detail::inductor_series_r(l, q_override, loss),
                   detail::angular(f) * l);
}

inline Complex capacitor_impedance(double c, double f, const LossModel& loss,
                                   double q_override = 0.0) {
    return Complex(detail::capacitor_esr(c, q_override, loss),
                   -1.0 / (detail::angular(f) * c));
}

inline Complex switched_capacitor_impedance(double c_low, double c_high, bool bit, double f,
                                            const LossModel& loss, double r_on_override = -1.0,
                                            double q_override = 0.0) {
    const double c = bit ? c_high : c_low;
    double r = detail::capacitor_esr(c, q_override, loss);
    if (bit && !loss.lossless)
        r += r_on_override >= 0.0 ? r_on_override : loss.r_on;
    return Complex(r, -1.0 / (detail::angular(f) * c));
}

/// Admittance of a two-terminal element at frequency f under configuration
/// `bits`. An open relay with zero up-state capacitance contributes zero.
inline Complex element_admittance(const Element& e, double f, ConfigurationWord bits,
                                  const LossModel& loss) {
    if (f <= 0.0) throw std::invalid_argument("element_admittance: frequency must be > 0");
    switch (e.kind) {
        case ElementKind::resistor:
            return 1.0 / Complex(e.resistance, 0.0);
        case ElementKind::inductor:
            return 1.0 / inductor_impedance(e.inductance, f, loss, e.q_factor);
        case ElementKind::capacitor:
            return 1.0 / capacitor_impedance(e.capacitance, f, loss, e.q_factor);
        case ElementKind::switched_capacitor:
            return 1.0 / switched_capacitor_impedance(e.cap_low, e.cap_high,
                                                      bits.bit(e.control_bit), f, loss, e.r_on,
                                                      e.q_factor);
        case ElementKind::relay: {
            if (bits.bit(e.control_bit)) {
                double r = loss.lossless ? 0.0 : (e.r_on >= 0.0 ? e.r_on : loss.r_on);
                r = std::max(r, detail::kMinContactResistance);
                return 1.0 / Complex(r, 0.0);
            }
            const double c = loss.lossless ? 0.0 : (e.c_off >= 0.0 ? e.c_off : loss.c_off);
            if (c <= 0.0) return Complex(0.0, 0.0);  // open
            return Complex(0.0, detail::angular(f) * c);
        }
        case ElementKind::port:
            return Complex(0.0, 0.0);  // ports are probe terminals, not conductors
        case ElementKind::ideal_hybrid:
            throw std::invalid_argument("element_admittance: hybrid is not a two-terminal");
    }
    throw std::logic_error("element_admittance: unreachable");
}

/// Impedance of a two-terminal element; the reciprocal of element_admittance.
/// An open relay reports an infinite impedance.
inline Complex element_impedance(const Element& e, double f, ConfigurationWord bits,
                                 const LossModel& loss) {
    const Complex y = element_admittance(e, f, bits, loss);
    if (y == Complex(0.0, 0.0))
        return Complex(std::numeric_limits<double>::infinity(), 0.0);
    return 1.0 / y;
}

// =============================================================================
// Ideal 3-dB quadrature hybrid
// =============================================================================

struct SParameterBlock {
    double f = 0.0;    ///< frequency [Hz]
    double z0 = 50.0;  ///< real reference impedance [ohm]
    ComplexMatrix s;
};

/// S-matrix of the ideal 3-dB 90-degree hybrid. Port convention: 1 input,
/// 2 output, 3 and 4 load ports. Through paths 1<->3 and 2<->4 at -90deg,
/// coupled paths 1<->4 and 2<->3 at -180deg, ports 1-2 and 3-4 isolated.
/// The matrix is symmetric and unitary.
inline SParameterBlock ideal_hybrid_smatrix(double z0) {
    if (z0 <= 0.0) throw std::invalid_argument("hybrid: z0 must be > 0");
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const Complex through(0.0, -inv_sqrt2);  // -90 deg
    const Complex coupled(-inv_sqrt2, 0.0);  // -180 deg
    SParameterBlock block;
    block.z0 = z0;
    block.s = ComplexMatrix(4);
    auto set = [&](int a, int b, Complex v) {
        block.s(a, b) = v;
        block.s(b, a) = v;
    };
    set(0, 2, through);
    set(1, 3, through);
    set(0, 3, coupled);
    set(1, 2, coupled);
    return block;
}

/// Thrown when a multiport S-matrix cannot be embedded as a nodal admittance
/// even after series-resistance regularization.
class SingularEmbeddingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Nodal admittance of an S-defined multiport: Y = (1/z0)(I - S)(I + S)^-1.
/// If (I + S) is singular (an eigenvalue of S equals -1), the device is
/// augmented with 1e-6 ohm series resistors and converted through the
/// Z-parameter form instead.
inline ComplexMatrix hybrid_admittance(const ComplexMatrix& s, double z0) {
    const std::size_t n = s.size();
    const ComplexMatrix eye = ComplexMatrix::identity(n);
    try {
        ComplexMatrix y = (eye - s) * invert(eye + s);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) y(i, j) /= z0;
        return y;
    } catch (const SingularMatrixError&) {
        // fall through to the regularized path
    }
    try {
        ComplexMatrix z = invert(eye - s) * (eye + s);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) z(i, j) *= z0;
        for (std::size_t i = 0; i < n; ++i) z(i, i) += 1e-6;
        return invert(z);
    } catch (const SingularMatrixError&) {
        throw SingularEmbeddingError("S-matrix admits no admittance embedding");
    }
}

// =============================================================================
// Reflective-type phase shifter, closed form
// =============================================================================

/// Two-port response of the ideal hybrid with identical reflective loads of
/// reflection coefficient `gamma_load` on ports 3 and 4: the input wave
/// splits, reflects off both loads and recombines at the output, giving
/// S21 = S12 = j*gamma_load and S11 = S22 = 0. The +90deg constant follows
/// from the hybrid phase convention above; only phase differences between
/// load states are convention-independent.
inline SParameterBlock rtps_response(Complex gamma_load) {
    SParameterBlock block;
    block.s = ComplexMatrix(2);
    const Complex s21 = Complex(0.0, 1.0) * gamma_load;
    block.s(0, 1) = s21;
    block.s(1, 0) = s21;
    return block;
}

// =============================================================================
// Reflective load, closed form
// =============================================================================

/// Impedance of one reflective load: series L_res, then the two shunt
/// varactors C_phase1 (bit 8) and C_phase2 (bit 9) in parallel to ground.
inline Complex reflective_load_impedance(ConfigurationWord bits, double f,
                                         const ComponentTable& table, const LossModel& loss) {
    if (f <= 0.0) throw std::invalid_argument("reflective_load_impedance: f must be > 0");
    const Complex z1 = switched_capacitor_impedance(table.c_phase1.low, table.c_phase1.high,
                                                    bits.bit(8), f, loss);
    const Complex z2 = switched_capacitor_impedance(table.c_phase2.low, table.c_phase2.high,
                                                    bits.bit(9), f, loss);
    const Complex y = 1.0 / z1 + 1.0 / z2;
    return inductor_impedance(table.l_res, f, loss) + 1.0 / y;
}

}  // namespace rfmatch
