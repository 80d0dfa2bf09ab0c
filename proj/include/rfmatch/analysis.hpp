#pragma once

// =============================================================================
// rfmatch - Configuration-space analysis
// =============================================================================
// Enumerates the 2048-word configuration space of the matching network,
// derives Smith-chart coverage metrics from the output-reflection cloud,
// measures the phase-control span of the second stage, and sweeps the loss
// model to quantify coverage shrink.
//
// Enumeration is embarrassingly parallel over words; every worker writes to
// its own preassigned slots, so results (and serialized output) are
// byte-identical for any thread count.
// =============================================================================

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "rfmatch/matching_network.hpp"
#include "rfmatch/solver.hpp"

namespace rfmatch {

// =============================================================================
// State enumeration
// =============================================================================

/// One solved configuration: 2-port S-parameters at one frequency.
/// gamma_out is the output-port reflection (S22), the quantity whose cloud
/// forms the Smith-chart coverage.
struct StatePoint {
    std::uint16_t word = 0;
    double f = 0.0;
    Complex s11, s21, s22;
    Complex gamma_out() const { return s22; }
};

/// Mask of control bits to sweep; frozen bits stay 0.
using BitMask = std::uint16_t;
inline constexpr BitMask kAllBits = (1u << ConfigurationWord::kBits) - 1;

/// Expands counter index i over the set bits of `subset`, ascending.
inline ConfigurationWord expand_word(std::uint32_t index, BitMask subset) {
    std::uint16_t word = 0;
    int out_bit = 0;
    for (int b = 0; b < ConfigurationWord::kBits; ++b) {
        if (!(subset & (1u << b))) continue;
        if (index & (1u << out_bit)) word |= static_cast<std::uint16_t>(1u << b);
        ++out_bit;
    }
    return ConfigurationWord(word);
}

/// Solves a 2-port netlist for every word over `subset` (other bits 0),
/// ascending by word. Deterministic for any `threads`.
inline std::vector<StatePoint> enumerate_netlist_states(const Netlist& nl, double f,
                                                        const LossModel& loss,
                                                        BitMask subset = kAllBits,
                                                        unsigned threads = 1) {
    subset &= kAllBits;
    const std::uint32_t count = 1u << std::popcount(static_cast<std::uint32_t>(subset));
    std::vector<StatePoint> points(count);
    std::exception_ptr first_error;
    std::uint32_t first_error_index = count;

    auto work = [&](std::uint32_t begin, std::uint32_t end, std::exception_ptr& err,
                    std::uint32_t& err_index) {
        for (std::uint32_t i = begin; i < end; ++i) {
            try {
                const ConfigurationWord word = expand_word(i, subset);
                const SParameterBlock block = solve_sparams(nl, f, word, loss);
                StatePoint& p = points[i];
                p.word = word.value();
                p.f = f;
                p.s11 = block.s(0, 0);
                p.s21 = block.s.size() > 1 ? block.s(1, 0) : Complex(0.0, 0.0);
                p.s22 = block.s.size() > 1 ? block.s(1, 1) : block.s(0, 0);
            } catch (...) {
                if (!err) {
                    err = std::current_exception();
                    err_index = i;
                }
                return;
            }
        }
    };

    if (threads <= 1 || count < 64) {
        work(0, count, first_error, first_error_index);
    } else {
        const unsigned n = std::min<unsigned>(threads, count);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(n);
        std::vector<std::uint32_t> err_idx(n, count);
        const std::uint32_t chunk = (count + n - 1) / n;
        for (unsigned t = 0; t < n; ++t) {
            const std::uint32_t begin = t * chunk;
            const std::uint32_t end = std::min(count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end, t] { work(begin, end, errs[t], err_idx[t]); });
        }
        for (std::thread& th : pool) th.join();
        for (unsigned t = 0; t < n; ++t) {
            if (errs[t] && err_idx[t] < first_error_index) {
                first_error = errs[t];
                first_error_index = err_idx[t];
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return points;
}

/// Enumerates the full network built from `table` in the given mode.
inline std::vector<StatePoint> enumerate_states(const ComponentTable& table, CouplerMode mode,
                                                double f, const LossModel& loss,
                                                BitMask subset = kAllBits, unsigned threads = 1) {
    return enumerate_netlist_states(build_full_network(table, mode), f, loss, subset, threads);
}

// =============================================================================
// Coverage metrics
// =============================================================================

class EmptyInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CoverageReport {
    double max_radius = 0.0;     ///< max |gamma_out| over the cloud
    double epsilon = 0.1;        ///< capture radius of the grid metric
    int grid_n = 101;            ///< grid resolution per axis
    std::size_t grid_total = 0;  ///< grid points inside the unit disc
    std::size_t grid_covered = 0;
    double grid_coverage = 0.0;      ///< grid_covered / grid_total
    std::size_t distinct_count = 0;  ///< distinct gamma values at 1e-6
};

/// Coverage of the unit disc by the reflection cloud: the fraction of an
/// n x n Cartesian grid restricted to the disc that lies within epsilon of
/// some achieved gamma. Distinctness buckets gamma on a 1e-6 grid.
inline CoverageReport coverage_metrics(const std::vector<StatePoint>& points, double epsilon = 0.1,
                                       int grid_n = 101) {
    if (points.empty()) throw EmptyInputError("coverage_metrics: no states");
    if (epsilon <= 0.0) throw std::invalid_argument("coverage_metrics: epsilon must be > 0");
    if (grid_n < 16) throw std::invalid_argument("coverage_metrics: grid_n must be >= 16");

    CoverageReport rep;
    rep.epsilon = epsilon;
    rep.grid_n = grid_n;

    std::vector<Complex> cloud;
    cloud.reserve(points.size());
    for (const StatePoint& p : points) {
        cloud.push_back(p.gamma_out());
        rep.max_radius = std::max(rep.max_radius, std::abs(p.gamma_out()));
    }

    const double eps2 = epsilon * epsilon;
    for (int i = 0; i < grid_n; ++i) {
        const double x = -1.0 + 2.0 * i / (grid_n - 1);
        for (int j = 0; j < grid_n; ++j) {
            const double y = -1.0 + 2.0 * j / (grid_n - 1);
            if (x * x + y * y > 1.0) continue;
            ++rep.grid_total;
            for (const Complex& g : cloud) {
                const double dx = g.real() - x;
                const double dy = g.imag() - y;
                if (dx * dx + dy * dy <= eps2) {
                    ++rep.grid_covered;
                    break;
                }
            }
        }
    }
    rep.grid_coverage = static_cast<double>(rep.grid_covered) / rep.grid_total;

    std::set<std::pair<long long, long long>> buckets;
    for (const Complex& g : cloud)
        buckets.emplace(std::llround(g.real() * 1e6), std::llround(g.imag() * 1e6));
    rep.distinct_count = buckets.size();
    return rep;
}

// =============================================================================
// Phase span
// =============================================================================

/// Minimal circular arc, in degrees, containing all the given phases.
inline double circular_span_deg(std::vector<double> phases_deg) {
    if (phases_deg.size() < 2) return 0.0;
    for (double& p : phases_deg) {
        p = std::fmod(p, 360.0);
        if (p < 0.0) p += 360.0;
    }
    std::sort(phases_deg.begin(), phases_deg.end());
    double max_gap = phases_deg.front() + 360.0 - phases_deg.back();
    for (std::size_t i = 1; i < phases_deg.size(); ++i)
        max_gap = std::max(max_gap, phases_deg[i] - phases_deg[i - 1]);
    return 360.0 - max_gap;
}

struct PhaseSpanReport {
    std::vector<double> phases_deg;  ///< stage S21 phase per phase word, ascending word
    double span_deg = 0.0;           ///< minimal arc containing the S21 phases
    double rotation_span_deg = 0.0;  ///< arc of the reflection rotations 2*phase
};

/// Transmission-phase control span of the phase stage alone, over its 2^3
/// phase words (bits 8-10). rotation_span_deg measures the doubled phases:
/// a reflection at the output port crosses the stage twice, so the rotation
/// applied to the first-stage coverage is twice the transmission phase.
inline PhaseSpanReport phase_span(const ComponentTable& table, CouplerMode mode, double f,
                                  const LossModel& loss) {
    const Netlist stage = build_phase_stage(table, mode);
    const BitMask subset = (1u << kPhase1Bit) | (1u << kPhase2Bit) | (1u << kCouplerVarBit);
    const std::vector<StatePoint> states = enumerate_netlist_states(stage, f, loss, subset);
    PhaseSpanReport rep;
    std::vector<double> doubled;
    for (const StatePoint& p : states) {
        double deg = std::arg(p.s21) * 180.0 / std::numbers::pi;
        if (deg < 0.0) deg += 360.0;
        rep.phases_deg.push_back(deg);
        doubled.push_back(std::fmod(2.0 * deg, 360.0));
    }
    rep.span_deg = circular_span_deg(rep.phases_deg);
    rep.rotation_span_deg = circular_span_deg(doubled);
    return rep;
}

// =============================================================================
// Loss sweep
// =============================================================================

struct LossSweepPoint {
    LossModel loss;
    double max_radius = 0.0;
    double radius_ratio = 0.0;  ///< max_radius / lossless max_radius
};

/// Sweeps loss parameter settings and reports the coverage-radius shrink of
/// the full 2048-word cloud relative to the lossless network. The grid must
/// contain the lossless point (it anchors the ratio at exactly 1).
inline std::vector<LossSweepPoint> loss_sweep(const ComponentTable& table, CouplerMode mode,
                                              double f, const std::vector<LossModel>& grid,
                                              unsigned threads = 1) {
    if (std::none_of(grid.begin(), grid.end(), [](const LossModel& m) { return m.lossless; }))
        throw std::invalid_argument("loss_sweep: grid must include the lossless point");
    const Netlist nl = build_full_network(table, mode);
    auto radius = [&](const LossModel& loss) {
        double r = 0.0;
        for (const StatePoint& p : enumerate_netlist_states(nl, f, loss, kAllBits, threads))
            r = std::max(r, std::abs(p.gamma_out()));
        return r;
    };
    const double r0 = radius(LossModel::ideal());
    std::vector<LossSweepPoint> out;
    out.reserve(grid.size());
    for (const LossModel& m : grid) {
        LossSweepPoint pt;
        pt.loss = m;
        pt.max_radius = m.lossless ? r0 : radius(m);
        pt.radius_ratio = pt.max_radius / r0;
        out.push_back(pt);
    }
    return out;
}

// =============================================================================
// CSV serialization
// =============================================================================

/// Fixed 17-significant-digit float form used in CSV output.
inline std::string format_csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string to_csv(const std::vector<StatePoint>& points) {
    std::string out = "word,f_hz,re_s11,im_s11,re_s21,im_s21,re_s22,im_s22\n";
    for (const StatePoint& p : points) {
        out += std::to_string(p.word);
        out += ',';
        out += format_csv_double(p.f);
        for (const Complex& c : {p.s11, p.s21, p.s22}) {
            out += ',';
            out += format_csv_double(c.real());
            out += ',';
            out += format_csv_double(c.imag());
        }
        out += '\n';
    }
    return out;
}

}  // namespace rfmatch
