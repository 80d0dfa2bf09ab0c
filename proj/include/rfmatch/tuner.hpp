#pragma once

// =============================================================================
// rfmatch - Inverse tuning
// =============================================================================
// Picks the configuration word that best matches a given load (and source)
// impedance. Two objectives:
//
//   min_input_reflection   minimize |Gamma_in|,
//       Gamma_in = S11 + S12 S21 G_L / (1 - S22 G_L)
//   max_transducer_gain    maximize
//       G_T = |S21|^2 (1-|G_S|^2)(1-|G_L|^2)
//             / |(1 - S11 G_S)(1 - S22 G_L) - S12 S21 G_S G_L|^2
//
// tune_exhaustive scans all 2048 words (certified global optimum, ties to
// the smallest word). tune_greedy runs steepest-descent single-bit-flip hill
// climbing from seeded random starts; with restarts >= 2048 it degenerates
// to an exhaustive scan. Both are deterministic for fixed inputs.
// =============================================================================

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>

#include "rfmatch/matching_network.hpp"
#include "rfmatch/solver.hpp"

namespace rfmatch {

enum class TuneObjective { min_input_reflection, max_transducer_gain };

inline const char* objective_name(TuneObjective o) {
    return o == TuneObjective::min_input_reflection ? "min_input_reflection"
                                                    : "max_transducer_gain";
}

struct TuneQuery {
    Complex z_load{50.0, 0.0};
    Complex z_source{50.0, 0.0};
    double f = 620e6;
    TuneObjective objective = TuneObjective::min_input_reflection;
    CouplerMode mode = CouplerMode::ideal;
    LossModel loss;
};

struct TuneResult {
    ConfigurationWord word;
    double objective_value = 0.0;  ///< |Gamma_in| or G_T at the winning word
    Complex gamma_in;
    /// Objective distance to the runner-up word. Zero when another word ties
    /// exactly; in ideal coupler mode every word has an inert-bit-10 twin,
    /// so this is always zero there.
    double gap_to_second_best = 0.0;
    std::size_t evaluations = 0;  ///< circuit solves performed
};

/// Input reflection of a terminated 2-port.
inline Complex input_reflection(const SParameterBlock& b, Complex gamma_load) {
    return b.s(0, 0) + b.s(0, 1) * b.s(1, 0) * gamma_load / (1.0 - b.s(1, 1) * gamma_load);
}

/// Transducer power gain of a 2-port between the given terminations.
inline double transducer_gain(const SParameterBlock& b, Complex gamma_source,
                              Complex gamma_load) {
    const Complex denom = (1.0 - b.s(0, 0) * gamma_source) * (1.0 - b.s(1, 1) * gamma_load) -
                          b.s(0, 1) * b.s(1, 0) * gamma_source * gamma_load;
    const double num = std::norm(b.s(1, 0)) * (1.0 - std::norm(gamma_source)) *
                       (1.0 - std::norm(gamma_load));
    return num / std::norm(denom);
}

namespace detail {

inline void check_query(const TuneQuery& q) {
    if (q.f <= 0.0) throw std::invalid_argument("tune: frequency must be > 0");
    if (q.z_load.real() < 0.0)
        throw std::invalid_argument("tune: load must be passive (Re(z_load) >= 0)");
    if (q.z_source.real() <= 0.0)
        throw std::invalid_argument("tune: source must have Re(z_source) > 0");
}

/// Objective evaluations memoized per word; scores are ordered so that
/// smaller is always better, independent of the objective sense.
class TuneEvaluator {
public:
    TuneEvaluator(const TuneQuery& q, const ComponentTable& table)
        : query_(q), netlist_(build_full_network(table, q.mode)) {
        const double z0 = table.z0;
        gamma_load_ = reflection(q.z_load, z0);
        gamma_source_ = reflection(q.z_source, z0);
    }

    /// (score, objective value); lower score wins.
    std::pair<double, double> evaluate(std::uint16_t word) {
        Entry& e = cache_[word];
        if (!e.valid) {
            const SParameterBlock b =
                solve_sparams(netlist_, query_.f, ConfigurationWord(word), query_.loss);
            e.gamma_in = input_reflection(b, gamma_load_);
            if (query_.objective == TuneObjective::min_input_reflection) {
                e.value = std::abs(e.gamma_in);
                e.score = e.value;
            } else {
                e.value = transducer_gain(b, gamma_source_, gamma_load_);
                e.score = -e.value;
            }
            e.valid = true;
            ++solves_;
        }
        return {e.score, e.value};
    }

    Complex gamma_in(std::uint16_t word) { return cache_[word].gamma_in; }
    std::size_t solves() const { return solves_; }

private:
    struct Entry {
        bool valid = false;
        double score = 0.0;
        double value = 0.0;
        Complex gamma_in;
    };
    TuneQuery query_;
    Netlist netlist_;
    Complex gamma_load_, gamma_source_;
    std::array<Entry, ConfigurationWord::kCount> cache_{};
    std::size_t solves_ = 0;
};

}  // namespace detail

/// Global optimum over all 2048 words; ties break to the smallest word.
inline TuneResult tune_exhaustive(const TuneQuery& q, const ComponentTable& table) {
    detail::check_query(q);
    detail::TuneEvaluator eval(q, table);
    double best_score = 0.0, second_score = 0.0;
    double best_value = 0.0;
    std::uint16_t best_word = 0;
    bool have_best = false, have_second = false;
    for (std::uint32_t w = 0; w < ConfigurationWord::kCount; ++w) {
        const auto [score, value] = eval.evaluate(static_cast<std::uint16_t>(w));
        if (!have_best || score < best_score) {
            if (have_best) {
                second_score = best_score;
                have_second = true;
            }
            best_score = score;
            best_value = value;
            best_word = static_cast<std::uint16_t>(w);
            have_best = true;
        } else if (!have_second || score < second_score) {
            second_score = score;
            have_second = true;
        }
    }
    TuneResult r;
    r.word = ConfigurationWord(best_word);
    r.objective_value = best_value;
    r.gamma_in = eval.gamma_in(best_word);
    r.gap_to_second_best = have_second ? second_score - best_score : 0.0;
    r.evaluations = eval.solves();
    return r;
}

namespace detail {

/// Steepest-descent single-bit-flip climb; returns the local optimum word.
inline std::uint16_t greedy_climb(TuneEvaluator& eval, std::uint16_t start) {
    std::uint16_t word = start;
    double score = eval.evaluate(word).first;
    for (;;) {
        std::uint16_t best_neighbor = word;
        double best_score = score;
        for (int k = 0; k < ConfigurationWord::kBits; ++k) {
            const std::uint16_t cand = word ^ static_cast<std::uint16_t>(1u << k);
            const double s = eval.evaluate(cand).first;
            if (s < best_score || (s == best_score && cand < best_neighbor)) {
                best_score = s;
                best_neighbor = cand;
            }
        }
        if (best_score >= score) return word;  // strict improvement only
        word = best_neighbor;
        score = best_score;
    }
}

}  // namespace detail

/// Hill climbing from `restarts` seeded random start words. Deterministic
/// for a fixed seed (starts come straight from mt19937 output, masked to
/// 11 bits). restarts >= 2048 switches to scanning every word as a start,
/// which reproduces the exhaustive optimum.
inline TuneResult tune_greedy(const TuneQuery& q, const ComponentTable& table, int restarts,
                              std::uint32_t seed) {
    detail::check_query(q);
    if (restarts < 1) throw std::invalid_argument("tune_greedy: restarts must be >= 1");
    detail::TuneEvaluator eval(q, table);

    std::vector<std::uint16_t> starts;
    if (restarts >= static_cast<int>(ConfigurationWord::kCount)) {
        starts.resize(ConfigurationWord::kCount);
        for (std::uint32_t w = 0; w < ConfigurationWord::kCount; ++w)
            starts[w] = static_cast<std::uint16_t>(w);
    } else {
        std::mt19937 gen(seed);
        starts.reserve(restarts);
        for (int r = 0; r < restarts; ++r)
            starts.push_back(static_cast<std::uint16_t>(gen() & (ConfigurationWord::kCount - 1)));
    }

    bool have_best = false;
    std::uint16_t best_word = 0;
    double best_score = 0.0, best_value = 0.0;
    std::vector<std::pair<std::uint16_t, double>> optima;
    for (const std::uint16_t start : starts) {
        const std::uint16_t local = detail::greedy_climb(eval, start);
        const auto [score, value] = eval.evaluate(local);
        optima.emplace_back(local, score);
        if (!have_best || score < best_score ||
            (score == best_score && local < best_word)) {
            best_word = local;
            best_score = score;
            best_value = value;
            have_best = true;
        }
    }

    TuneResult r;
    r.word = ConfigurationWord(best_word);
    r.objective_value = best_value;
    r.gamma_in = eval.gamma_in(best_word);
    r.gap_to_second_best = 0.0;  // runner-up gap among the local optima found
    bool have_second = false;
    for (const auto& [word, score] : optima) {
        if (word == best_word) continue;
        if (!have_second || score - best_score < r.gap_to_second_best) {
            r.gap_to_second_best = score - best_score;
            have_second = true;
        }
    }
    r.evaluations = eval.solves();
    return r;
}

}  // namespace rfmatch
