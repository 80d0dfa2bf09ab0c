// =============================================================================
// rfmatch - command line front end
// =============================================================================
// Subcommands:
//   netlist     emit the network as canonical netlist text
//   enumerate   solve every configuration, CSV of S-parameters
//   coverage    Smith-chart coverage report, JSON
//   phase-span  phase-control span of the second stage, JSON
//   tune        pick the best configuration for a load, JSON
//   loss-sweep  coverage-radius shrink over a loss-parameter grid, CSV
//
// stdout carries only data; diagnostics go to stderr. Exit codes: 0 success,
// 1 solver/model error, 2 usage error.
// =============================================================================

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfmatch/rfmatch.hpp"

namespace {

using nlohmann::json;
using namespace rfmatch;

/// Usage-level failure (malformed flag values); exits with code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double si_value(const std::string& text, const char* what) {
    double v = 0.0;
    if (!try_parse_si_value(text, v))
        throw UsageError(std::string("malformed ") + what + " '" + text + "'");
    return v;
}

/// Parses "a+bj" / "a-bj" / "a" / "bj". Rejects anything ambiguous.
Complex parse_complex(const std::string& text) {
    const auto fail = [&]() -> Complex {
        throw UsageError("malformed complex number '" + text + "' (expected a+bj)");
    };
    if (text.empty()) return fail();
    // split off an imaginary part ending in 'j', if present
    if (text.back() == 'j') {
        std::size_t split = std::string::npos;
        for (std::size_t i = text.size() - 1; i > 0; --i) {
            const char c = text[i];
            if ((c == '+' || c == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
                split = i;
                break;
            }
        }
        const std::string re_part = split == std::string::npos ? "" : text.substr(0, split);
        std::string im_part = text.substr(split == std::string::npos ? 0 : split);
        im_part.pop_back();  // drop 'j'
        if (im_part.empty() || im_part == "+" || im_part == "-") return fail();
        char* end = nullptr;
        const double im = std::strtod(im_part.c_str(), &end);
        if (*end != '\0') return fail();
        double re = 0.0;
        if (!re_part.empty()) {
            const double v = std::strtod(re_part.c_str(), &end);
            if (end == re_part.c_str() || *end != '\0') return fail();
            re = v;
        }
        return Complex(re, im);
    }
    char* end = nullptr;
    const double re = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') return fail();
    return Complex(re, 0.0);
}

/// Parses "all", "0-7", "0,1,8-10" into a control-bit mask.
BitMask parse_bit_spec(const std::string& spec) {
    if (spec == "all") return kAllBits;
    BitMask mask = 0;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string item = spec.substr(pos, comma - pos);
        const std::size_t dash = item.find('-');
        auto bit = [&](const std::string& s) -> int {
            char* end = nullptr;
            const long v = std::strtol(s.c_str(), &end, 10);
            if (end == s.c_str() || *end != '\0' || v < 0 || v >= ConfigurationWord::kBits)
                throw UsageError("malformed bit spec '" + spec + "'");
            return static_cast<int>(v);
        };
        if (dash == std::string::npos) {
            mask |= static_cast<BitMask>(1u << bit(item));
        } else {
            const int lo = bit(item.substr(0, dash));
            const int hi = bit(item.substr(dash + 1));
            if (lo > hi) throw UsageError("malformed bit range '" + item + "'");
            for (int b = lo; b <= hi; ++b) mask |= static_cast<BitMask>(1u << b);
        }
        pos = comma + 1;
    }
    if (mask == 0 && spec != "none") throw UsageError("empty bit spec '" + spec + "'");
    return mask;
}

std::vector<double> parse_si_list(const std::string& list, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        std::size_t comma = list.find(',', pos);
        if (comma == std::string::npos) comma = list.size();
        const std::string item = list.substr(pos, comma - pos);
        if (!item.empty()) out.push_back(si_value(item, what));
        pos = comma + 1;
    }
    if (out.empty()) throw UsageError(std::string("empty list for ") + what);
    return out;
}

struct RunConfig {
    std::string freq = "620M";
    std::string mode = "ideal";
    double q_l = 30.0;
    double q_c = 100.0;
    double r_on = 1.5;
    std::string c_off = "50f";
    std::string f_ref = "620M";
    bool lossless = false;
    unsigned threads = std::thread::hardware_concurrency();
    std::string output;
    std::string config_path;

    double frequency() const {
        const double f = si_value(freq, "frequency");
        if (f <= 0.0) throw UsageError("frequency must be > 0");
        return f;
    }
    CouplerMode coupler_mode() const {
        try {
            return parse_coupler_mode(mode);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    LossModel loss_model() const {
        LossModel m;
        m.q_l = q_l;
        m.q_c = q_c;
        m.r_on = r_on;
        m.c_off = si_value(c_off, "c_off");
        m.f_ref = si_value(f_ref, "f_ref");
        m.lossless = lossless;
        if (m.q_l <= 0.0 || m.q_c <= 0.0) throw UsageError("quality factors must be > 0");
        if (m.r_on < 0.0 || m.c_off < 0.0) throw UsageError("r_on and c_off must be >= 0");
        return m;
    }
    unsigned thread_count() const { return threads == 0 ? 1 : threads; }
};

void write_output(const RunConfig& cfg, const std::string& data) {
    if (cfg.output.empty()) {
        std::cout << data;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + cfg.output + "'");
    out << data;
}

json complex_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

/// key=value file, '#' comments. Flags given on the command line win.
void apply_config_file(CLI::App* cmd, RunConfig& cfg) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in) throw UsageError("cannot open config file '" + cfg.config_path + "'");

    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto overridden = [&](const char* flag) { return cmd->count(flag) > 0; };
        const auto number = [&] { return si_value(value, key.c_str()); };
        if (key == "freq") {
            if (!overridden("--freq")) cfg.freq = value;
        } else if (key == "mode") {
            if (!overridden("--mode")) cfg.mode = value;
        } else if (key == "ql") {
            if (!overridden("--ql")) cfg.q_l = number();
        } else if (key == "qc") {
            if (!overridden("--qc")) cfg.q_c = number();
        } else if (key == "ron") {
            if (!overridden("--ron")) cfg.r_on = number();
        } else if (key == "coff") {
            if (!overridden("--coff")) cfg.c_off = value;
        } else if (key == "fref") {
            if (!overridden("--fref")) cfg.f_ref = value;
        } else if (key == "lossless") {
            if (!overridden("--lossless"))
                cfg.lossless = (value == "true" || value == "1" || value == "yes");
        } else if (key == "threads") {
            if (!overridden("--threads")) cfg.threads = static_cast<unsigned>(number());
        } else if (key == "output") {
            if (!overridden("--output")) cfg.output = value;
        } else {
            throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" +
                             key + "'");
        }
    }
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--config", cfg.config_path,
                    "key=value config file; flags take precedence");
    cmd->add_option("--freq", cfg.freq, "frequency in Hz (SI suffixes ok)")
        ->capture_default_str();
    cmd->add_option("--mode", cfg.mode, "coupler mode: ideal | lumped")
        ->capture_default_str();
    cmd->add_option("--ql", cfg.q_l, "inductor quality factor")->capture_default_str();
    cmd->add_option("--qc", cfg.q_c, "capacitor quality factor")->capture_default_str();
    cmd->add_option("--ron", cfg.r_on, "MEMS contact resistance [ohm]")->capture_default_str();
    cmd->add_option("--coff", cfg.c_off, "relay up-state capacitance [F]")
        ->capture_default_str();
    cmd->add_option("--fref", cfg.f_ref, "loss-model reference frequency")
        ->capture_default_str();
    cmd->add_flag("--lossless", cfg.lossless, "zero all parasitics");
    cmd->add_option("--threads", cfg.threads, "worker threads for enumeration")
        ->capture_default_str();
    cmd->add_option("-o,--output", cfg.output, "write data to file instead of stdout");
}

int run(int argc, char** argv) {
    CLI::App app{"rfmatch - RF-MEMS reconfigurable matching network simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    ComponentTable table;

    // netlist
    auto* cmd_netlist = app.add_subcommand("netlist", "emit the network netlist");
    int word_flag = -1;
    add_common_options(cmd_netlist, cfg);
    cmd_netlist->add_option("--word", word_flag, "freeze this configuration word into the text");

    // enumerate
    auto* cmd_enumerate = app.add_subcommand("enumerate", "CSV of all configuration states");
    std::string bits_spec = "all";
    add_common_options(cmd_enumerate, cfg);
    cmd_enumerate->add_option("--bits", bits_spec, "control bits to sweep, e.g. all or 0-7")
        ->capture_default_str();

    // coverage
    auto* cmd_coverage = app.add_subcommand("coverage", "JSON Smith-chart coverage report");
    double epsilon = 0.1;
    int grid_n = 101;
    std::string cov_bits = "all";
    add_common_options(cmd_coverage, cfg);
    cmd_coverage->add_option("--epsilon", epsilon, "grid capture radius")->capture_default_str();
    cmd_coverage->add_option("--grid-n", grid_n, "grid resolution per axis")
        ->capture_default_str();
    cmd_coverage->add_option("--bits", cov_bits, "control bits to sweep")->capture_default_str();

    // phase-span
    auto* cmd_span = app.add_subcommand("phase-span", "JSON phase-control span of stage two");
    add_common_options(cmd_span, cfg);

    // tune
    auto* cmd_tune = app.add_subcommand("tune", "pick the best word for a load impedance");
    std::string load_str, source_str = "50";
    std::string objective_str = "reflection";
    bool greedy = false;
    int restarts = 8;
    unsigned seed = 1;
    add_common_options(cmd_tune, cfg);
    cmd_tune->add_option("--load", load_str, "load impedance, e.g. 25-40j")->required();
    cmd_tune->add_option("--source", source_str, "source impedance")->capture_default_str();
    cmd_tune->add_option("--objective", objective_str, "reflection | gain")
        ->capture_default_str();
    cmd_tune->add_flag("--greedy", greedy, "bit-flip hill climbing instead of exhaustive scan");
    cmd_tune->add_option("--restarts", restarts, "greedy restarts")->capture_default_str();
    cmd_tune->add_option("--seed", seed, "greedy start seed")->capture_default_str();

    // loss-sweep
    auto* cmd_sweep = app.add_subcommand("loss-sweep", "CSV of coverage shrink over loss grid");
    std::string ql_grid = "10,20,30,50,100", qc_grid, ron_grid, coff_grid;
    add_common_options(cmd_sweep, cfg);
    cmd_sweep->add_option("--ql-grid", ql_grid, "comma list of Q_L values")
        ->capture_default_str();
    cmd_sweep->add_option("--qc-grid", qc_grid, "comma list of Q_C values (default: --qc)");
    cmd_sweep->add_option("--ron-grid", ron_grid, "comma list of R_on values (default: --ron)");
    cmd_sweep->add_option("--coff-grid", coff_grid, "comma list of C_off values (default: --coff)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    apply_config_file(app.get_subcommands().front(), cfg);

    const double f = cfg.frequency();
    const CouplerMode mode = cfg.coupler_mode();
    const LossModel loss = cfg.loss_model();

    if (cmd_netlist->parsed()) {
        Netlist nl = build_full_network(table, mode);
        if (word_flag >= 0) {
            if (word_flag >= ConfigurationWord::kCount)
                throw UsageError("--word out of [0, 2047]");
            nl = freeze_configuration(nl, ConfigurationWord(static_cast<uint16_t>(word_flag)),
                                      loss);
        }
        write_output(cfg, nl.serialize());
    } else if (cmd_enumerate->parsed()) {
        const BitMask mask = parse_bit_spec(bits_spec);
        const auto points = enumerate_states(table, mode, f, loss, mask, cfg.thread_count());
        write_output(cfg, to_csv(points));
    } else if (cmd_coverage->parsed()) {
        const BitMask mask = parse_bit_spec(cov_bits);
        const auto points = enumerate_states(table, mode, f, loss, mask, cfg.thread_count());
        const CoverageReport rep = coverage_metrics(points, epsilon, grid_n);
        const PhaseSpanReport span = phase_span(table, mode, f, loss);
        json out{
            {"f_hz", f},
            {"mode", coupler_mode_name(mode)},
            {"z0", table.z0},
            {"bits", bits_spec},
            {"max_radius", rep.max_radius},
            {"epsilon", rep.epsilon},
            {"grid_n", rep.grid_n},
            {"grid_total", rep.grid_total},
            {"grid_covered", rep.grid_covered},
            {"grid_coverage", rep.grid_coverage},
            {"distinct_count", rep.distinct_count},
            {"phase_span_deg", span.span_deg},
            {"rotation_span_deg", span.rotation_span_deg},
        };
        json pts = json::array();
        for (const StatePoint& p : points) {
            pts.push_back(json{{"word", p.word},
                               {"s11", complex_json(p.s11)},
                               {"s21", complex_json(p.s21)},
                               {"s22", complex_json(p.s22)}});
        }
        out["points"] = std::move(pts);
        write_output(cfg, out.dump(2) + "\n");
    } else if (cmd_span->parsed()) {
        const PhaseSpanReport rep = phase_span(table, mode, f, loss);
        json out{
            {"f_hz", f},
            {"mode", coupler_mode_name(mode)},
            {"phases_deg", rep.phases_deg},
            {"span_deg", rep.span_deg},
            {"rotation_span_deg", rep.rotation_span_deg},
        };
        write_output(cfg, out.dump(2) + "\n");
    } else if (cmd_tune->parsed()) {
        TuneQuery q;
        q.z_load = parse_complex(load_str);
        q.z_source = parse_complex(source_str);
        q.f = f;
        q.mode = mode;
        q.loss = loss;
        if (objective_str == "reflection")
            q.objective = TuneObjective::min_input_reflection;
        else if (objective_str == "gain")
            q.objective = TuneObjective::max_transducer_gain;
        else
            throw UsageError("unknown objective '" + objective_str + "'");
        TuneResult r;
        try {
            r = greedy ? tune_greedy(q, table, restarts, seed) : tune_exhaustive(q, table);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        json out{
            {"word", r.word.value()},
            {"objective", objective_name(q.objective)},
            {"objective_value", r.objective_value},
            {"gamma_in", complex_json(r.gamma_in)},
            {"gap_to_second_best", r.gap_to_second_best},
            {"evaluations", r.evaluations},
            {"method", greedy ? "greedy" : "exhaustive"},
            {"f_hz", f},
            {"mode", coupler_mode_name(mode)},
            {"z_load", complex_json(q.z_load)},
            {"z_source", complex_json(q.z_source)},
        };
        write_output(cfg, out.dump(2) + "\n");
    } else if (cmd_sweep->parsed()) {
        std::vector<LossModel> grid;
        grid.push_back(LossModel::ideal());
        const std::vector<double> qls = parse_si_list(ql_grid, "--ql-grid");
        const std::vector<double> qcs =
            qc_grid.empty() ? std::vector<double>{cfg.q_c} : parse_si_list(qc_grid, "--qc-grid");
        const std::vector<double> rons =
            ron_grid.empty() ? std::vector<double>{cfg.r_on}
                             : parse_si_list(ron_grid, "--ron-grid");
        const std::vector<double> coffs =
            coff_grid.empty() ? std::vector<double>{si_value(cfg.c_off, "c_off")}
                              : parse_si_list(coff_grid, "--coff-grid");
        for (const double ql : qls)
            for (const double qc : qcs)
                for (const double ron : rons)
                    for (const double coff : coffs) {
                        LossModel m = loss;
                        m.lossless = false;
                        m.q_l = ql;
                        m.q_c = qc;
                        m.r_on = ron;
                        m.c_off = coff;
                        grid.push_back(m);
                    }
        const auto sweep = loss_sweep(table, mode, f, grid, cfg.thread_count());
        std::string csv = "q_l,q_c,r_on,c_off,radius_ratio\n";
        for (const LossSweepPoint& pt : sweep) {
            const bool ll = pt.loss.lossless;
            csv += format_csv_double(ll ? std::numeric_limits<double>::infinity() : pt.loss.q_l);
            csv += ',';
            csv += format_csv_double(ll ? std::numeric_limits<double>::infinity() : pt.loss.q_c);
            csv += ',';
            csv += format_csv_double(ll ? 0.0 : pt.loss.r_on);
            csv += ',';
            csv += format_csv_double(ll ? 0.0 : pt.loss.c_off);
            csv += ',';
            csv += format_csv_double(pt.radius_ratio);
            csv += '\n';
        }
        write_output(cfg, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
