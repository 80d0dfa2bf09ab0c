#pragma once

// =============================================================================
// rfmatch - Circuit data model and text netlist format
// =============================================================================
// One element per line:
//
//     <label> <node...> <kind> key=value ...
//
// Kinds and their parameters:
//     port   (2 nodes)  z0=, num=        reference impedance, port number
//     r      (2 nodes)  r=               resistance
//     ind    (2 nodes)  l=, q=           inductance, quality factor
//     cap    (2 nodes)  c=, q=           capacitance; c=A/B bit=K [ron=]
//                                        declares a two-valued switched
//                                        capacitor controlled by bit K
//     relay  (2 nodes)  ron=, coff=, bit=
//     hyb90  (4 nodes)  z0=              ideal 3-dB quadrature hybrid
//
// The kind token may carry the primary value directly ("r=50" is shorthand
// for "r r=50"). Values accept engineering suffixes f p n u m k M G; bare
// numbers are base SI units. '#' starts a comment. Node "0" or "gnd" is
// ground; other nodes are numbered by first appearance.
// =============================================================================

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfmatch {

// =============================================================================
// Configuration word
// =============================================================================

/// State of the 11 MEMS control bits, selecting one of 2048 circuit variants.
class ConfigurationWord {
public:
    static constexpr int kBits = 11;
    static constexpr std::uint16_t kCount = 1u << kBits;

    ConfigurationWord() = default;

    explicit ConfigurationWord(std::uint16_t value) : value_(value) {
        if (value >= kCount)
            throw std::out_of_range("ConfigurationWord: value " + std::to_string(value) +
                                    " out of [0, 2047]");
    }

    std::uint16_t value() const { return value_; }

    bool bit(int k) const {
        if (k < 0 || k >= kBits) throw std::out_of_range("ConfigurationWord: bad bit index");
        return (value_ >> k) & 1u;
    }

    ConfigurationWord with_bit(int k, bool on) const {
        if (k < 0 || k >= kBits) throw std::out_of_range("ConfigurationWord: bad bit index");
        std::uint16_t v = value_;
        if (on)
            v |= static_cast<std::uint16_t>(1u << k);
        else
            v &= static_cast<std::uint16_t>(~(1u << k));
        return ConfigurationWord(v);
    }

    ConfigurationWord flipped(int k) const { return with_bit(k, !bit(k)); }

    friend bool operator==(ConfigurationWord a, ConfigurationWord b) {
        return a.value_ == b.value_;
    }

private:
    std::uint16_t value_ = 0;
};

// =============================================================================
// Parse errors
// =============================================================================

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class SyntaxError : public ParseError {
public:
    using ParseError::ParseError;
};

class UnknownElementKindError : public ParseError {
public:
    using ParseError::ParseError;
};

class DuplicatePortError : public ParseError {
public:
    using ParseError::ParseError;
};

class BadValueError : public ParseError {
public:
    using ParseError::ParseError;
};

// =============================================================================
// Engineering-notation values
// =============================================================================

/// Parses "4p", "16n", "1.5", "6.2e8", "620M". Returns false on garbage.
inline bool try_parse_si_value(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* begin = text.c_str();
    char* end = nullptr;
    const double base = std::strtod(begin, &end);
    if (end == begin) return false;
    std::string rest(end);
    if (rest.empty()) {
        out = base;
        return true;
    }
    if (rest.size() != 1) return false;
    double mult = 0.0;
    switch (rest[0]) {
        case 'f': mult = 1e-15; break;
        case 'p': mult = 1e-12; break;
        case 'n': mult = 1e-9; break;
        case 'u': mult = 1e-6; break;
        case 'm': mult = 1e-3; break;
        case 'k': mult = 1e3; break;
        case 'M': mult = 1e6; break;
        case 'G': mult = 1e9; break;
        default: return false;
    }
    out = base * mult;
    return true;
}

inline double parse_si_value(const std::string& text) {
    double v = 0.0;
    if (!try_parse_si_value(text, v))
        throw std::invalid_argument("malformed value '" + text + "'");
    return v;
}

/// Shortest decimal representation that parses back to exactly the same
/// double. Keeps serialized netlists readable without losing precision.
inline std::string format_value(double v) {
    char buf[40];
    std::string best;
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            if (best.empty() || std::string(buf).size() < best.size()) best = buf;
        }
    }
    if (!best.empty()) return best;
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// =============================================================================
// Elements
// =============================================================================

using NodeId = int;  ///< non-negative node index; 0 is ground

enum class ElementKind {
    resistor,
    inductor,
    capacitor,
    switched_capacitor,
    relay,
    ideal_hybrid,
    port,
};

inline const char* kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::resistor: return "r";
        case ElementKind::inductor: return "ind";
        case ElementKind::capacitor: return "cap";
        case ElementKind::switched_capacitor: return "cap";
        case ElementKind::relay: return "relay";
        case ElementKind::ideal_hybrid: return "hyb90";
        case ElementKind::port: return "port";
    }
    return "?";
}

inline int kind_node_count(ElementKind k) {
    return k == ElementKind::ideal_hybrid ? 4 : 2;
}

struct Element {
    std::string label;
    ElementKind kind = ElementKind::resistor;
    std::array<NodeId, 4> nodes{0, 0, 0, 0};

    double resistance = 0.0;   // resistor [ohm]
    double inductance = 0.0;   // inductor [H]
    double capacitance = 0.0;  // fixed capacitor [F]
    double cap_low = 0.0;      // switched capacitor, bit clear [F]
    double cap_high = 0.0;     // switched capacitor, bit set [F]
    double q_factor = 0.0;     // per-element Q override; 0 = use loss model
    double r_on = -1.0;        // contact resistance override; <0 = use loss model
    double c_off = -1.0;       // relay up-state capacitance; <0 = use loss model
    int control_bit = -1;      // switched capacitor / relay
    double z0 = 50.0;          // port / hybrid reference impedance [ohm]
    int port_number = 0;

    int node_count() const { return kind_node_count(kind); }
};

// =============================================================================
// Netlist
// =============================================================================

class Netlist {
public:
    Netlist() : node_names_{"0"} {}

    /// Interns a node name. "0" and "gnd" (any case) map to ground.
    NodeId node(const std::string& name) {
        if (is_ground_name(name)) return 0;
        auto it = node_index_.find(name);
        if (it != node_index_.end()) return it->second;
        const NodeId id = static_cast<NodeId>(node_names_.size());
        node_index_.emplace(name, id);
        node_names_.push_back(name);
        return id;
    }

    const std::string& node_name(NodeId id) const { return node_names_.at(id); }

    /// Node count including ground.
    int node_count() const { return static_cast<int>(node_names_.size()); }

    void add(Element e) { elements_.push_back(std::move(e)); }

    const std::vector<Element>& elements() const { return elements_; }

    int port_count() const {
        int n = 0;
        for (const Element& e : elements_)
            if (e.kind == ElementKind::port) ++n;
        return n;
    }

    /// Count of distinct control-bit indices in use.
    int bit_count() const {
        std::set<int> bits;
        for (const Element& e : elements_)
            if (e.control_bit >= 0) bits.insert(e.control_bit);
        return static_cast<int>(bits.size());
    }

    /// Ports sorted by port number.
    std::vector<const Element*> ports() const {
        std::vector<const Element*> out;
        for (const Element& e : elements_)
            if (e.kind == ElementKind::port) out.push_back(&e);
        std::sort(out.begin(), out.end(), [](const Element* a, const Element* b) {
            return a->port_number < b->port_number;
        });
        return out;
    }

    // ------------------------------------------------------------ builders --
    void add_port(const std::string& label, const std::string& n, double z0, int num) {
        Element e;
        e.label = label;
        e.kind = ElementKind::port;
        e.nodes[0] = node(n);
        e.nodes[1] = 0;
        e.z0 = z0;
        e.port_number = num;
        add(std::move(e));
    }

    void add_resistor(const std::string& label, const std::string& a, const std::string& b,
                      double r) {
        Element e;
        e.label = label;
        e.kind = ElementKind::resistor;
        e.nodes[0] = node(a);
        e.nodes[1] = node(b);
        e.resistance = r;
        add(std::move(e));
    }

    void add_inductor(const std::string& label, const std::string& a, const std::string& b,
                      double l, double q = 0.0) {
        Element e;
        e.label = label;
        e.kind = ElementKind::inductor;
        e.nodes[0] = node(a);
        e.nodes[1] = node(b);
        e.inductance = l;
        e.q_factor = q;
        add(std::move(e));
    }

    void add_capacitor(const std::string& label, const std::string& a, const std::string& b,
                       double c, double q = 0.0) {
        Element e;
        e.label = label;
        e.kind = ElementKind::capacitor;
        e.nodes[0] = node(a);
        e.nodes[1] = node(b);
        e.capacitance = c;
        e.q_factor = q;
        add(std::move(e));
    }

    void add_switched_capacitor(const std::string& label, const std::string& a,
                                const std::string& b, double c_low, double c_high, int bit,
                                double r_on = -1.0, double q = 0.0) {
        Element e;
        e.label = label;
        e.kind = ElementKind::switched_capacitor;
        e.nodes[0] = node(a);
        e.nodes[1] = node(b);
        e.cap_low = c_low;
        e.cap_high = c_high;
        e.control_bit = bit;
        e.r_on = r_on;
        e.q_factor = q;
        add(std::move(e));
    }

    void add_relay(const std::string& label, const std::string& a, const std::string& b, int bit,
                   double r_on = -1.0, double c_off = -1.0) {
        Element e;
        e.label = label;
        e.kind = ElementKind::relay;
        e.nodes[0] = node(a);
        e.nodes[1] = node(b);
        e.control_bit = bit;
        e.r_on = r_on;
        e.c_off = c_off;
        add(std::move(e));
    }

    void add_hybrid(const std::string& label, const std::string& p1, const std::string& p2,
                    const std::string& p3, const std::string& p4, double z0) {
        Element e;
        e.label = label;
        e.kind = ElementKind::ideal_hybrid;
        e.nodes = {node(p1), node(p2), node(p3), node(p4)};
        e.z0 = z0;
        add(std::move(e));
    }

    // --------------------------------------------------------- serialization --
    /// Canonical text form; parse(serialize(n)) reproduces n exactly.
    std::string serialize() const {
        std::ostringstream out;
        for (const Element& e : elements_) {
            out << e.label;
            for (int i = 0; i < e.node_count(); ++i) out << ' ' << node_name(e.nodes[i]);
            out << ' ' << kind_name(e.kind);
            switch (e.kind) {
                case ElementKind::port:
                    out << " z0=" << format_value(e.z0) << " num=" << e.port_number;
                    break;
                case ElementKind::resistor:
                    out << " r=" << format_value(e.resistance);
                    break;
                case ElementKind::inductor:
                    out << " l=" << format_value(e.inductance);
                    if (e.q_factor > 0.0) out << " q=" << format_value(e.q_factor);
                    break;
                case ElementKind::capacitor:
                    out << " c=" << format_value(e.capacitance);
                    if (e.q_factor > 0.0) out << " q=" << format_value(e.q_factor);
                    break;
                case ElementKind::switched_capacitor:
                    out << " c=" << format_value(e.cap_low) << '/' << format_value(e.cap_high)
                        << " bit=" << e.control_bit;
                    if (e.r_on >= 0.0) out << " ron=" << format_value(e.r_on);
                    if (e.q_factor > 0.0) out << " q=" << format_value(e.q_factor);
                    break;
                case ElementKind::relay:
                    out << " bit=" << e.control_bit;
                    if (e.r_on >= 0.0) out << " ron=" << format_value(e.r_on);
                    if (e.c_off >= 0.0) out << " coff=" << format_value(e.c_off);
                    break;
                case ElementKind::ideal_hybrid:
                    out << " z0=" << format_value(e.z0);
                    break;
            }
            out << '\n';
        }
        return out.str();
    }

    static bool is_ground_name(const std::string& name) {
        if (name == "0") return true;
        if (name.size() != 3) return false;
        return std::tolower(name[0]) == 'g' && std::tolower(name[1]) == 'n' &&
               std::tolower(name[2]) == 'd';
    }

private:
    std::vector<Element> elements_;
    std::vector<std::string> node_names_;
    std::map<std::string, NodeId> node_index_;
};

// =============================================================================
// Parser
// =============================================================================

namespace detail {

inline bool lookup_kind(const std::string& name, ElementKind& kind) {
    if (name == "port") kind = ElementKind::port;
    else if (name == "r") kind = ElementKind::resistor;
    else if (name == "ind") kind = ElementKind::inductor;
    else if (name == "cap") kind = ElementKind::capacitor;
    else if (name == "relay") kind = ElementKind::relay;
    else if (name == "hyb90") kind = ElementKind::ideal_hybrid;
    else return false;
    return true;
}

inline const char* primary_key(ElementKind kind) {
    switch (kind) {
        case ElementKind::port: return "z0";
        case ElementKind::resistor: return "r";
        case ElementKind::inductor: return "l";
        case ElementKind::capacitor: return "c";
        case ElementKind::switched_capacitor: return "c";
        case ElementKind::relay: return "ron";
        case ElementKind::ideal_hybrid: return "z0";
    }
    return "";
}

inline double positive_value(const std::string& key, const std::string& text, int line) {
    double v = 0.0;
    if (!try_parse_si_value(text, v))
        throw SyntaxError(line, "malformed value for '" + key + "': '" + text + "'");
    if (v <= 0.0)
        throw BadValueError(line, key + " must be positive, got '" + text + "'");
    return v;
}

inline double nonnegative_value(const std::string& key, const std::string& text, int line) {
    double v = 0.0;
    if (!try_parse_si_value(text, v))
        throw SyntaxError(line, "malformed value for '" + key + "': '" + text + "'");
    if (v < 0.0)
        throw BadValueError(line, key + " must be non-negative, got '" + text + "'");
    return v;
}

inline int bit_value(const std::string& text, int line) {
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        throw SyntaxError(line, "malformed bit index '" + text + "'");
    if (v < 0 || v >= ConfigurationWord::kBits)
        throw BadValueError(line, "control bit must be in [0, 10], got " + text);
    return static_cast<int>(v);
}

}  // namespace detail

inline Netlist parse_netlist(const std::string& text) {
    Netlist nl;
    std::set<int> seen_ports;
    int implicit_port = 0;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() < 2) throw SyntaxError(line_no, "expected '<label> <nodes> <kind> ...'");

        // locate the kind token; everything between label and kind is a node
        ElementKind kind{};
        std::size_t kind_idx = 0;
        std::string kind_value;
        for (std::size_t i = 1; i < tok.size(); ++i) {
            const std::size_t eq = tok[i].find('=');
            const std::string head = tok[i].substr(0, eq);
            if (detail::lookup_kind(head, kind)) {
                kind_idx = i;
                if (eq != std::string::npos) kind_value = tok[i].substr(eq + 1);
                break;
            }
        }
        if (kind_idx == 0)
            throw UnknownElementKindError(line_no, "no element kind found in '" + raw + "'");

        Element e;
        e.label = tok[0];
        e.kind = kind;
        const int want_nodes = kind_node_count(kind);
        if (static_cast<int>(kind_idx) - 1 != want_nodes)
            throw SyntaxError(line_no, std::string(kind_name(kind)) + " expects " +
                                           std::to_string(want_nodes) + " nodes, got " +
                                           std::to_string(kind_idx - 1));
        for (int i = 0; i < want_nodes; ++i) e.nodes[i] = nl.node(tok[1 + i]);

        // collect key=value parameters
        std::map<std::string, std::string> kv;
        if (!kind_value.empty()) kv[detail::primary_key(kind)] = kind_value;
        for (std::size_t i = kind_idx + 1; i < tok.size(); ++i) {
            const std::size_t eq = tok[i].find('=');
            if (eq == std::string::npos || eq == 0)
                throw SyntaxError(line_no, "expected key=value, got '" + tok[i] + "'");
            const std::string key = tok[i].substr(0, eq);
            if (kv.count(key)) throw SyntaxError(line_no, "duplicate key '" + key + "'");
            kv[key] = tok[i].substr(eq + 1);
        }

        auto take = [&](const char* key) -> std::string {
            auto it = kv.find(key);
            if (it == kv.end()) return {};
            std::string v = it->second;
            kv.erase(it);
            return v;
        };

        switch (kind) {
            case ElementKind::port: {
                const std::string z0 = take("z0");
                e.z0 = z0.empty() ? 50.0 : detail::positive_value("z0", z0, line_no);
                const std::string num = take("num");
                if (num.empty()) {
                    e.port_number = ++implicit_port;
                } else {
                    char* end = nullptr;
                    const long v = std::strtol(num.c_str(), &end, 10);
                    if (end == num.c_str() || *end != '\0' || v < 1)
                        throw SyntaxError(line_no, "malformed port number '" + num + "'");
                    e.port_number = static_cast<int>(v);
                    implicit_port = std::max(implicit_port, e.port_number);
                }
                if (!seen_ports.insert(e.port_number).second)
                    throw DuplicatePortError(line_no, "duplicate port number " +
                                                          std::to_string(e.port_number));
                break;
            }
            case ElementKind::resistor: {
                const std::string r = take("r");
                if (r.empty()) throw SyntaxError(line_no, "resistor requires r=");
                e.resistance = detail::positive_value("r", r, line_no);
                break;
            }
            case ElementKind::inductor: {
                const std::string l = take("l");
                if (l.empty()) throw SyntaxError(line_no, "inductor requires l=");
                e.inductance = detail::positive_value("l", l, line_no);
                const std::string q = take("q");
                if (!q.empty()) e.q_factor = detail::positive_value("q", q, line_no);
                break;
            }
            case ElementKind::capacitor: {
                const std::string c = take("c");
                if (c.empty()) throw SyntaxError(line_no, "capacitor requires c=");
                const std::size_t slash = c.find('/');
                if (slash == std::string::npos) {
                    e.capacitance = detail::positive_value("c", c, line_no);
                } else {
                    e.kind = ElementKind::switched_capacitor;
                    e.cap_low = detail::positive_value("c", c.substr(0, slash), line_no);
                    e.cap_high = detail::positive_value("c", c.substr(slash + 1), line_no);
                    if (!(e.cap_low < e.cap_high))
                        throw BadValueError(line_no, "switched capacitor requires low < high");
                    const std::string bit = take("bit");
                    if (bit.empty())
                        throw SyntaxError(line_no, "switched capacitor requires bit=");
                    e.control_bit = detail::bit_value(bit, line_no);
                    const std::string ron = take("ron");
                    if (!ron.empty()) e.r_on = detail::nonnegative_value("ron", ron, line_no);
                }
                const std::string q = take("q");
                if (!q.empty()) e.q_factor = detail::positive_value("q", q, line_no);
                break;
            }
            case ElementKind::relay: {
                const std::string bit = take("bit");
                if (bit.empty()) throw SyntaxError(line_no, "relay requires bit=");
                e.control_bit = detail::bit_value(bit, line_no);
                const std::string ron = take("ron");
                if (!ron.empty()) e.r_on = detail::nonnegative_value("ron", ron, line_no);
                const std::string coff = take("coff");
                if (!coff.empty()) e.c_off = detail::nonnegative_value("coff", coff, line_no);
                break;
            }
            case ElementKind::ideal_hybrid: {
                const std::string z0 = take("z0");
                e.z0 = z0.empty() ? 50.0 : detail::positive_value("z0", z0, line_no);
                break;
            }
            case ElementKind::switched_capacitor:
                break;  // produced from "cap" above, never parsed directly
        }

        if (!kv.empty())
            throw SyntaxError(line_no, "unknown key '" + kv.begin()->first + "' for " +
                                           kind_name(e.kind));
        nl.add(std::move(e));
    }
    return nl;
}

// =============================================================================
// Validation
// =============================================================================

/// Static netlist checks: ports exist and are contiguous from 1, ports are
/// ground-referenced, every node has a conductive path to ground, control
/// bits are contiguous from 0. Returns human-readable violations; empty
/// means the netlist is well-formed.
inline std::vector<std::string> validate(const Netlist& nl) {
    std::vector<std::string> violations;

    std::vector<int> port_numbers;
    for (const Element& e : nl.elements()) {
        if (e.kind == ElementKind::port) {
            port_numbers.push_back(e.port_number);
            if (e.nodes[1] != 0)
                violations.push_back("port " + e.label + " reference node is not ground");
        }
    }
    if (port_numbers.empty()) violations.push_back("netlist has no ports");
    std::sort(port_numbers.begin(), port_numbers.end());
    for (std::size_t i = 0; i < port_numbers.size(); ++i) {
        if (port_numbers[i] != static_cast<int>(i) + 1) {
            violations.push_back("port numbers not contiguous from 1");
            break;
        }
    }

    // union-find connectivity to ground; ports are probes, not conductors
    std::vector<int> parent(nl.node_count());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (const Element& e : nl.elements()) {
        if (e.kind == ElementKind::port) continue;
        if (e.kind == ElementKind::ideal_hybrid) {
            for (int i = 0; i < 4; ++i) unite(e.nodes[i], 0);  // ground-referenced 4-port
            continue;
        }
        unite(e.nodes[0], e.nodes[1]);
    }
    for (NodeId id = 1; id < nl.node_count(); ++id) {
        if (find(id) != find(0))
            violations.push_back("floating node '" + nl.node_name(id) + "'");
    }

    const int n_bits = nl.bit_count();
    std::set<int> reported;
    for (const Element& e : nl.elements()) {
        if (e.control_bit >= n_bits && reported.insert(e.control_bit).second)
            violations.push_back("control bit " + std::to_string(e.control_bit) +
                                 " used but only " + std::to_string(n_bits) +
                                 " distinct bits declared (bits not contiguous from 0)");
    }

    return violations;
}

}  // namespace rfmatch
