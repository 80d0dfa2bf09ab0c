#pragma once

// =============================================================================
// rfmatch - The reconfigurable matching network
// =============================================================================
// Builds the two-stage 620 MHz RF-MEMS matching network as a netlist:
//
//   port 1 -> Pi stage (four CL-sections, bits 0-7)
//          -> phase stage (quadrature hybrid + reflective loads, bits 8-10)
//          -> port 2
//
// Bit assignment: bits 0-3 drive the shunt varactors of CL-sections 1-4
// (section 1 uses C_pa, sections 2-4 use C_p), bits 4-7 the series varactors
// C_s, bit 8 the C_phase1 pair, bit 9 the C_phase2 pair, bit 10 the C_2var
// pair. Paired varactors share one actuation line, so both physical copies
// follow a single bit and the two reflective loads stay identical.
//
// Coupler modes:
//   ideal  - the hybrid is the fixed design-equation S-matrix. The coupler
//            has no internal nodes in this abstraction, so the C_2var pair
//            does not appear; bit 10 is consumed but electrically inert.
//   lumped - the hybrid is reconstructed from the component table as an LC
//            ring: L_h arms on the in-through and out-coupled edges, C_1
//            cross arms, C_2 shunts at the load-side nodes and the C_2var
//            pair (bit 10) shunting input and output. At 620 MHz this ring
//            realizes the quadrature hybrid (w*L_h ~ z0/sqrt(2),
//            w*C_1 ~ 1/z0, w*C_2 ~ (sqrt(2)-1)/z0) and the C_decoup DC
//            blocks sit between the load ports and the reflective loads.
// =============================================================================

#include <string>

#include "rfmatch/components.hpp"
#include "rfmatch/netlist.hpp"

namespace rfmatch {

enum class CouplerMode { ideal, lumped };

inline const char* coupler_mode_name(CouplerMode m) {
    return m == CouplerMode::ideal ? "ideal" : "lumped";
}

inline CouplerMode parse_coupler_mode(const std::string& text) {
    if (text == "ideal") return CouplerMode::ideal;
    if (text == "lumped") return CouplerMode::lumped;
    throw std::invalid_argument("unknown coupler mode '" + text + "'");
}

// Control-bit layout.
inline constexpr int kSectionShuntBit[4] = {0, 1, 2, 3};
inline constexpr int kSectionSeriesBit[4] = {4, 5, 6, 7};
inline constexpr int kPhase1Bit = 8;
inline constexpr int kPhase2Bit = 9;
inline constexpr int kCouplerVarBit = 10;

namespace detail {

/// Four cascaded CL-sections between `from` and `to`: per section a
/// two-valued shunt capacitor, then L_s in series with a two-valued C_s
/// (the MIM capacitor doubles as a DC block; its low state nearly
/// resonates the inductor out).
inline void append_pi_stage(Netlist& nl, const ComponentTable& t, const std::string& from,
                            const std::string& to) {
    std::string prev = from;
    for (int k = 0; k < 4; ++k) {
        const TwoValued& shunt = (k == 0) ? t.c_pa : t.c_p;
        const std::string id = std::to_string(k + 1);
        nl.add_switched_capacitor((k == 0 ? "Cpa" : "Cp") + id, prev, "0", shunt.low, shunt.high,
                                  kSectionShuntBit[k]);
        const std::string mid = "m" + id;
        const std::string next = (k == 3) ? to : "n" + id;
        nl.add_inductor("Ls" + id, prev, mid, t.l_s);
        nl.add_switched_capacitor("Cs" + id, mid, next, t.c_s.low, t.c_s.high,
                                  kSectionSeriesBit[k]);
        prev = next;
    }
}

/// One reflective load hanging off `from`: series L_res, then C_phase1 and
/// C_phase2 as parallel shunt varactors to ground. Both copies share bits
/// 8 and 9.
inline void append_reflective_load(Netlist& nl, const ComponentTable& t, const std::string& from,
                                   const std::string& suffix) {
    const std::string ln = "l" + suffix;
    nl.add_inductor("Lr" + suffix, from, ln, t.l_res);
    nl.add_switched_capacitor("Cph1" + suffix, ln, "0", t.c_phase1.low, t.c_phase1.high,
                              kPhase1Bit);
    nl.add_switched_capacitor("Cph2" + suffix, ln, "0", t.c_phase2.low, t.c_phase2.high,
                              kPhase2Bit);
}

/// Lumped coupler ring between the four named nodes. `in`/`out` carry the
/// C_2var pair (bit 10), the load-side nodes `thru`/`cpl` the fixed C_2.
inline void append_lumped_coupler(Netlist& nl, const ComponentTable& t, const std::string& in,
                                  const std::string& out, const std::string& thru,
                                  const std::string& cpl) {
    nl.add_inductor("Lh1", in, thru, t.l_h);
    nl.add_inductor("Lh2", out, cpl, t.l_h);
    nl.add_capacitor("C1a", in, out, t.c_1);
    nl.add_capacitor("C1b", thru, cpl, t.c_1);
    nl.add_switched_capacitor("C2v1", in, "0", t.c_2var.low, t.c_2var.high, kCouplerVarBit);
    nl.add_switched_capacitor("C2v2", out, "0", t.c_2var.low, t.c_2var.high, kCouplerVarBit);
    nl.add_capacitor("C2a", thru, "0", t.c_2);
    nl.add_capacitor("C2b", cpl, "0", t.c_2);
}

inline void append_phase_stage(Netlist& nl, const ComponentTable& t, CouplerMode mode,
                               const std::string& in, const std::string& out) {
    if (mode == CouplerMode::ideal) {
        nl.add_hybrid("HY1", in, out, "r1", "r2", t.z0);
        append_reflective_load(nl, t, "r1", "a");
        append_reflective_load(nl, t, "r2", "b");
    } else {
        append_lumped_coupler(nl, t, in, out, "t1", "t2");
        nl.add_capacitor("Cda", "t1", "d1", t.c_decoup);
        nl.add_capacitor("Cdb", "t2", "d2", t.c_decoup);
        append_reflective_load(nl, t, "d1", "a");
        append_reflective_load(nl, t, "d2", "b");
    }
}

}  // namespace detail

/// Pi-matching stage as a stand-alone fragment (no ports) between nodes
/// "in" and "mid". Exactly eight switched elements consuming bits 0-7.
inline Netlist build_pi_stage(const ComponentTable& table) {
    Netlist nl;
    detail::append_pi_stage(nl, table, "in", "mid");
    return nl;
}

/// One reflective load as a stand-alone fragment from node "rl".
inline Netlist build_reflective_load(const ComponentTable& table) {
    Netlist nl;
    detail::append_reflective_load(nl, table, "rl", "a");
    return nl;
}

/// Phase stage alone as a 2-port (ports at the stage input and output).
inline Netlist build_phase_stage(const ComponentTable& table, CouplerMode mode) {
    Netlist nl;
    nl.add_port("P1", "in", table.z0, 1);
    nl.add_port("P2", "out", table.z0, 2);
    detail::append_phase_stage(nl, table, mode, "in", "out");
    return nl;
}

/// Lumped coupler ring alone as a 4-port, ports in the hybrid role order
/// (1 input, 2 output/isolated, 3 through, 4 coupled). Used to check the
/// reconstruction against the -3 dB / quadrature design targets.
inline Netlist build_lumped_coupler(const ComponentTable& table) {
    Netlist nl;
    nl.add_port("P1", "in", table.z0, 1);
    nl.add_port("P2", "out", table.z0, 2);
    nl.add_port("P3", "t1", table.z0, 3);
    nl.add_port("P4", "t2", table.z0, 4);
    detail::append_lumped_coupler(nl, table, "in", "out", "t1", "t2");
    return nl;
}

/// The full two-stage network as a 2-port.
inline Netlist build_full_network(const ComponentTable& table, CouplerMode mode) {
    Netlist nl;
    nl.add_port("P1", "in", table.z0, 1);
    nl.add_port("P2", "out", table.z0, 2);
    detail::append_pi_stage(nl, table, "in", "mid");
    detail::append_phase_stage(nl, table, mode, "mid", "out");
    return nl;
}

/// Snapshot of a netlist with one configuration baked in: switched
/// capacitors become fixed capacitors at their selected value, closed relays
/// become contact resistors, open relays their up-state capacitance (or
/// vanish when it is zero). Loss-model defaults fill unset contact values.
inline Netlist freeze_configuration(const Netlist& nl, ConfigurationWord bits,
                                    const LossModel& loss) {
    Netlist out;
    for (const Element& e : nl.elements()) {
        Element c = e;
        c.nodes[0] = out.node(nl.node_name(e.nodes[0]));
        c.nodes[1] = out.node(nl.node_name(e.nodes[1]));
        if (e.kind == ElementKind::ideal_hybrid) {
            c.nodes[2] = out.node(nl.node_name(e.nodes[2]));
            c.nodes[3] = out.node(nl.node_name(e.nodes[3]));
        }
        switch (e.kind) {
            case ElementKind::switched_capacitor: {
                const bool on = bits.bit(e.control_bit);
                c.kind = ElementKind::capacitor;
                c.capacitance = on ? e.cap_high : e.cap_low;
                c.cap_low = c.cap_high = 0.0;
                c.control_bit = -1;
                c.r_on = -1.0;
                break;
            }
            case ElementKind::relay: {
                const bool on = bits.bit(e.control_bit);
                if (on) {
                    c.kind = ElementKind::resistor;
                    const double r = e.r_on >= 0.0 ? e.r_on : loss.r_on;
                    c.resistance = std::max(r, detail::kMinContactResistance);
                } else {
                    const double coff = e.c_off >= 0.0 ? e.c_off : loss.c_off;
                    if (coff <= 0.0) continue;  // open circuit: drop the element
                    c.kind = ElementKind::capacitor;
                    c.capacitance = coff;
                }
                c.control_bit = -1;
                c.r_on = -1.0;
                c.c_off = -1.0;
                break;
            }
            default:
                break;
        }
        out.add(std::move(c));
    }
    return out;
}

}  // namespace rfmatch
