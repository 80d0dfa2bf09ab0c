#include "rfmatch/netlist.hpp"

#include "rfmatch/matching_network.hpp"
#include "test_helpers.hpp"

using namespace rfmatch;

TEST_CASE("minimal netlist parses", "[netlist]") {
    const Netlist nl = parse_netlist("P1 in 0 port z0=50\nR1 in 0 r=50\n");
    REQUIRE(nl.elements().size() == 2);
    REQUIRE(nl.port_count() == 1);
    const Element& p = nl.elements()[0];
    REQUIRE(p.kind == ElementKind::port);
    REQUIRE(p.z0 == 50.0);
    REQUIRE(p.port_number == 1);
    const Element& r = nl.elements()[1];
    REQUIRE(r.kind == ElementKind::resistor);
    REQUIRE(r.resistance == 50.0);
    REQUIRE(r.nodes[0] == 1);  // "in" is the first named node
    REQUIRE(r.nodes[1] == 0);
    REQUIRE(validate(nl).empty());
}

TEST_CASE("switched capacitor line", "[netlist]") {
    const Netlist nl = parse_netlist("C1 a 0 cap c=4p/7p bit=3 ron=1.5\n");
    const Element& e = nl.elements()[0];
    REQUIRE(e.kind == ElementKind::switched_capacitor);
    REQUIRE(e.cap_low == 4e-12);
    REQUIRE(e.cap_high == 7e-12);
    REQUIRE(e.control_bit == 3);
    REQUIRE(e.r_on == 1.5);
}

TEST_CASE("inductor with quality factor", "[netlist]") {
    const Netlist nl = parse_netlist("L1 a b ind l=16n q=30\n");
    const Element& e = nl.elements()[0];
    REQUIRE(e.kind == ElementKind::inductor);
    REQUIRE(e.inductance == 16e-9);
    REQUIRE(e.q_factor == 30.0);
}

TEST_CASE("comments, blank lines and ground aliases", "[netlist]") {
    const Netlist nl = parse_netlist(
        "# a comment\n"
        "\n"
        "R1 x gnd r=1k  # trailing comment\n"
        "R2 x GND r=2k\n");
    REQUIRE(nl.elements().size() == 2);
    REQUIRE(nl.elements()[0].nodes[1] == 0);
    REQUIRE(nl.elements()[1].nodes[1] == 0);
    REQUIRE(nl.elements()[0].resistance == 1e3);
}

TEST_CASE("engineering suffixes", "[netlist]") {
    REQUIRE(parse_si_value("4p") == 4e-12);
    REQUIRE(parse_si_value("50f") == 50e-15);
    REQUIRE(parse_si_value("16n") == 16e-9);
    REQUIRE(parse_si_value("3u") == 3e-6);
    REQUIRE(parse_si_value("2m") == 2e-3);   // milli
    REQUIRE(parse_si_value("2M") == 2e6);    // mega
    REQUIRE(parse_si_value("1k") == 1e3);
    REQUIRE(parse_si_value("1G") == 1e9);
    REQUIRE(parse_si_value("620M") == 6.2e8);
    REQUIRE(parse_si_value("6.2e8") == 6.2e8);
    REQUIRE(parse_si_value("-3.5") == -3.5);
    REQUIRE_THROWS_AS(parse_si_value("4x"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_si_value("p"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_si_value("1pp"), std::invalid_argument);
}

TEST_CASE("parse errors carry line numbers", "[netlist]") {
    try {
        parse_netlist("R1 in 0 r=50\nL1 a b ind q=30\n");  // missing l=
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        REQUIRE(e.line() == 2);
    }
    REQUIRE_THROWS_AS(parse_netlist("X1 a b foo bar=1\n"), UnknownElementKindError);
    REQUIRE_THROWS_AS(parse_netlist("P1 a 0 port num=1\nP2 b 0 port num=1\n"),
                      DuplicatePortError);
    REQUIRE_THROWS_AS(parse_netlist("R1 a 0 r=-5\n"), BadValueError);
    REQUIRE_THROWS_AS(parse_netlist("C1 a 0 cap c=7p/4p bit=0\n"), BadValueError);  // low >= high
    REQUIRE_THROWS_AS(parse_netlist("C1 a 0 cap c=4p/7p bit=11\n"), BadValueError);
    REQUIRE_THROWS_AS(parse_netlist("C1 a 0 cap c=4p/7p\n"), SyntaxError);  // bit required
    REQUIRE_THROWS_AS(parse_netlist("R1 a 0 r=50 r=60\n"), SyntaxError);   // duplicate key
    REQUIRE_THROWS_AS(parse_netlist("R1 a 0 r=50 zz=1\n"), SyntaxError);   // unknown key
    REQUIRE_THROWS_AS(parse_netlist("H1 a b c hyb90\n"), SyntaxError);     // 4 nodes needed
}

TEST_CASE("hybrid and relay lines", "[netlist]") {
    const Netlist nl = parse_netlist(
        "H1 a b c d hyb90 z0=50\n"
        "K1 c 0 relay ron=1.5 coff=50f bit=2\n");
    REQUIRE(nl.elements()[0].kind == ElementKind::ideal_hybrid);
    REQUIRE(nl.elements()[1].kind == ElementKind::relay);
    REQUIRE(nl.elements()[1].c_off == 50e-15);
    REQUIRE(nl.elements()[1].control_bit == 2);
}

TEST_CASE("serialization round-trips exactly", "[netlist]") {
    const std::string text =
        "P1 in 0 port z0=50 num=1\n"
        "C1 in 0 cap c=4e-12/7e-12 bit=3 ron=1.5\n"
        "L1 in x ind l=1.6e-08 q=30\n"
        "R1 x 0 r r=50\n";
    const Netlist nl = parse_netlist(text);
    REQUIRE(nl.serialize() == text);

    // a fixed point is reached after one canonicalization pass
    const Netlist messy = parse_netlist("R9   a   0    r  r=4.7k   # noisy\n");
    const std::string canon = messy.serialize();
    REQUIRE(parse_netlist(canon).serialize() == canon);
}

TEST_CASE("built networks round-trip through text", "[netlist]") {
    const ComponentTable table;
    for (const CouplerMode mode : {CouplerMode::ideal, CouplerMode::lumped}) {
        const Netlist nl = build_full_network(table, mode);
        const std::string canon = nl.serialize();
        const Netlist re = parse_netlist(canon);
        REQUIRE(re.serialize() == canon);
        REQUIRE(re.elements().size() == nl.elements().size());
        REQUIRE(validate(re).empty());
    }
}

TEST_CASE("validate reports floating nodes", "[netlist]") {
    // divider is fine
    const Netlist ok = parse_netlist(
        "P1 in 0 port z0=50\n"
        "R1 in mid r=50\n"
        "R2 mid 0 r=50\n");
    REQUIRE(validate(ok).empty());

    // node "y" never reaches ground
    const Netlist bad = parse_netlist(
        "P1 in 0 port z0=50\n"
        "R1 in 0 r=50\n"
        "R2 x y r=50\n");
    const auto violations = validate(bad);
    REQUIRE_FALSE(violations.empty());
    bool mentions_floating = false;
    for (const std::string& v : violations)
        if (v.find("floating") != std::string::npos) mentions_floating = true;
    REQUIRE(mentions_floating);
}

TEST_CASE("validate flags gaps in control bits and missing ports", "[netlist]") {
    const Netlist gap = parse_netlist(
        "P1 in 0 port z0=50\n"
        "C1 in 0 cap c=1p/2p bit=5\n");  // only one distinct bit, index 5
    const auto violations = validate(gap);
    REQUIRE_FALSE(violations.empty());

    const Netlist portless = parse_netlist("R1 a 0 r=50\n");
    REQUIRE_FALSE(validate(portless).empty());
}

TEST_CASE("full network validates with 11 bits in lumped mode", "[netlist]") {
    const ComponentTable table;
    const Netlist lumped = build_full_network(table, CouplerMode::lumped);
    REQUIRE(validate(lumped).empty());
    REQUIRE(lumped.bit_count() == 11);
    REQUIRE(lumped.port_count() == 2);

    // the ideal-coupler abstraction has no internal coupler nodes, so the
    // C_2var pair is absent and bit 10 is inert there
    const Netlist ideal = build_full_network(table, CouplerMode::ideal);
    REQUIRE(validate(ideal).empty());
    REQUIRE(ideal.bit_count() == 10);
}

TEST_CASE("configuration word guards its range", "[netlist]") {
    REQUIRE_THROWS_AS(ConfigurationWord(2048), std::out_of_range);
    const ConfigurationWord w(0b10000000001);
    REQUIRE(w.bit(0));
    REQUIRE(w.bit(10));
    REQUIRE_FALSE(w.bit(5));
    REQUIRE(w.flipped(5).bit(5));
    REQUIRE(w.with_bit(0, false).value() == 0b10000000000);
    REQUIRE_THROWS_AS(w.bit(11), std::out_of_range);
}
