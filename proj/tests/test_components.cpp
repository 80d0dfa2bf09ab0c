#include "rfmatch/components.hpp"

#include <numbers>
#include <random>

#include "test_helpers.hpp"

using namespace rfmatch;
using testutil::ang_diff_deg;
using testutil::complex_near;
using testutil::deg;

namespace {

constexpr double kF = 620e6;
const double kOmega = 2.0 * std::numbers::pi * kF;  // 3.8956e9 rad/s

Element make_inductor(double l, double q = 0.0) {
    Element e;
    e.kind = ElementKind::inductor;
    e.nodes = {1, 0, 0, 0};
    e.inductance = l;
    e.q_factor = q;
    return e;
}

Element make_capacitor(double c) {
    Element e;
    e.kind = ElementKind::capacitor;
    e.nodes = {1, 0, 0, 0};
    e.capacitance = c;
    return e;
}

Element make_switched(double lo, double hi, int bit) {
    Element e;
    e.kind = ElementKind::switched_capacitor;
    e.nodes = {1, 0, 0, 0};
    e.cap_low = lo;
    e.cap_high = hi;
    e.control_bit = bit;
    return e;
}

Element make_relay(int bit) {
    Element e;
    e.kind = ElementKind::relay;
    e.nodes = {1, 0, 0, 0};
    e.control_bit = bit;
    return e;
}

}  // namespace

TEST_CASE("lossless element reactances at 620 MHz", "[components]") {
    const LossModel ll = LossModel::ideal();
    const ConfigurationWord none;

    // oracle: direct arithmetic on the design values
    const double x_ls = kOmega * 16e-9;           // 62.329 ohm
    const double x_c1 = 1.0 / (kOmega * 5.14e-12);  // 49.942 ohm

    const Complex zl = element_impedance(make_inductor(16e-9), kF, none, ll);
    REQUIRE_THAT(zl.imag(), Catch::Matchers::WithinRel(x_ls, 1e-12));
    REQUIRE(zl.real() == 0.0);
    REQUIRE_THAT(zl.imag(), Catch::Matchers::WithinAbs(62.33, 0.01));

    const Complex zc = element_impedance(make_capacitor(5.14e-12), kF, none, ll);
    REQUIRE_THAT(-zc.imag(), Catch::Matchers::WithinRel(x_c1, 1e-12));
    // the 50-ohm center: reactance of 5.14 pF is within 1% of z0
    REQUIRE_THAT(-zc.imag(), Catch::Matchers::WithinRel(50.0, 0.01));
}

TEST_CASE("switched capacitor selects by control bit", "[components]") {
    const LossModel ll = LossModel::ideal();
    const Element sw = make_switched(4e-12, 7e-12, 3);
    const Complex lo = element_impedance(sw, kF, ConfigurationWord(0), ll);
    const Complex hi = element_impedance(sw, kF, ConfigurationWord(1u << 3), ll);
    REQUIRE_THAT(lo.imag(), Catch::Matchers::WithinAbs(-64.18, 0.01));
    REQUIRE_THAT(hi.imag(), Catch::Matchers::WithinAbs(-36.67, 0.01));
}

TEST_CASE("loss model series resistances", "[components]") {
    LossModel loss;  // defaults: Q_L=30, Q_C=100, R_on=1.5 at 620 MHz
    const ConfigurationWord none;

    const Complex zl = element_impedance(make_inductor(16e-9), kF, none, loss);
    REQUIRE_THAT(zl.real(), Catch::Matchers::WithinRel(kOmega * 16e-9 / 30.0, 1e-12));

    // per-element Q override wins over the model default
    const Complex zl2 = element_impedance(make_inductor(16e-9, 60.0), kF, none, loss);
    REQUIRE_THAT(zl2.real(), Catch::Matchers::WithinRel(kOmega * 16e-9 / 60.0, 1e-12));

    const Complex zc = element_impedance(make_capacitor(5.14e-12), kF, none, loss);
    REQUIRE_THAT(zc.real(), Catch::Matchers::WithinRel(1.0 / (kOmega * 5.14e-12 * 100.0), 1e-12));

    // contact resistance enters only in the actuated state
    const Element sw = make_switched(4e-12, 7e-12, 0);
    const Complex lo = element_impedance(sw, kF, ConfigurationWord(0), loss);
    const Complex hi = element_impedance(sw, kF, ConfigurationWord(1), loss);
    const double esr_lo = 1.0 / (kOmega * 4e-12 * 100.0);
    const double esr_hi = 1.0 / (kOmega * 7e-12 * 100.0);
    REQUIRE_THAT(lo.real(), Catch::Matchers::WithinRel(esr_lo, 1e-12));
    REQUIRE_THAT(hi.real(), Catch::Matchers::WithinRel(esr_hi + 1.5, 1e-12));
}

TEST_CASE("relay states", "[components]") {
    LossModel loss;
    const Element k = make_relay(0);
    const Complex closed = element_impedance(k, kF, ConfigurationWord(1), loss);
    REQUIRE_THAT(closed.real(), Catch::Matchers::WithinRel(1.5, 1e-12));
    const Complex open = element_impedance(k, kF, ConfigurationWord(0), loss);
    REQUIRE_THAT(-open.imag(), Catch::Matchers::WithinRel(1.0 / (kOmega * 50e-15), 1e-12));

    // lossless relay: open state is a true open circuit
    const LossModel ll = LossModel::ideal();
    REQUIRE(element_admittance(k, kF, ConfigurationWord(0), ll) == Complex(0.0, 0.0));
    REQUIRE(std::isinf(element_impedance(k, kF, ConfigurationWord(0), ll).real()));
}

TEST_CASE("lossless impedances are purely reactive", "[components]") {
    const LossModel ll = LossModel::ideal();
    std::mt19937 gen(5);
    for (int i = 0; i < 50; ++i) {
        const double f = 1e6 + gen() / 4294967296.0 * 5e9;
        const double l = 1e-10 + gen() / 4294967296.0 * 1e-7;
        const double c = 1e-13 + gen() / 4294967296.0 * 1e-11;
        const Complex zl = element_impedance(make_inductor(l), f, ConfigurationWord(0), ll);
        const Complex zc = element_impedance(make_capacitor(c), f, ConfigurationWord(0), ll);
        REQUIRE(std::abs(zl.real()) <= 1e-12 * std::abs(zl));
        REQUIRE(std::abs(zc.real()) <= 1e-12 * std::abs(zc));
    }
}

TEST_CASE("ideal hybrid S-matrix structure", "[components]") {
    const SParameterBlock h = ideal_hybrid_smatrix(50.0);
    REQUIRE(h.s.size() == 4);

    // 3-dB split from port 1
    REQUIRE_THAT(std::norm(h.s(2, 0)) + std::norm(h.s(3, 0)),
                 Catch::Matchers::WithinAbs(1.0, 1e-12));
    // quadrature between the split arms
    REQUIRE_THAT(ang_diff_deg(deg(h.s(2, 0)), deg(h.s(3, 0)) + 90.0),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
    // symmetry
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(complex_near(h.s(i, j), h.s(j, i), 0.0));
    // unitarity: S S^H = I
    const ComplexMatrix prod = h.s * h.s.adjoint();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            REQUIRE(std::abs(prod(i, j) - (i == j ? Complex(1) : Complex(0))) <= 1e-12);
    // isolation
    REQUIRE(h.s(0, 1) == Complex(0.0, 0.0));
    REQUIRE(h.s(2, 3) == Complex(0.0, 0.0));
}

TEST_CASE("hybrid admittance embedding and its fallback", "[components]") {
    const SParameterBlock h = ideal_hybrid_smatrix(50.0);
    const ComplexMatrix y = hybrid_admittance(h.s, 50.0);
    // round-trip: S = (I - z0 Y)(I + z0 Y)^-1
    const ComplexMatrix eye = ComplexMatrix::identity(4);
    ComplexMatrix zy = y;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) zy(i, j) *= 50.0;
    const ComplexMatrix back = (eye - zy) * invert(eye + zy);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(std::abs(back(i, j) - h.s(i, j)) <= 1e-12);

    // S = -I has eigenvalue -1, so (I+S) is singular; the series-resistor
    // regularization takes over and produces the 1e6 S contact conductance
    ComplexMatrix reflect(4);
    for (int i = 0; i < 4; ++i) reflect(i, i) = Complex(-1.0, 0.0);
    const ComplexMatrix yr = hybrid_admittance(reflect, 50.0);
    REQUIRE_THAT(yr(0, 0).real(), Catch::Matchers::WithinRel(1e6, 1e-9));
}

TEST_CASE("rtps closed form", "[components]") {
    // full transmission for a unit reflective load
    const SParameterBlock open = rtps_response(Complex(1.0, 0.0));
    REQUIRE_THAT(std::abs(open.s(1, 0)), Catch::Matchers::WithinAbs(1.0, 1e-15));
    REQUIRE(open.s(0, 0) == Complex(0.0, 0.0));
    REQUIRE(open.s(1, 1) == Complex(0.0, 0.0));

    // matched loads absorb everything
    REQUIRE(rtps_response(Complex(0.0, 0.0)).s(1, 0) == Complex(0.0, 0.0));

    // the stage shifts the load phase by the hybrid's +90 degree constant
    const double load_phase = 253.82;
    const Complex gl = std::polar(1.0, load_phase * std::numbers::pi / 180.0);
    REQUIRE_THAT(ang_diff_deg(deg(rtps_response(gl).s(1, 0)), load_phase + 90.0),
                 Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("reflective load impedance over its four states", "[components]") {
    const ComponentTable table;
    const LossModel ll = LossModel::ideal();

    // oracle: Z = j(w L_res - 1 / (w (C1 + C2))) from the design values
    struct Case {
        bool b8, b9;
        double c_sum;
    };
    const Case cases[] = {
        {false, false, 2.57e-12},
        {true, false, 5.14e-12},
        {false, true, 7.71e-12},
        {true, true, 10.28e-12},
    };
    for (const Case& c : cases) {
        ConfigurationWord w =
            ConfigurationWord(0).with_bit(8, c.b8).with_bit(9, c.b9);
        const Complex z = reflective_load_impedance(w, kF, table, ll);
        const double expect = kOmega * 16e-9 - 1.0 / (kOmega * c.c_sum);
        REQUIRE_THAT(z.imag(), Catch::Matchers::WithinRel(expect, 1e-12));
        REQUIRE(z.real() == 0.0);
    }

    // spot values and reflection angles
    const Complex z00 = reflective_load_impedance(ConfigurationWord(0), kF, table, ll);
    REQUIRE_THAT(z00.imag(), Catch::Matchers::WithinAbs(-37.55, 0.01));
    const Complex g00 = (z00 - 50.0) / (z00 + 50.0);
    REQUIRE_THAT(std::abs(g00), Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(deg(g00), Catch::Matchers::WithinAbs(253.82, 0.01));

    const Complex z11 =
        reflective_load_impedance(ConfigurationWord(0).with_bit(8, true).with_bit(9, true), kF,
                                  table, ll);
    REQUIRE_THAT(z11.imag(), Catch::Matchers::WithinAbs(37.36, 0.01));
    const Complex g11 = (z11 - 50.0) / (z11 + 50.0);
    REQUIRE_THAT(deg(g11), Catch::Matchers::WithinAbs(106.47, 0.01));
}

TEST_CASE("capacitance control ratio and 50-ohm center", "[components]") {
    const ComponentTable t;
    const double c_min = t.c_phase1.low + t.c_phase2.low;    // 2.57 pF
    const double c_max = t.c_phase1.high + t.c_phase2.high;  // 10.28 pF
    REQUIRE_THAT(c_max / c_min, Catch::Matchers::WithinRel(4.0, 0.005));

    // geometric mean of the extreme load capacitances is the 50-ohm center
    const double c_center = std::sqrt(c_min * c_max);
    REQUIRE_THAT(c_center, Catch::Matchers::WithinRel(5.14e-12, 1e-6));
    REQUIRE_THAT(1.0 / (kOmega * c_center), Catch::Matchers::WithinRel(50.0, 0.01));
}

TEST_CASE("lossless reflective loads reflect fully for any state", "[components]") {
    const ComponentTable table;
    const LossModel ll = LossModel::ideal();
    for (std::uint16_t w = 0; w < 4; ++w) {
        ConfigurationWord word =
            ConfigurationWord(0).with_bit(8, w & 1).with_bit(9, (w >> 1) & 1);
        const Complex z = reflective_load_impedance(word, kF, table, ll);
        const Complex g = (z - 50.0) / (z + 50.0);
        REQUIRE_THAT(std::abs(g), Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
}
