#include "rfmatch/linalg.hpp"

#include <random>

#include "test_helpers.hpp"

using namespace rfmatch;
using testutil::complex_near;

namespace {

// Deterministic well-conditioned random matrix: unit off-diagonal entries
// plus a dominant diagonal.
ComplexMatrix random_dominant(std::size_t n, std::uint32_t seed) {
    std::mt19937 gen(seed);
    auto u = [&] { return gen() / 4294967296.0 * 2.0 - 1.0; };
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = Complex(u(), u());
        a(i, i) += Complex(2.0 * n, n);
    }
    return a;
}

double residual_inf(const ComplexMatrix& a, const ComplexVector& x, const ComplexVector& b) {
    const ComplexVector ax = a * x;
    double r = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) r = std::max(r, std::abs(ax[i] - b[i]));
    return r;
}

}  // namespace

TEST_CASE("lu_solve on identity returns the right-hand side", "[linalg]") {
    ComplexMatrix a = ComplexMatrix::identity(3);
    ComplexVector b{Complex(1, 0), Complex(2, 1), Complex(0, -1)};
    const ComplexVector x = lu_solve(a, b);
    for (int i = 0; i < 3; ++i) REQUIRE(complex_near(x[i], b[i], 0.0));
}

TEST_CASE("lu_solve diagonal case", "[linalg]") {
    ComplexMatrix a(2);
    a(0, 0) = Complex(2, 0);
    a(1, 1) = Complex(0, 1);
    const ComplexVector x = lu_solve(a, {Complex(2, 0), Complex(1, 0)});
    REQUIRE(complex_near(x[0], Complex(1, 0)));
    REQUIRE(complex_near(x[1], Complex(0, -1)));  // 1/j = -j
}

TEST_CASE("lu_solve residual stays below 1e-10 on random systems", "[linalg]") {
    for (std::uint32_t seed : {1u, 2u, 3u, 4u}) {
        const ComplexMatrix a = random_dominant(8, seed);
        std::mt19937 gen(seed + 100);
        ComplexVector b(8);
        double bnorm = 0.0;
        for (Complex& v : b) {
            v = Complex(gen() / 4294967296.0, gen() / 4294967296.0);
            bnorm = std::max(bnorm, std::abs(v));
        }
        const ComplexVector x = lu_solve(a, b);
        REQUIRE(residual_inf(a, x, b) <= 1e-10 * bnorm);
    }
}

TEST_CASE("lu_solve recovers a known solution", "[linalg]") {
    const ComplexMatrix a = random_dominant(6, 77);
    ComplexVector x0(6);
    for (std::size_t i = 0; i < 6; ++i) x0[i] = Complex(1.0 + double(i), -0.5 * double(i));
    const ComplexVector x = lu_solve(a, a * x0);
    for (std::size_t i = 0; i < 6; ++i) {
        REQUIRE(std::abs(x[i] - x0[i]) <= 1e-9 * std::abs(x0[i]) + 1e-12);
    }
}

TEST_CASE("invert identity and permutation", "[linalg]") {
    const ComplexMatrix inv_eye = invert(ComplexMatrix::identity(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            REQUIRE(complex_near(inv_eye(i, j), i == j ? Complex(1) : Complex(0), 0.0));

    ComplexMatrix perm(2);
    perm(0, 1) = 1.0;
    perm(1, 0) = 1.0;
    const ComplexMatrix pinv = invert(perm);  // a swap is its own inverse
    REQUIRE(complex_near(pinv(0, 1), Complex(1)));
    REQUIRE(complex_near(pinv(1, 0), Complex(1)));
    REQUIRE(complex_near(pinv(0, 0), Complex(0)));
}

TEST_CASE("invert multiplies back to identity", "[linalg]") {
    const ComplexMatrix a = random_dominant(4, 11);
    const ComplexMatrix prod = a * invert(a);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            REQUIRE(std::abs(prod(i, j) - (i == j ? Complex(1) : Complex(0))) <= 1e-10);
}

TEST_CASE("singular matrices are reported, not solved", "[linalg]") {
    ComplexMatrix zero(2);
    REQUIRE_THROWS_AS(lu_solve(zero, {Complex(1), Complex(1)}), SingularMatrixError);

    ComplexMatrix rank1(2);  // two identical rows
    rank1(0, 0) = rank1(1, 0) = Complex(1, 1);
    rank1(0, 1) = rank1(1, 1) = Complex(2, -1);
    REQUIRE_THROWS_AS(invert(rank1), SingularMatrixError);
}

TEST_CASE("pivot threshold distinguishes tiny but regular systems", "[linalg]") {
    // uniformly tiny entries are fine; the threshold is relative
    ComplexMatrix small(2);
    small(0, 0) = Complex(1e-20, 0);
    small(1, 1) = Complex(2e-20, 0);
    const ComplexVector x = lu_solve(small, {Complex(1e-20), Complex(2e-20)});
    REQUIRE(complex_near(x[0], Complex(1)));
    REQUIRE(complex_near(x[1], Complex(1)));
}

TEST_CASE("max_singular_value matches hand results", "[linalg]") {
    ComplexMatrix d(2);
    d(0, 0) = Complex(3, 0);
    d(1, 1) = Complex(0, -5);
    REQUIRE_THAT(max_singular_value(d), Catch::Matchers::WithinAbs(5.0, 1e-12));

    // unitary 4x4 has all singular values 1
    ComplexMatrix u(4);
    const double s = 1.0 / std::numbers::sqrt2;
    u(0, 2) = u(2, 0) = u(1, 3) = u(3, 1) = Complex(0, -s);
    u(0, 3) = u(3, 0) = u(1, 2) = u(2, 1) = Complex(-s, 0);
    REQUIRE_THAT(max_singular_value(u), Catch::Matchers::WithinAbs(1.0, 1e-12));

    // rank-one 3x3: sigma = sqrt(sum |a_ij|^2)
    ComplexMatrix r1(3);
    for (int j = 0; j < 3; ++j) r1(0, j) = Complex(1.0 + j, -1.0);
    double frob = 0.0;
    for (int j = 0; j < 3; ++j) frob += std::norm(r1(0, j));
    REQUIRE_THAT(max_singular_value(r1), Catch::Matchers::WithinAbs(std::sqrt(frob), 1e-10));
}
