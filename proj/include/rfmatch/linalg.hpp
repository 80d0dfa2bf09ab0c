#pragma once

// =============================================================================
// rfmatch - Complex dense linear algebra
// =============================================================================
// Small dense complex matrices with an LU solver, sized for nodal analysis of
// lumped circuits (tens of nodes). Partial pivoting with a relative pivot
// threshold so that a floating subcircuit surfaces as SingularMatrixError
// instead of producing garbage voltages.
// =============================================================================

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfmatch {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Thrown when a pivot falls below the relative threshold during LU
/// factorization. For circuit matrices this means a floating node or a
/// degenerate (perfectly resonant) configuration.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what)
        : std::runtime_error(what) {}
};

// =============================================================================
// ComplexMatrix
// =============================================================================

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n, Complex(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    ComplexMatrix operator*(const ComplexMatrix& rhs) const {
        require_same_size(rhs.n_);
        ComplexMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < n_; ++k) {
                const Complex aik = (*this)(i, k);
                if (aik == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < n_; ++j) {
                    out(i, j) += aik * rhs(k, j);
                }
            }
        }
        return out;
    }

    ComplexVector operator*(const ComplexVector& x) const {
        require_same_size(x.size());
        ComplexVector y(n_, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < n_; ++i) {
            Complex acc(0.0, 0.0);
            for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    ComplexMatrix operator+(const ComplexMatrix& rhs) const {
        require_same_size(rhs.n_);
        ComplexMatrix out = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += rhs.a_[i];
        return out;
    }

    ComplexMatrix operator-(const ComplexMatrix& rhs) const {
        require_same_size(rhs.n_);
        ComplexMatrix out = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= rhs.a_[i];
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    /// Conjugate transpose.
    ComplexMatrix adjoint() const {
        ComplexMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    void require_same_size(std::size_t other) const {
        if (other != n_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }

    std::size_t n_ = 0;
    std::vector<Complex> a_;
};

// =============================================================================
// LU decomposition with partial pivoting
// =============================================================================

/// Pivot magnitudes below kPivotRelTol times the largest entry of the input
/// matrix are treated as exact singularities.
inline constexpr double kPivotRelTol = 1e-13;

class LuDecomposition {
public:
    explicit LuDecomposition(ComplexMatrix a)
        : lu_(std::move(a)), perm_(lu_.size()) {
        const std::size_t n = lu_.size();
        if (n == 0) throw std::invalid_argument("LuDecomposition: empty matrix");
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        const double threshold = kPivotRelTol * lu_.max_abs();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                const double mag = std::abs(lu_(i, k));
                if (mag > best) {
                    best = mag;
                    piv = i;
                }
            }
            if (best <= threshold) {
                throw SingularMatrixError(
                    "singular matrix: pivot " + std::to_string(best) +
                    " below threshold " + std::to_string(threshold) +
                    " at column " + std::to_string(k));
            }
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
                std::swap(perm_[k], perm_[piv]);
            }
            const Complex pivot = lu_(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                const Complex factor = lu_(i, k) / pivot;
                lu_(i, k) = factor;
                if (factor == Complex(0.0, 0.0)) continue;
                for (std::size_t j = k + 1; j < n; ++j) {
                    lu_(i, j) -= factor * lu_(k, j);
                }
            }
        }
    }

    std::size_t size() const { return lu_.size(); }

    ComplexVector solve(const ComplexVector& b) const {
        const std::size_t n = lu_.size();
        if (b.size() != n) throw std::invalid_argument("LuDecomposition::solve: size mismatch");
        ComplexVector x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        // forward substitution (unit lower)
        for (std::size_t i = 1; i < n; ++i) {
            Complex acc = x[i];
            for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
            x[i] = acc;
        }
        // back substitution
        for (std::size_t ii = n; ii-- > 0;) {
            Complex acc = x[ii];
            for (std::size_t j = ii + 1; j < n; ++j) acc -= lu_(ii, j) * x[j];
            x[ii] = acc / lu_(ii, ii);
        }
        return x;
    }

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
};

inline ComplexVector lu_solve(const ComplexMatrix& a, const ComplexVector& b) {
    return LuDecomposition(a).solve(b);
}

inline ComplexMatrix invert(const ComplexMatrix& a) {
    const std::size_t n = a.size();
    LuDecomposition lu(a);
    ComplexMatrix inv(n);
    ComplexVector e(n, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        ComplexVector col = lu.solve(e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

// =============================================================================
// Largest singular value
// =============================================================================

/// Largest singular value of a square matrix. Exact closed form for n <= 2;
/// power iteration on A^H A otherwise (A^H A is positive semidefinite, so the
/// Rayleigh quotient converges monotonically from below).
inline double max_singular_value(const ComplexMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("max_singular_value: empty matrix");
    if (n == 1) return std::abs(a(0, 0));
    const ComplexMatrix h = a.adjoint() * a;  // Hermitian PSD, eigenvalues = sigma^2
    if (n == 2) {
        const double tr = h(0, 0).real() + h(1, 1).real();
        const double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
        const double disc = std::max(0.0, tr * tr / 4.0 - det);
        return std::sqrt(std::max(0.0, tr / 2.0 + std::sqrt(disc)));
    }
    ComplexVector v(n, Complex(1.0, 0.0));
    v[0] += 0.25;  // break symmetry against unlucky orthogonal starts
    double lambda = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        ComplexVector w = h * v;
        double norm = 0.0;
        for (const Complex& c : w) norm += std::norm(c);
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (Complex& c : w) c /= norm;
        Complex ray(0.0, 0.0);
        ComplexVector hw = h * w;
        for (std::size_t i = 0; i < n; ++i) ray += std::conj(w[i]) * hw[i];
        const double next = ray.real();
        v = std::move(w);
        if (iter > 4 && std::abs(next - lambda) <= 1e-15 * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(0.0, lambda));
}

}  // namespace rfmatch
