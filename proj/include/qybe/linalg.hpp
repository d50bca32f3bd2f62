#pragma once

// Dense complex matrices: 2x2 generators, 4x4 R-matrices, 8x8 triple
// products, 2^L transfer matrices, and small N x N cyclic irreps.
//
// Storage is row-major. Every operation returns a fresh matrix; nothing is
// modified in place, so verification code never depends on evaluation order.
// The tensor basis of C^2 (x) C^2 is ordered v0v0, v0v1, v1v0, v1v1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qybe {

using cplx = std::complex<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

/// Deformation parameter q = i and lambda = q - 1/q = 2i.
inline constexpr cplx Q_MAIN{0.0, 1.0};
inline constexpr cplx LAMBDA_MAIN{0.0, 2.0};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline cplx require_finite(cplx z, const char* what = "scalar") {
    if (!is_finite(z)) fail(ErrorKind::InvalidParams, std::string(what) + " is not finite");
    return z;
}

/// Largest supported dimension: 2^12 for transfer matrices on 12 sites.
inline constexpr std::size_t MAX_DIM = std::size_t{1} << 12;
/// Any dimension up to this bound is accepted (cyclic irreps of size N);
/// above it only powers of two are.
inline constexpr std::size_t MAX_SMALL_DIM = 16;

inline bool supported_dim(std::size_t n) {
    if (n == 0 || n > MAX_DIM) return false;
    return n <= MAX_SMALL_DIM || (n & (n - 1)) == 0;
}

class Matrix {
public:
    Matrix() = default;

    explicit Matrix(std::size_t n) : n_(n), a_(n * n) {
        if (!supported_dim(n)) fail(ErrorKind::Dimension, "unsupported dimension " + std::to_string(n));
    }

    Matrix(std::size_t n, std::initializer_list<cplx> entries) : Matrix(n) {
        if (entries.size() != n * n) fail(ErrorKind::Dimension, "entry count does not match dimension");
        std::copy(entries.begin(), entries.end(), a_.begin());
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diag(std::initializer_list<cplx> d) {
        Matrix m(d.size());
        std::size_t i = 0;
        for (cplx v : d) {
            m(i, i) = v;
            ++i;
        }
        return m;
    }

    std::size_t dim() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

    cplx& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

    const std::vector<cplx>& data() const noexcept { return a_; }

    bool all_finite() const {
        return std::all_of(a_.begin(), a_.end(), [](cplx z) { return is_finite(z); });
    }

    Matrix operator+(const Matrix& o) const { return zip(o, [](cplx x, cplx y) { return x + y; }); }
    Matrix operator-(const Matrix& o) const { return zip(o, [](cplx x, cplx y) { return x - y; }); }

    Matrix operator*(const Matrix& o) const {
        same_dim(o);
        Matrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    Matrix operator*(cplx s) const {
        Matrix r(*this);
        for (auto& v : r.a_) v *= s;
        return r;
    }
    friend Matrix operator*(cplx s, const Matrix& m) { return m * s; }
    Matrix operator/(cplx s) const { return *this * (1.0 / s); }

    Matrix transpose() const {
        Matrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    cplx trace() const {
        cplx t{};
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    /// Max-entry magnitude.
    double max_abs() const {
        double m = 0.0;
        for (cplx v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Entry of largest magnitude (first one in row-major order on ties).
    cplx max_entry() const {
        cplx best{};
        double m = -1.0;
        for (cplx v : a_)
            if (std::abs(v) > m) {
                m = std::abs(v);
                best = v;
            }
        return best;
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    Matrix inverse() const {
        Matrix a(*this), inv = identity(n_);
        const double scale = std::max(max_abs(), 1e-300);
        for (std::size_t c = 0; c < n_; ++c) {
            std::size_t p = c;
            for (std::size_t r = c + 1; r < n_; ++r)
                if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
            if (std::abs(a(p, c)) <= 1e-14 * scale) fail(ErrorKind::ZeroDivision, "singular matrix");
            if (p != c)
                for (std::size_t j = 0; j < n_; ++j) {
                    std::swap(a(p, j), a(c, j));
                    std::swap(inv(p, j), inv(c, j));
                }
            const cplx piv = a(c, c);
            for (std::size_t j = 0; j < n_; ++j) {
                a(c, j) /= piv;
                inv(c, j) /= piv;
            }
            for (std::size_t r = 0; r < n_; ++r) {
                if (r == c) continue;
                const cplx f = a(r, c);
                if (f == cplx{}) continue;
                for (std::size_t j = 0; j < n_; ++j) {
                    a(r, j) -= f * a(c, j);
                    inv(r, j) -= f * inv(c, j);
                }
            }
        }
        return inv;
    }

    bool operator==(const Matrix& o) const { return n_ == o.n_ && a_ == o.a_; }

private:
    template <class F>
    Matrix zip(const Matrix& o, F f) const {
        same_dim(o);
        Matrix r(n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f(a_[i], o.a_[i]);
        return r;
    }
    void same_dim(const Matrix& o) const {
        if (n_ != o.n_) fail(ErrorKind::Dimension, "dimension mismatch");
    }

    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

/// kron(a,b)[(i*nb+k),(j*nb+l)] = a[i,j]*b[k,l].
inline Matrix kron(const Matrix& a, const Matrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    if (na * nb > MAX_DIM) fail(ErrorKind::Dimension, "kron result exceeds supported dimension");
    Matrix r(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return r;
}

/// Factor swap on C^2 (x) C^2.
inline Matrix swap4() {
    Matrix p(4);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) p(b * 2 + a, a * 2 + b) = 1.0;
    return p;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) fail(ErrorKind::Dimension, "max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

/// Rescale so the largest entry has magnitude one (phase is kept).
inline Matrix unit_max(const Matrix& m) {
    const double s = m.max_abs();
    if (s == 0.0 || !std::isfinite(s)) return m;
    return m * cplx(1.0 / s, 0.0);
}

enum class Slot { S12 = 12, S23 = 23, S13 = 13 };

/// Place a 4x4 operator on two of three tensor factors.
inline Matrix embed_pair(const Matrix& r, Slot slot) {
    if (r.dim() != 4) fail(ErrorKind::Dimension, "embed_pair expects a 4x4 matrix");
    const Matrix i2 = Matrix::identity(2);
    switch (slot) {
        case Slot::S12: return kron(r, i2);
        case Slot::S23: return kron(i2, r);
        case Slot::S13: {
            const Matrix pi = kron(swap4(), i2);
            return pi * kron(i2, r) * pi;
        }
    }
    fail(ErrorKind::InvalidParams, "unknown slot");
}

// Pauli-type 2x2 building blocks.
inline Matrix sigma_plus() { return Matrix(2, {0.0, 1.0, 0.0, 0.0}); }
inline Matrix sigma_minus() { return Matrix(2, {0.0, 0.0, 1.0, 0.0}); }
/// sigma^z with the half-normalisation diag(1,-1)/2.
inline Matrix sigma_z_half() { return Matrix::diag({0.5, -0.5}); }

}  // namespace qybe
