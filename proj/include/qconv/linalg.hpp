#ifndef QCONV_LINALG_HPP
#define QCONV_LINALG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qconv {

using cplx = std::complex<double>;

/// Two-qubit state vector in the computational basis |00>,|01>,|10>,|11>.
struct Ket {
    std::array<cplx, 4> a{};

    cplx& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
    const cplx& operator[](int i) const { return a[static_cast<std::size_t>(i)]; }

    double norm_sq() const {
        double s = 0;
        for (const cplx& c : a) s += std::norm(c);
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }

    Ket normalized() const {
        const double n = norm();
        if (n == 0) throw std::invalid_argument("Ket::normalized: zero vector");
        Ket out;
        for (int i = 0; i < 4; ++i) out[i] = a[static_cast<std::size_t>(i)] / n;
        return out;
    }
};

/// <u|v>, conjugate-linear in the first argument.
inline cplx inner(const Ket& u, const Ket& v) {
    cplx s = 0;
    for (int i = 0; i < 4; ++i) s += std::conj(u[i]) * v[i];
    return s;
}

inline Ket operator+(const Ket& u, const Ket& v) {
    Ket out;
    for (int i = 0; i < 4; ++i) out[i] = u[i] + v[i];
    return out;
}

inline Ket operator-(const Ket& u, const Ket& v) {
    Ket out;
    for (int i = 0; i < 4; ++i) out[i] = u[i] - v[i];
    return out;
}

inline Ket operator*(cplx c, const Ket& v) {
    Ket out;
    for (int i = 0; i < 4; ++i) out[i] = c * v[i];
    return out;
}

struct Mat2 {
    std::array<cplx, 4> e{};

    cplx& operator()(int i, int j) { return e[static_cast<std::size_t>(2 * i + j)]; }
    const cplx& operator()(int i, int j) const { return e[static_cast<std::size_t>(2 * i + j)]; }
};

inline cplx det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// General 4x4 complex matrix (operators on the two-qubit space).
struct Mat4 {
    std::array<cplx, 16> e{};

    cplx& operator()(int i, int j) { return e[static_cast<std::size_t>(4 * i + j)]; }
    const cplx& operator()(int i, int j) const { return e[static_cast<std::size_t>(4 * i + j)]; }

    static Mat4 identity() {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1;
        return m;
    }
};

inline Mat4 operator+(const Mat4& x, const Mat4& y) {
    Mat4 out;
    for (std::size_t k = 0; k < 16; ++k) out.e[k] = x.e[k] + y.e[k];
    return out;
}

inline Mat4 operator-(const Mat4& x, const Mat4& y) {
    Mat4 out;
    for (std::size_t k = 0; k < 16; ++k) out.e[k] = x.e[k] - y.e[k];
    return out;
}

inline Mat4 operator*(cplx c, const Mat4& x) {
    Mat4 out;
    for (std::size_t k = 0; k < 16; ++k) out.e[k] = c * x.e[k];
    return out;
}

inline Mat4 operator*(const Mat4& x, const Mat4& y) {
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx{0, 0}) continue;
            for (int j = 0; j < 4; ++j) out(i, j) += xik * y(k, j);
        }
    return out;
}

inline Ket operator*(const Mat4& x, const Ket& v) {
    Ket out;
    for (int i = 0; i < 4; ++i) {
        cplx s = 0;
        for (int j = 0; j < 4; ++j) s += x(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

inline Mat4 adjoint(const Mat4& x) {
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = std::conj(x(j, i));
    return out;
}

inline cplx trace(const Mat4& x) { return x(0, 0) + x(1, 1) + x(2, 2) + x(3, 3); }

/// |u><v|
inline Mat4 outer(const Ket& u, const Ket& v) {
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = u[i] * std::conj(v[j]);
    return out;
}

inline Mat4 projector(const Ket& u) { return outer(u, u); }

/// Kronecker product of single-qubit operators, (a (x) b)|ij> = a|i> (x) b|j>.
inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

inline double max_abs_entry(const Mat4& x) {
    double m = 0;
    for (const cplx& c : x.e) m = std::max(m, std::abs(c));
    return m;
}

inline bool is_hermitian(const Mat4& x, double tol = 1e-10) {
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            if (std::abs(x(i, j) - std::conj(x(j, i))) > tol) return false;
    return true;
}

namespace detail {

inline double offdiag_norm(const Mat4& a) {
    double s = 0;
    for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q) s += std::norm(a(p, q));
    return std::sqrt(2 * s);
}

}  // namespace detail

/// Eigenvalues of a Hermitian 4x4 matrix, sorted in non-increasing order.
///
/// Cyclic Jacobi rotations on the fixed-size matrix; iterates until the
/// off-diagonal norm drops below 1e-13 (at most 60 sweeps). Throws
/// std::invalid_argument when the input fails the Hermiticity tolerance.
inline std::array<double, 4> hermitian_eigenvalues(const Mat4& x, double herm_tol = 1e-10) {
    if (!is_hermitian(x, herm_tol))
        throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");

    // Work on the exactly Hermitian part so rounding in the input cannot
    // leak into complex diagonal entries.
    Mat4 a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = 0.5 * (x(i, j) + std::conj(x(j, i)));

    for (int sweep = 0; sweep < 60; ++sweep) {
        if (detail::offdiag_norm(a) < 1e-13) break;
        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                const cplx apq = a(p, q);
                const double beta = std::abs(apq);
                if (beta < 1e-300) continue;
                const double phi = std::arg(apq);
                const double alpha = std::real(a(p, p));
                const double gamma = std::real(a(q, q));
                const double theta = 0.5 * std::atan2(2 * beta, alpha - gamma);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const cplx ph = std::polar(1.0, -phi);

                // J differs from the identity only in the (p,q) block:
                //   [ c        -s   ]
                //   [ s*ph      c*ph]
                // and a <- J^H a J annihilates a(p,q).
                Mat4 j = Mat4::identity();
                j(p, p) = c;
                j(p, q) = -s;
                j(q, p) = s * ph;
                j(q, q) = c * ph;
                a = adjoint(j) * a * j;
            }
        }
    }

    std::array<double, 4> ev{std::real(a(0, 0)), std::real(a(1, 1)), std::real(a(2, 2)),
                             std::real(a(3, 3))};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3 - i; ++j)
            if (ev[static_cast<std::size_t>(j)] < ev[static_cast<std::size_t>(j + 1)])
                std::swap(ev[static_cast<std::size_t>(j)], ev[static_cast<std::size_t>(j + 1)]);
    return ev;
}

inline double min_hermitian_eigenvalue(const Mat4& x, double herm_tol = 1e-10) {
    return hermitian_eigenvalues(x, herm_tol)[3];
}

/// Partial transposition on the first qubit: (|ij><kl|)^G = |kj><il|.
inline Mat4 partial_transpose(const Mat4& x) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * k + j, 2 * i + l) = x(2 * i + j, 2 * k + l);
    return out;
}

}  // namespace qconv

#endif  // QCONV_LINALG_HPP
