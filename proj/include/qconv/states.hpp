#ifndef QCONV_STATES_HPP
#define QCONV_STATES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qconv/linalg.hpp"

namespace qconv {

constexpr double kPsdTol = 1e-10;   // minimum-eigenvalue slack for PSD / PPT decisions
constexpr double kExactTol = 1e-12; // Hermiticity, trace and normalization checks

/// Ordered two-qubit spectrum: l1 >= l2 >= l3 >= l4 >= 0, sum 1.
struct Spectrum {
    std::array<double, 4> v{};

    Spectrum() = default;
    Spectrum(double l1, double l2, double l3, double l4) : v{l1, l2, l3, l4} { validate(); }
    explicit Spectrum(const std::array<double, 4>& vals) : v(vals) { validate(); }

    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

    void validate() const {
        double sum = 0;
        for (double x : v) sum += x;
        if (std::abs(sum - 1.0) > kExactTol)
            throw std::invalid_argument("Spectrum: eigenvalues must sum to 1");
        for (int i = 0; i < 3; ++i)
            if (v[static_cast<std::size_t>(i)] < v[static_cast<std::size_t>(i + 1)] - kExactTol)
                throw std::invalid_argument("Spectrum: eigenvalues must be non-increasing");
        if (v[3] < -kExactTol) throw std::invalid_argument("Spectrum: eigenvalues must be >= 0");
    }
};

/// Validated two-qubit density matrix (Hermitian, PSD, unit trace).
struct DensityMatrix {
    Mat4 m;

    DensityMatrix() : m(Mat4::identity()) {
        for (int i = 0; i < 4; ++i) m(i, i) = 0.25;
    }
    explicit DensityMatrix(const Mat4& x) : m(x) { validate(); }

    void validate() const {
        if (!is_hermitian(m, kExactTol))
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        if (std::abs(trace(m) - cplx{1, 0}) > kExactTol)
            throw std::invalid_argument("DensityMatrix: trace must be 1");
        if (min_hermitian_eigenvalue(m) < -kPsdTol)
            throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }
};

/// Bell vector |Phi_i>, i in 1..4.
inline Ket bell_ket(int i) {
    const double s = 1.0 / std::sqrt(2.0);
    Ket k;
    switch (i) {
        case 1: k[0] = s; k[3] = s; break;   // (|00> + |11>)/sqrt2
        case 2: k[0] = s; k[3] = -s; break;  // (|00> - |11>)/sqrt2
        case 3: k[1] = s; k[2] = s; break;   // (|10> + |01>)/sqrt2
        case 4: k[1] = -s; k[2] = s; break;  // (|10> - |01>)/sqrt2
        default: throw std::out_of_range("bell_ket: index must be in 1..4");
    }
    return k;
}

inline Mat4 bell_projector(int i) { return projector(bell_ket(i)); }

inline Ket basis_ket(int i) {
    if (i < 0 || i > 3) throw std::out_of_range("basis_ket: index must be in 0..3");
    Ket k;
    k[i] = 1;
    return k;
}

/// The fixed decomposition operators of the MEMS:
/// xi_1 = Phi_1, xi_2 = |01><01|, xi_3 = Phi_2, xi_4 = |10><10|.
inline Mat4 mems_component(int j) {
    switch (j) {
        case 1: return bell_projector(1);
        case 2: return projector(basis_ket(1));
        case 3: return bell_projector(2);
        case 4: return projector(basis_ket(2));
        default: throw std::out_of_range("mems_component: index must be in 1..4");
    }
}

/// The isospectral entanglement maximizer sum_j lambda_j xi_j.
inline DensityMatrix mems(const Spectrum& s) {
    Mat4 m;
    for (int j = 1; j <= 4; ++j) m = m + cplx{s[j - 1], 0} * mems_component(j);
    return DensityMatrix(m);
}

/// Bell-diagonal state sum_j lambda_{perm(j)} Phi_j. perm is a permutation of
/// {1,2,3,4}; the identity yields the canonical target sigma.
inline DensityMatrix bell_diagonal(const Spectrum& s, const std::array<int, 4>& perm = {1, 2, 3, 4}) {
    std::array<bool, 4> seen{};
    for (int p : perm) {
        if (p < 1 || p > 4 || seen[static_cast<std::size_t>(p - 1)])
            throw std::invalid_argument("bell_diagonal: perm must be a permutation of 1..4");
        seen[static_cast<std::size_t>(p - 1)] = true;
    }
    Mat4 m;
    for (int j = 1; j <= 4; ++j)
        m = m + cplx{s[perm[static_cast<std::size_t>(j - 1)] - 1], 0} * bell_projector(j);
    return DensityMatrix(m);
}

/// Separable family tau_a^+- (built on Phi_1) and tau~_a^+- (built on Phi_2):
///   2a(1-a) Phi + a^2 |01><01| + (1-a)^2 |10><10| +- a(1-a)(|01><10| + |10><01|).
inline DensityMatrix tau_state(double a, int sign, bool tilde) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("tau_state: a must be in [0,1]");
    if (sign != +1 && sign != -1) throw std::invalid_argument("tau_state: sign must be +-1");
    const Ket k01 = basis_ket(1);
    const Ket k10 = basis_ket(2);
    Mat4 m = cplx{2 * a * (1 - a), 0} * bell_projector(tilde ? 2 : 1);
    m = m + cplx{a * a, 0} * projector(k01);
    m = m + cplx{(1 - a) * (1 - a), 0} * projector(k10);
    m = m + cplx{sign * a * (1 - a), 0} * (outer(k01, k10) + outer(k10, k01));
    return DensityMatrix(m);
}

/// PPT decision, exact for two qubits: entangled iff the partial transpose has
/// an eigenvalue below -kPsdTol.
inline bool is_entangled(const DensityMatrix& rho) {
    return min_hermitian_eigenvalue(partial_transpose(rho.m)) < -kPsdTol;
}

/// tr(Phi_i rho); real and in [0,1] for states.
inline double overlap(const DensityMatrix& rho, int i) {
    const cplx t = trace(bell_projector(i) * rho.m);
    if (std::abs(std::imag(t)) > kExactTol)
        throw std::logic_error("overlap: trace has a non-real part");
    return std::real(t);
}

/// |Phi_1(eps)> = (|Phi_1> + eps|10>)/sqrt(1+eps^2).
inline Ket perturbed_bell_ket(double eps) {
    return (bell_ket(1) + cplx{eps, 0} * basis_ket(2)).normalized();
}

/// Rank-deficient perturbed state lambda1 Phi_1(eps) + lambda2 |01><01|
/// (+ lambda3 Phi_2 when lambda3 > 0); isospectral to mems(s) for every eps.
/// Requires lambda4 = 0.
inline DensityMatrix perturbed_mems(const Spectrum& s, double eps) {
    if (s[3] > kExactTol)
        throw std::invalid_argument("perturbed_mems: spectrum must have lambda4 = 0");
    if (eps < 0) throw std::invalid_argument("perturbed_mems: eps must be >= 0");
    Mat4 m = cplx{s[0], 0} * projector(perturbed_bell_ket(eps));
    m = m + cplx{s[1], 0} * projector(basis_ket(1));
    if (s[2] > 0) m = m + cplx{s[2], 0} * bell_projector(2);
    return DensityMatrix(m);
}

/// Largest eps* (bisection, absolute tolerance 1e-9) such that
/// perturbed_mems(s, eps) tests entangled for every eps < eps*. Requires an
/// entangled mems(s) with lambda4 = 0. When the family never turns separable
/// within the search range the range cap is returned.
inline double max_entangling_epsilon(const Spectrum& s) {
    if (s[3] > kExactTol)
        throw std::invalid_argument("max_entangling_epsilon: spectrum must have lambda4 = 0");
    if (!is_entangled(mems(s)))
        throw std::invalid_argument("max_entangling_epsilon: mems(s) is separable, no eps exists");

    const auto entangled_at = [&s](double eps) { return is_entangled(perturbed_mems(s, eps)); };

    double lo = 0.0;       // entangled
    double hi = 1.0;
    const double cap = 1048576.0;  // 2^20
    while (entangled_at(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > cap) return cap;  // entangled throughout the tested range
    }
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (entangled_at(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// ---------------------------------------------------------------------------
// Random sampling helpers (Haar-uniform product vectors and separable mixtures)

/// Haar-uniform single-qubit ket from two normalized complex Gaussians.
inline std::array<cplx, 2> random_qubit_ket(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::array<cplx, 2> q{cplx{g(rng), g(rng)}, cplx{g(rng), g(rng)}};
    const double n = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
    q[0] /= n;
    q[1] /= n;
    return q;
}

inline Ket random_product_ket(std::mt19937_64& rng) {
    const auto qa = random_qubit_ket(rng);
    const auto qb = random_qubit_ket(rng);
    Ket k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k[2 * i + j] = qa[static_cast<std::size_t>(i)] * qb[static_cast<std::size_t>(j)];
    return k;
}

/// Convex mixture of `terms` random product projectors (a separable state).
inline DensityMatrix random_separable_state(std::mt19937_64& rng, int terms = 4) {
    if (terms < 1) throw std::invalid_argument("random_separable_state: terms must be >= 1");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::array<double, 16> w{};
    double wsum = 0;
    for (int t = 0; t < terms; ++t) {
        w[static_cast<std::size_t>(t)] = -std::log(1.0 - u(rng));
        wsum += w[static_cast<std::size_t>(t)];
    }
    Mat4 m;
    for (int t = 0; t < terms; ++t)
        m = m + cplx{w[static_cast<std::size_t>(t)] / wsum, 0} * projector(random_product_ket(rng));
    return DensityMatrix(m);
}

/// Uniform sample from the ordered eigenvalue simplex (4 exponentials,
/// normalized, sorted non-increasing).
inline Spectrum random_spectrum(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::array<double, 4> v{};
    double sum = 0;
    for (double& x : v) {
        x = -std::log(1.0 - u(rng));
        sum += x;
    }
    for (double& x : v) x /= sum;
    std::sort(v.begin(), v.end(), std::greater<double>());
    // Renormalize the rounding residue into the largest entry.
    v[0] += 1.0 - (v[0] + v[1] + v[2] + v[3]);
    return Spectrum(v);
}

}  // namespace qconv

#endif  // QCONV_STATES_HPP
