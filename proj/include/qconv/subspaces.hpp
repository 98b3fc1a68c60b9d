#ifndef QCONV_SUBSPACES_HPP
#define QCONV_SUBSPACES_HPP

#include <random>
#include <stdexcept>
#include <vector>

#include "qconv/linalg.hpp"
#include "qconv/states.hpp"

namespace qconv {

constexpr double kDiscriminantTol = 1e-10;  // One vs Two, relative to coefficient norm
constexpr double kZeroFormTol = 1e-12;      // all-separable detection
constexpr double kComplementDetTol = 1e-10; // separable vs entangled complement
constexpr double kInvertibleTol = 1e-8;     // |det| floor for local operators

/// Number of separable rays in a 2-dimensional subspace: exactly one, exactly
/// two, or all states separable.
enum class SeparableCount { One, Two, All };

/// Classification of a 3-dimensional subspace by its 1-dimensional orthogonal
/// complement.
enum class ComplementClass { SeparableComplement, EntangledComplement };

inline const char* to_string(SeparableCount c) {
    switch (c) {
        case SeparableCount::One: return "One";
        case SeparableCount::Two: return "Two";
        case SeparableCount::All: return "All";
    }
    return "?";
}

inline const char* to_string(ComplementClass c) {
    return c == ComplementClass::SeparableComplement ? "SeparableComplement"
                                                     : "EntangledComplement";
}

/// Pair of single-qubit operators acting as a (x) b.
struct LocalPair {
    Mat2 a;
    Mat2 b;

    bool invertible() const {
        return std::abs(det(a)) >= kInvertibleTol && std::abs(det(b)) >= kInvertibleTol;
    }
};

/// 2x2 reshape of a two-qubit ket: M[i][j] = amplitude of |ij>. A ket is a
/// product vector iff its reshape is singular.
inline Mat2 reshape2(const Ket& k) {
    Mat2 m;
    m(0, 0) = k[0];
    m(0, 1) = k[1];
    m(1, 0) = k[2];
    m(1, 1) = k[3];
    return m;
}

namespace detail {

inline Ket gram_schmidt_residual(const Ket& v, const std::vector<Ket>& basis) {
    Ket r = v;
    for (const Ket& b : basis) r = r - inner(b, r) * b;
    return r;
}

}  // namespace detail

/// 2- or 3-dimensional subspace with an orthonormal basis.
struct Subspace {
    std::vector<Ket> basis;

    explicit Subspace(std::vector<Ket> orthonormal) : basis(std::move(orthonormal)) {
        if (basis.size() != 2 && basis.size() != 3)
            throw std::invalid_argument("Subspace: dimension must be 2 or 3");
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (std::abs(basis[i].norm() - 1.0) > kExactTol)
                throw std::invalid_argument("Subspace: basis vector not normalized");
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(inner(basis[i], basis[j])) > kExactTol)
                    throw std::invalid_argument("Subspace: basis not orthogonal");
        }
    }

    /// Orthonormalizes a spanning set (Gram-Schmidt) and wraps the result.
    static Subspace span(const std::vector<Ket>& vectors) {
        std::vector<Ket> ortho;
        for (const Ket& v : vectors) {
            Ket r = detail::gram_schmidt_residual(v, ortho);
            // Re-orthogonalize once against accumulated rounding.
            r = detail::gram_schmidt_residual(r, ortho);
            const double n = r.norm();
            if (n < 1e-12) throw std::invalid_argument("Subspace::span: vectors not independent");
            ortho.push_back(cplx{1.0 / n, 0} * r);
        }
        return Subspace(std::move(ortho));
    }

    int dim() const { return static_cast<int>(basis.size()); }

    /// Orthogonal projector onto the subspace.
    Mat4 projector_matrix() const {
        Mat4 p;
        for (const Ket& b : basis) p = p + projector(b);
        return p;
    }
};

/// Counts separable rays of a 2-d subspace via the binary quadratic
/// q(alpha, beta) = det(reshape2(alpha b1 + beta b2)), whose projective roots
/// are exactly the separable rays: identically zero -> All, vanishing
/// discriminant -> One (double root), otherwise -> Two. Roots are counted on
/// the complex projective line, so the a = 0 chart degeneracy (root at
/// beta = 0) is covered by the discriminant.
inline SeparableCount separable_ray_count(const Subspace& v) {
    if (v.dim() != 2)
        throw std::invalid_argument("separable_ray_count: subspace must be 2-dimensional");
    const Mat2 m1 = reshape2(v.basis[0]);
    const Mat2 m2 = reshape2(v.basis[1]);
    const cplx qa = det(m1);
    const cplx qc = det(m2);
    const cplx qb = m1(0, 0) * m2(1, 1) + m2(0, 0) * m1(1, 1) - m1(0, 1) * m2(1, 0) -
                    m2(0, 1) * m1(1, 0);

    const double coef_norm = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
    if (coef_norm < kZeroFormTol) return SeparableCount::All;

    const cplx disc = qb * qb - cplx{4, 0} * qa * qc;
    if (std::abs(disc) <= kDiscriminantTol * coef_norm * coef_norm) return SeparableCount::One;
    return SeparableCount::Two;
}

/// Unit vector spanning the orthogonal complement of a 3-d subspace, computed
/// by Gram-Schmidt of the basis extended with canonical vectors.
inline Ket complement_vector(const Subspace& v) {
    if (v.dim() != 3)
        throw std::invalid_argument("complement_vector: subspace must be 3-dimensional");
    for (int i = 0; i < 4; ++i) {
        Ket r = detail::gram_schmidt_residual(basis_ket(i), v.basis);
        r = detail::gram_schmidt_residual(r, v.basis);
        if (r.norm() > 1e-6) return r.normalized();
    }
    throw std::logic_error("complement_vector: no residual direction found");
}

/// Classifies a 3-d subspace by whether its complement ray is a product
/// vector (reshape determinant below tolerance) or entangled.
inline ComplementClass complement_class(const Subspace& v) {
    const Ket c = complement_vector(v);
    return std::abs(det(reshape2(c))) <= kComplementDetTol ? ComplementClass::SeparableComplement
                                                           : ComplementClass::EntangledComplement;
}

/// Image subspace (A (x) B)V, re-orthonormalized. Requires invertible A, B.
inline Subspace apply_local(const Subspace& v, const LocalPair& p) {
    if (!p.invertible()) throw std::invalid_argument("apply_local: local pair must be invertible");
    const Mat4 op = kron(p.a, p.b);
    std::vector<Ket> images;
    images.reserve(v.basis.size());
    for (const Ket& b : v.basis) images.push_back(op * b);
    return Subspace::span(images);
}

/// Support of the rank-2 mems (lambda, 1-lambda, 0, 0): span{|Phi_1>, |01>}.
inline Subspace rank2_source_support() {
    return Subspace({bell_ket(1), basis_ket(1)});
}

/// Support of the rank-2 perturbed state: span{|Phi_1(eps)>, |01>}.
inline Subspace rank2_target_support(double eps) {
    return Subspace({perturbed_bell_ket(eps), basis_ket(1)});
}

/// Support of the rank-3 mems: span{|Phi_1>, |01>, |Phi_2>}.
inline Subspace rank3_source_support() {
    return Subspace({bell_ket(1), basis_ket(1), bell_ket(2)});
}

/// Support of the rank-3 perturbed state: span{|Phi_1(eps)>, |01>, |Phi_2>}.
inline Subspace rank3_target_support(double eps) {
    return Subspace({perturbed_bell_ket(eps), basis_ket(1), bell_ket(2)});
}

/// SEP obstruction for spectra (lambda, 1-lambda, 0, 0), lambda in [1/2, 1):
/// true iff the source support holds exactly one separable ray, the target
/// support exactly two, and the target state is entangled — jointly certifying
/// that no SEP map sends mems(s) to perturbed_mems(s, eps).
inline bool sep_obstruction_rank2(const Spectrum& s, double eps) {
    if (s[2] > kExactTol || s[3] > kExactTol)
        throw std::invalid_argument("sep_obstruction_rank2: spectrum must be rank 2");
    if (s[0] < 0.5 - kExactTol || s[0] >= 1.0)
        throw std::invalid_argument("sep_obstruction_rank2: lambda must be in [1/2, 1)");
    if (eps < 0) throw std::invalid_argument("sep_obstruction_rank2: eps must be >= 0");
    if (eps == 0) return false;
    const bool source_one = separable_ray_count(rank2_source_support()) == SeparableCount::One;
    const bool target_two = separable_ray_count(rank2_target_support(eps)) == SeparableCount::Two;
    const bool target_entangled = is_entangled(perturbed_mems(s, eps));
    return source_one && target_two && target_entangled;
}

/// SEP obstruction for rank-3 spectra (lambda3 > lambda4 = 0, lambda1 != lambda3):
/// true iff the source support has a separable orthogonal complement, the
/// target support an entangled one, and the target state is entangled.
inline bool sep_obstruction_rank3(const Spectrum& s, double eps) {
    if (s[3] > kExactTol)
        throw std::invalid_argument("sep_obstruction_rank3: lambda4 must be 0");
    if (s[2] <= kExactTol)
        throw std::invalid_argument("sep_obstruction_rank3: lambda3 must be > 0");
    if (std::abs(s[0] - s[2]) <= kExactTol)
        throw std::invalid_argument("sep_obstruction_rank3: lambda1 = lambda3 is excluded");
    if (eps < 0) throw std::invalid_argument("sep_obstruction_rank3: eps must be >= 0");
    if (eps == 0) return false;
    const bool source_sep =
        complement_class(rank3_source_support()) == ComplementClass::SeparableComplement;
    const bool target_ent =
        complement_class(rank3_target_support(eps)) == ComplementClass::EntangledComplement;
    const bool target_entangled = is_entangled(perturbed_mems(s, eps));
    return source_sep && target_ent && target_entangled;
}

/// Random invertible pair of single-qubit operators (complex Gaussian entries,
/// rejection on the determinant floor).
inline LocalPair random_local_pair(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const auto rand_mat2 = [&]() {
        Mat2 m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = cplx{g(rng), g(rng)};
        return m;
    };
    LocalPair p;
    do {
        p.a = rand_mat2();
        p.b = rand_mat2();
    } while (!p.invertible());
    return p;
}

inline Mat2 inverse(const Mat2& m) {
    const cplx d = det(m);
    if (std::abs(d) < kInvertibleTol) throw std::invalid_argument("inverse: singular matrix");
    Mat2 out;
    out(0, 0) = m(1, 1) / d;
    out(0, 1) = -m(0, 1) / d;
    out(1, 0) = -m(1, 0) / d;
    out(1, 1) = m(0, 0) / d;
    return out;
}

}  // namespace qconv

#endif  // QCONV_SUBSPACES_HPP
