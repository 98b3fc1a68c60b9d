#ifndef QCONV_REGIONS_HPP
#define QCONV_REGIONS_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "qconv/nelp.hpp"
#include "qconv/states.hpp"

namespace qconv {

constexpr double kRegionTol = 1e-9;  // margin for the strict theorem inequalities

/// Six-way classification of a spectrum point (the map legend plus the two
/// out-of-method regions).
enum class RegionTag {
    AllSeparable,     // every isospectral state separable, question void
    TargetSeparable,  // lambda1 <= 1/2: Bell-diagonal target separable, method silent
    GreenFeasible,    // conversion exists analytically (sufficiency condition)
    BlackInfeasible,  // excluded analytically
    OrangeInfeasible, // excluded numerically by the LP
    BlueFeasible,     // LP feasible, existence not excluded
};

enum class TheoremTag { None, Thm4, Thm5, Thm6A, Thm6B, Thm6C };

struct RegionClass {
    RegionTag tag;
    TheoremTag detail = TheoremTag::None;
};

inline const char* to_string(RegionTag t) {
    switch (t) {
        case RegionTag::AllSeparable: return "AllSeparable";
        case RegionTag::TargetSeparable: return "TargetSeparable";
        case RegionTag::GreenFeasible: return "GreenFeasible";
        case RegionTag::BlackInfeasible: return "BlackInfeasible";
        case RegionTag::OrangeInfeasible: return "OrangeInfeasible";
        case RegionTag::BlueFeasible: return "BlueFeasible";
    }
    return "?";
}

inline const char* to_string(TheoremTag t) {
    switch (t) {
        case TheoremTag::None: return "";
        case TheoremTag::Thm4: return "Thm4";
        case TheoremTag::Thm5: return "Thm5";
        case TheoremTag::Thm6A: return "Thm6A";
        case TheoremTag::Thm6B: return "Thm6B";
        case TheoremTag::Thm6C: return "Thm6C";
    }
    return "?";
}

/// Every isospectral state is separable iff lambda1 - lambda3 - 2 sqrt(lambda2 lambda4) <= 0.
inline bool all_separable(const Spectrum& s, double tol = kRegionTol) {
    return s[0] - s[2] - 2 * std::sqrt(std::max(0.0, s[1] * s[3])) <= tol;
}

/// Sufficiency condition 1 - lambda1 - 2 lambda2 >= 0 for a non-entangling
/// conversion to the Bell-diagonal target.
inline bool thm3_applicable(const Spectrum& s, double tol = kRegionTol) {
    return 1 - s[0] - 2 * s[1] >= -tol;
}

/// Parameters of the explicit measure-and-prepare channel realizing the
/// sufficient case; requires lambda1 < 1.
struct NeChannelSpec {
    Spectrum lambda;

    explicit NeChannelSpec(const Spectrum& s) : lambda(s) {
        if (1 - s[0] - 2 * s[1] < -1e-12)
            throw std::invalid_argument("NeChannelSpec: 1 - lambda1 - 2 lambda2 must be >= 0");
        if (s[0] >= 1.0)
            throw std::invalid_argument("NeChannelSpec: lambda1 = 1 is excluded (trivial case)");
    }
};

/// Applies Lambda(X) = tr(Phi_1 X) Phi_1
///                   + tr[(1 - Phi_1) X] / (1 - lambda1) (lambda2 Phi_2 + lambda3 Phi_3 + lambda4 Phi_4).
inline DensityMatrix thm3_channel_apply(const NeChannelSpec& c, const DensityMatrix& x) {
    const double p = overlap(x, 1);
    const double rest = (1 - p) / (1 - c.lambda[0]);
    Mat4 out = cplx{p, 0} * bell_projector(1);
    for (int i = 2; i <= 4; ++i) out = out + cplx{rest * c.lambda[i - 1], 0} * bell_projector(i);
    return DensityMatrix(out);
}

/// Rank-2 exclusion: spectra (lambda, 1-lambda, 0, 0) with lambda in (1/2, 1).
inline bool thm4_infeasible(const Spectrum& s, double tol = kRegionTol) {
    return s[2] <= tol && s[3] <= tol && s[0] > 0.5 + tol && s[0] < 1.0 - tol;
}

/// Rank-3 exclusion: lambda3 > lambda4 = 0, 2 lambda1 - lambda2 > 1 and lambda2 > lambda3.
inline bool thm5_infeasible(const Spectrum& s, double tol = kRegionTol) {
    return s[2] > tol && s[3] <= tol && 2 * s[0] - s[1] > 1 + tol && s[1] > s[2] + tol;
}

/// Spectral regions of the rank-4 exclusion; defined only for lambda1 > 1/2
/// (where 2 lambda4 + lambda3 - lambda1 is automatically negative).
inline std::optional<TheoremTag> thm6_region(const Spectrum& s, double tol = kRegionTol) {
    if (s[0] <= 0.5)
        throw std::invalid_argument("thm6_region: requires lambda1 > 1/2");
    const double c1 = 2 * s[1] + s[2] - s[0];
    const double c2 = 2 * s[2] + s[3] - s[1];
    if (c1 >= -tol) return std::nullopt;
    if (c2 < -tol) return TheoremTag::Thm6A;
    if (s[2] <= 2 * s[3] + tol) {
        if (s[1] > s[2] + s[3] + tol) return TheoremTag::Thm6B;
        return std::nullopt;
    }
    if (s[1] > 1.5 * s[2] + tol) return TheoremTag::Thm6C;
    return std::nullopt;
}

/// The values forced by the rank-2 analysis at lambda in (1/2, 1):
/// (F_11, F_21, F_12, F_22) = ((3l-1)/(2l), (1-l)/(2l), 1/2, 1/2).
inline std::array<double, 4> forced_rank2_values(double lambda) {
    if (lambda <= 0.5 || lambda >= 1.0)
        throw std::invalid_argument("forced_rank2_values: lambda must be in (1/2, 1)");
    return {(3 * lambda - 1) / (2 * lambda), (1 - lambda) / (2 * lambda), 0.5, 0.5};
}

/// Any theorem-based exclusion that fires for this spectrum.
inline TheoremTag analytic_exclusion(const Spectrum& s, double tol = kRegionTol) {
    if (thm4_infeasible(s, tol)) return TheoremTag::Thm4;
    if (thm5_infeasible(s, tol)) return TheoremTag::Thm5;
    if (s[0] > 0.5 + tol) {
        if (const auto r = thm6_region(s, tol)) return *r;
    }
    return TheoremTag::None;
}

/// Classification priority: AllSeparable, TargetSeparable (lambda1 <= 1/2),
/// GreenFeasible (sufficiency), BlackInfeasible (theorem exclusion),
/// OrangeInfeasible (LP), BlueFeasible. A theorem exclusion combined with a
/// feasible LP verdict is a contradiction and raises instead of resolving
/// silently.
inline RegionClass classify(const Spectrum& s, const Verdict& lp, double tol = kRegionTol) {
    if (all_separable(s, tol)) return {RegionTag::AllSeparable};
    if (s[0] <= 0.5 + tol) return {RegionTag::TargetSeparable};
    if (thm3_applicable(s, tol)) return {RegionTag::GreenFeasible};
    const TheoremTag excl = analytic_exclusion(s, tol);
    if (excl != TheoremTag::None) {
        if (lp.feasible())
            throw std::logic_error(std::string("classify: ") + to_string(excl) +
                                   " excludes a spectrum whose LP is feasible");
        return {RegionTag::BlackInfeasible, excl};
    }
    if (!lp.feasible()) return {RegionTag::OrangeInfeasible};
    return {RegionTag::BlueFeasible};
}

/// True when the spectrum sits within tol of one of the classification
/// boundaries (used to flag boundary shells in sweeps).
inline bool near_region_boundary(const Spectrum& s, double tol = kRegionTol) {
    const double asep = s[0] - s[2] - 2 * std::sqrt(std::max(0.0, s[1] * s[3]));
    if (std::abs(asep) <= tol) return true;
    if (std::abs(s[0] - 0.5) <= tol) return true;
    if (std::abs(1 - s[0] - 2 * s[1]) <= tol) return true;
    return false;
}

}  // namespace qconv

#endif  // QCONV_REGIONS_HPP
