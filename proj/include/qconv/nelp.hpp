#ifndef QCONV_NELP_HPP
#define QCONV_NELP_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "qconv/simplex.hpp"
#include "qconv/states.hpp"

namespace qconv {

constexpr double kFeasTol = 1e-9;        // Feasible/Infeasible separation
constexpr double kCutTrigger = 1e-10;    // continuum violation that spawns a cut
constexpr int kCutCap = 50;
constexpr int kDefaultAGridSize = 101;

/// Channel overlap matrix, F_ij = tr(Phi_i Lambda(xi_j)), stored row-major
/// F_11..F_14, F_21..F_44. Indices are 1-based to match the constraint set.
struct FMatrix {
    std::array<double, 16> f{};

    double operator()(int i, int j) const { return f[static_cast<std::size_t>(4 * (i - 1) + (j - 1))]; }
    double& operator()(int i, int j) { return f[static_cast<std::size_t>(4 * (i - 1) + (j - 1))]; }
};

/// The 16-variable feasibility program over F_ij in [0,1]:
///   (E1) sum_j lambda_j F_ij = m_i          (4 rows)
///   (E2) sum_i F_ij = 1                     (4 rows)
///   (I1) F_i1 + F_i3 <= 1                   (4 rows)
///   (I2) per grid point a and each i:
///        2a(1-a) F_i1 + a^2 F_i2 + (1-a)^2 F_i4 <= 1/2
///        2a(1-a) F_i3 + a^2 F_i2 + (1-a)^2 F_i4 <= 1/2
struct LpProblem {
    std::array<double, 4> lambda{};
    std::array<double, 4> target{};
    std::vector<double> a_grid;
    std::vector<std::array<double, 16>> eq_lhs;
    std::vector<double> eq_rhs;
    std::vector<std::array<double, 16>> ineq_lhs;
    std::vector<double> ineq_rhs;
};

/// Uniform grid of n points on [0,1]; 0.5 is inserted when n-1 is odd so the
/// mandatory points {0, 1/2, 1} are always present.
inline std::vector<double> default_a_grid(int n) {
    if (n < 2) throw std::invalid_argument("default_a_grid: need at least 2 points");
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n) + 1);
    bool has_half = false;
    for (int i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(n - 1);
        if (a == 0.5) has_half = true;
        g.push_back(a);
    }
    if (!has_half) {
        g.push_back(0.5);
        std::sort(g.begin(), g.end());
    }
    return g;
}

inline void append_tau_rows(LpProblem& p, double a) {
    for (int i = 1; i <= 4; ++i) {
        for (int family = 0; family < 2; ++family) {
            std::array<double, 16> row{};
            const int xcol = family == 0 ? 1 : 3;  // F_i1 side, then F_i3 side
            row[static_cast<std::size_t>(4 * (i - 1) + (xcol - 1))] = 2 * a * (1 - a);
            row[static_cast<std::size_t>(4 * (i - 1) + 1)] = a * a;
            row[static_cast<std::size_t>(4 * (i - 1) + 3)] = (1 - a) * (1 - a);
            p.ineq_lhs.push_back(row);
            p.ineq_rhs.push_back(0.5);
        }
    }
}

/// Assembles the program for spectrum s and target overlaps m. The grid must
/// lie in [0,1] and contain {0, 1/2, 1}.
inline LpProblem build_lp(const Spectrum& s, const std::array<double, 4>& target,
                          std::vector<double> a_grid) {
    bool has0 = false, has_half = false, has1 = false;
    for (double a : a_grid) {
        if (a < -1e-12 || a > 1 + 1e-12)
            throw std::invalid_argument("build_lp: grid point outside [0,1]");
        has0 |= std::abs(a) <= 1e-12;
        has_half |= std::abs(a - 0.5) <= 1e-12;
        has1 |= std::abs(a - 1.0) <= 1e-12;
    }
    if (!has0 || !has_half || !has1)
        throw std::invalid_argument("build_lp: grid must contain {0, 1/2, 1}");

    LpProblem p;
    p.lambda = {s[0], s[1], s[2], s[3]};
    p.target = target;
    p.a_grid = std::move(a_grid);
    std::sort(p.a_grid.begin(), p.a_grid.end());

    for (int i = 0; i < 4; ++i) {  // E1
        std::array<double, 16> row{};
        for (int j = 0; j < 4; ++j) row[static_cast<std::size_t>(4 * i + j)] = p.lambda[static_cast<std::size_t>(j)];
        p.eq_lhs.push_back(row);
        p.eq_rhs.push_back(p.target[static_cast<std::size_t>(i)]);
    }
    for (int j = 0; j < 4; ++j) {  // E2
        std::array<double, 16> row{};
        for (int i = 0; i < 4; ++i) row[static_cast<std::size_t>(4 * i + j)] = 1.0;
        p.eq_lhs.push_back(row);
        p.eq_rhs.push_back(1.0);
    }
    for (int i = 0; i < 4; ++i) {  // I1
        std::array<double, 16> row{};
        row[static_cast<std::size_t>(4 * i + 0)] = 1.0;
        row[static_cast<std::size_t>(4 * i + 2)] = 1.0;
        p.ineq_lhs.push_back(row);
        p.ineq_rhs.push_back(1.0);
    }
    for (double a : p.a_grid) append_tau_rows(p, a);
    return p;
}

struct FarkasCertificate {
    std::vector<double> eq;               // free sign
    std::vector<double> ineq;             // >= 0
    std::array<double, 16> upper{};       // >= 0, rows x_k <= 1
    std::array<double, 16> lower{};       // >= 0, rows -x_k <= 0
};

namespace detail {

struct KahanSum {
    double s = 0, c = 0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

}  // namespace detail

/// Recombines the problem rows with the certificate multipliers (compensated
/// summation). Accepts iff the multipliers have valid signs, the aggregated
/// coefficient vector has max-norm <= 1e-9 and the aggregated right-hand side
/// is <= -1e-9.
inline bool verify_farkas(const LpProblem& p, const FarkasCertificate& c) {
    if (c.eq.size() != p.eq_rhs.size() || c.ineq.size() != p.ineq_rhs.size())
        throw std::invalid_argument("verify_farkas: certificate shape mismatch");
    for (double u : c.ineq)
        if (u < 0) return false;
    for (double u : c.upper)
        if (u < 0) return false;
    for (double u : c.lower)
        if (u < 0) return false;

    for (int k = 0; k < 16; ++k) {
        detail::KahanSum t;
        for (std::size_t i = 0; i < c.eq.size(); ++i) t.add(c.eq[i] * p.eq_lhs[i][static_cast<std::size_t>(k)]);
        for (std::size_t i = 0; i < c.ineq.size(); ++i) t.add(c.ineq[i] * p.ineq_lhs[i][static_cast<std::size_t>(k)]);
        t.add(c.upper[static_cast<std::size_t>(k)]);
        t.add(-c.lower[static_cast<std::size_t>(k)]);
        if (std::abs(t.s) > 1e-9) return false;
    }

    detail::KahanSum rhs;
    for (std::size_t i = 0; i < c.eq.size(); ++i) rhs.add(c.eq[i] * p.eq_rhs[i]);
    for (std::size_t i = 0; i < c.ineq.size(); ++i) rhs.add(c.ineq[i] * p.ineq_rhs[i]);
    for (int k = 0; k < 16; ++k) rhs.add(c.upper[static_cast<std::size_t>(k)]);
    return rhs.s <= -1e-9;
}

struct VerdictMeta {
    std::vector<double> a_grid;  // grid actually used, including cuts
    int cuts = 0;
    int iterations = 0;
    bool marginal = false;
    double phase1_objective = 0;
};

/// Outcome of the feasibility question: a witness F matrix or a Farkas
/// certificate of infeasibility.
struct Verdict {
    std::variant<FMatrix, FarkasCertificate> payload;
    VerdictMeta meta;

    bool feasible() const { return std::holds_alternative<FMatrix>(payload); }
    const FMatrix& witness() const { return std::get<FMatrix>(payload); }
    const FarkasCertificate& certificate() const { return std::get<FarkasCertificate>(payload); }
};

/// One semi-infinite constraint family evaluated at its argmax:
/// g(a) = 2a(1-a)x + a^2 y + (1-a)^2 z on [0,1].
struct TauPeak {
    int i = 0;        // Bell row 1..4
    int family = 0;   // 0: x = F_i1, 1: x = F_i3
    double a = 0;     // argmax
    double value = 0; // g(a)
};

/// Maximum of each quadratic g over a in [0,1]. Endpoints are covered by the
/// mandatory grid points, so only the interior vertex of a concave quadratic
/// can exceed the grid; g(a) = a^2 (y+z-2x) + 2a(x-z) + z with vertex
/// a* = (z-x)/(y+z-2x).
inline std::vector<TauPeak> continuum_peaks(const FMatrix& f) {
    std::vector<TauPeak> peaks;
    for (int i = 1; i <= 4; ++i) {
        for (int family = 0; family < 2; ++family) {
            const double x = family == 0 ? f(i, 1) : f(i, 3);
            const double y = f(i, 2);
            const double z = f(i, 4);
            const double q2 = y + z - 2 * x;
            TauPeak peak;
            peak.i = i;
            peak.family = family;
            // Endpoint values (always grid-covered).
            peak.a = 0;
            peak.value = z;
            if (y > peak.value) {
                peak.a = 1;
                peak.value = y;
            }
            if (q2 < 0) {
                const double astar = (z - x) / q2;
                if (astar > 0 && astar < 1) {
                    const double g = astar * astar * q2 + 2 * astar * (x - z) + z;
                    if (g > peak.value) {
                        peak.a = astar;
                        peak.value = g;
                    }
                }
            }
            peaks.push_back(peak);
        }
    }
    return peaks;
}

inline double continuum_max(const FMatrix& f) {
    double worst = 0;
    for (const TauPeak& p : continuum_peaks(f)) worst = std::max(worst, p.value);
    return worst;
}

/// Largest constraint violation of a candidate witness (equalities by
/// absolute residual, inequalities and bounds by excess).
inline double witness_residual(const LpProblem& p, const FMatrix& f) {
    double worst = 0;
    for (std::size_t r = 0; r < p.eq_rhs.size(); ++r) {
        double s = 0;
        for (int k = 0; k < 16; ++k) s += p.eq_lhs[r][static_cast<std::size_t>(k)] * f.f[static_cast<std::size_t>(k)];
        worst = std::max(worst, std::abs(s - p.eq_rhs[r]));
    }
    for (std::size_t r = 0; r < p.ineq_rhs.size(); ++r) {
        double s = 0;
        for (int k = 0; k < 16; ++k) s += p.ineq_lhs[r][static_cast<std::size_t>(k)] * f.f[static_cast<std::size_t>(k)];
        worst = std::max(worst, s - p.ineq_rhs[r]);
    }
    for (double x : f.f) {
        worst = std::max(worst, -x);
        worst = std::max(worst, x - 1.0);
    }
    return worst;
}

namespace detail {

inline DenseLp to_dense(const LpProblem& p) {
    DenseLp lp;
    lp.nvars = 16;
    lp.upper.assign(16, 1.0);
    lp.eq_rhs = p.eq_rhs;
    lp.ineq_rhs = p.ineq_rhs;
    lp.eq_lhs.reserve(p.eq_lhs.size() * 16);
    for (const auto& row : p.eq_lhs) lp.eq_lhs.insert(lp.eq_lhs.end(), row.begin(), row.end());
    lp.ineq_lhs.reserve(p.ineq_lhs.size() * 16);
    for (const auto& row : p.ineq_lhs) lp.ineq_lhs.insert(lp.ineq_lhs.end(), row.begin(), row.end());
    return lp;
}

/// Between grid points the tau quadratic can bulge above its grid values by
/// at most |y + z - 2x| / 8 * da^2 <= da^2 / 4. A witness of the program with
/// every tau row tightened by this margin therefore satisfies the continuum
/// constraint outright, so the cutting loop never fires for it.
inline double tau_bulge_margin(const std::vector<double>& a_grid) {
    double da = 0;
    for (std::size_t k = 1; k < a_grid.size(); ++k) da = std::max(da, a_grid[k] - a_grid[k - 1]);
    return da * da;
}

/// Index of the (i, family) pair a tau inequality row belongs to, or -1 for
/// the I1 rows. Rows are laid out as 4 I1 rows, then blocks of 8 per grid
/// point (i = 1..4 x two families).
inline int tau_row_family(std::size_t ineq_row) {
    if (ineq_row < 4) return -1;
    return static_cast<int>((ineq_row - 4) % 8);
}

/// Witness-improvement pass: solves the program with the tau rows of every
/// family tightened by a per-family margin. Families that cannot take the
/// full bulge margin (their tightened rows carry weight in the Farkas
/// certificate of a failed attempt) are moved onto a reduced-margin ladder
/// margin/8, margin/64, ..., 0 shared by all such families. Keeping the
/// margin of boundary-pinned families as large as the polytope allows makes
/// the returned witness essentially the min-max point, which stabilizes the
/// cutting loop. The verdict region is never changed by any of this.
inline SimplexResult solve_with_family_margins(const LpProblem& p, double margin,
                                               const LpOptions& opt, int& iterations) {
    std::array<bool, 8> reduced{};
    double reduced_margin = margin / 8;
    SimplexResult res;
    for (int attempt = 0; attempt <= 16; ++attempt) {
        DenseLp lp = to_dense(p);
        for (std::size_t r = 4; r < lp.ineq_rhs.size(); ++r) {
            const int fam = tau_row_family(r);
            if (fam < 0) continue;
            lp.ineq_rhs[r] -= reduced[static_cast<std::size_t>(fam)] ? reduced_margin : margin;
        }
        res = solve_dense_lp(lp, opt);
        iterations += res.iterations;
        if (res.status != LpStatus::Infeasible) return res;

        // Put every blamed family on the reduced ladder; once the blame
        // lands on already-reduced families, lower the ladder instead.
        std::array<double, 8> weight{};
        for (std::size_t r = 4; r < res.ray.ineq.size(); ++r) {
            const int fam = tau_row_family(r);
            if (fam >= 0) weight[static_cast<std::size_t>(fam)] += res.ray.ineq[r];
        }
        bool grew = false;
        for (int k = 0; k < 8; ++k) {
            if (!reduced[static_cast<std::size_t>(k)] && weight[static_cast<std::size_t>(k)] > 1e-9) {
                reduced[static_cast<std::size_t>(k)] = true;
                grew = true;
            }
        }
        if (!grew) {
            if (reduced_margin == 0.0) break;
            reduced_margin = reduced_margin > margin / 300 ? reduced_margin / 8 : 0.0;
        }
    }
    return res;  // infeasible; caller keeps the plain witness
}

}  // namespace detail

/// Two-phase simplex (Bland's rule) on the assembled program. Feasible
/// verdicts carry a witness that satisfies every row within 1e-9; infeasible
/// verdicts carry a Farkas certificate. Near-threshold phase-1 optima are
/// flagged marginal rather than trusted.
inline Verdict solve_feasibility(const LpProblem& p, const LpOptions& opt = {}) {
    const SimplexResult res = solve_dense_lp(detail::to_dense(p), opt);
    if (res.status == LpStatus::IterationLimit)
        throw std::runtime_error("solve_feasibility: simplex iteration cap exceeded");
    if (res.status == LpStatus::Unbounded)
        throw std::logic_error("solve_feasibility: bounded program reported unbounded");

    Verdict v;
    v.meta.a_grid = p.a_grid;
    v.meta.iterations = res.iterations;
    v.meta.phase1_objective = res.phase1_objective;
    v.meta.marginal =
        res.phase1_objective > opt.feas_tol / 10 && res.phase1_objective < opt.feas_tol * 10;

    if (res.status == LpStatus::Optimal) {
        FMatrix f;
        std::copy(res.x.begin(), res.x.end(), f.f.begin());
        if (continuum_max(f) > 0.5 + kCutTrigger) {
            const SimplexResult margined = detail::solve_with_family_margins(
                p, detail::tau_bulge_margin(p.a_grid), opt, v.meta.iterations);
            if (margined.status == LpStatus::Optimal) {
                FMatrix g;
                std::copy(margined.x.begin(), margined.x.end(), g.f.begin());
                // Adopt the improved witness only if it is actually valid;
                // the plain witness plus the cutting loop remain the backstop.
                if (witness_residual(p, g) <= opt.feas_tol) f = g;
            }
        }
        if (witness_residual(p, f) > opt.feas_tol)
            throw std::logic_error("solve_feasibility: witness violates constraints");
        v.payload = f;
    } else {
        FarkasCertificate cert;
        cert.eq = res.ray.eq;
        cert.ineq = res.ray.ineq;
        std::copy(res.ray.upper.begin(), res.ray.upper.end(), cert.upper.begin());
        std::copy(res.ray.lower.begin(), res.ray.lower.end(), cert.lower.begin());
        if (!verify_farkas(p, cert) && !v.meta.marginal)
            throw std::logic_error("solve_feasibility: certificate failed verification");
        v.payload = std::move(cert);
    }
    return v;
}

/// Cutting-plane closure of the tau-family constraints: while the feasible
/// witness violates the continuum constraint beyond 1/2 + 1e-10, the argmax
/// points are appended to the grid and the program re-solved (cap 50 cuts).
/// Infeasible verdicts pass through unchanged (grid rows are a subset of the
/// continuum). A returned Feasible verdict satisfies the continuum constraint
/// within 1e-9.
inline Verdict refine_continuum(const Spectrum& s, const std::array<double, 4>& target, Verdict v,
                                const LpOptions& opt = {}) {
    int total_iterations = v.meta.iterations;
    std::array<bool, 8> violated_before{};
    while (v.feasible()) {
        std::vector<double> cuts;
        const auto add_cut = [&](double a) {
            if (a <= 0 || a >= 1) return;
            for (double known : v.meta.a_grid)
                if (std::abs(known - a) <= 1e-12) return;
            for (double known : cuts)
                if (std::abs(known - a) <= 1e-12) return;
            cuts.push_back(a);
        };
        std::array<bool, 8> violated_now{};
        for (const TauPeak& peak : continuum_peaks(v.witness())) {
            if (peak.value <= 0.5 + kCutTrigger) continue;
            const std::size_t fam = static_cast<std::size_t>(2 * (peak.i - 1) + peak.family) % 8;
            violated_now[fam] = true;
            add_cut(peak.a);
            if (violated_before[fam]) {
                // The family keeps grazing the boundary: pin the apex with a
                // local bracket so the bulge collapses quadratically.
                double gap = 1.0;
                for (double known : v.meta.a_grid)
                    if (std::abs(known - peak.a) > 1e-12)
                        gap = std::min(gap, std::abs(known - peak.a));
                add_cut(peak.a - gap / 4);
                add_cut(peak.a + gap / 4);
            }
        }
        if (cuts.empty()) break;
        if (v.meta.cuts + static_cast<int>(cuts.size()) > kCutCap)
            throw std::runtime_error("refine_continuum: cut cap exceeded");

        std::vector<double> grid = v.meta.a_grid;
        grid.insert(grid.end(), cuts.begin(), cuts.end());
        const int prior_cuts = v.meta.cuts + static_cast<int>(cuts.size());
        Verdict next = solve_feasibility(build_lp(s, target, std::move(grid)), opt);
        total_iterations += next.meta.iterations;
        next.meta.cuts = prior_cuts;
        v = std::move(next);
        violated_before = violated_now;
    }
    v.meta.iterations = total_iterations;
    return v;
}

/// Target overlaps m_i = tr(Phi_i sigma) of an arbitrary target state.
inline std::array<double, 4> target_overlaps(const DensityMatrix& sigma) {
    std::array<double, 4> m{};
    for (int i = 1; i <= 4; ++i) m[static_cast<std::size_t>(i - 1)] = overlap(sigma, i);
    return m;
}

/// Full pipeline for an arbitrary isospectral target given by its Bell
/// overlaps: build on the default grid, solve, close under cuts.
inline Verdict feasible_for_target(const Spectrum& s, const std::array<double, 4>& target,
                                   int a_grid_size = kDefaultAGridSize, const LpOptions& opt = {}) {
    Verdict v = solve_feasibility(build_lp(s, target, default_a_grid(a_grid_size)), opt);
    return refine_continuum(s, target, std::move(v), opt);
}

/// Feasibility of converting mems(s) to the Bell-diagonal target sigma_s.
/// Infeasible certifies that no non-entangling map performs the conversion.
inline Verdict feasible_for_spectrum(const Spectrum& s, int a_grid_size = kDefaultAGridSize,
                                     const LpOptions& opt = {}) {
    return feasible_for_target(s, {s[0], s[1], s[2], s[3]}, a_grid_size, opt);
}

inline std::array<std::array<int, 4>, 24> all_permutations() {
    std::array<std::array<int, 4>, 24> out{};
    std::array<int, 4> p{1, 2, 3, 4};
    for (std::size_t n = 0; n < 24; ++n) {
        out[n] = p;
        std::next_permutation(p.begin(), p.end());
    }
    return out;
}

/// Runs the LP for every eigenvalue-to-Bell-state assignment sigma^pi. The
/// verdict tags must coincide across all 24 targets.
inline std::vector<Verdict> permutation_scan(const Spectrum& s, int a_grid_size = kDefaultAGridSize,
                                             const LpOptions& opt = {}) {
    std::vector<Verdict> out;
    out.reserve(24);
    for (const auto& perm : all_permutations()) {
        std::array<double, 4> m{};
        for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] = s[perm[static_cast<std::size_t>(i)] - 1];
        out.push_back(feasible_for_target(s, m, a_grid_size, opt));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Flat key-value serialization of verdicts (golden-file friendly).

namespace detail {

inline void append_number(std::string& out, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

}  // namespace detail

inline std::string verdict_record(const Spectrum& s, const std::array<double, 4>& target,
                                  const Verdict& v) {
    std::string out;
    out += "spectrum";
    for (int i = 0; i < 4; ++i) {
        out += ' ';
        detail::append_number(out, s[i]);
    }
    out += "\ntarget";
    for (double m : target) {
        out += ' ';
        detail::append_number(out, m);
    }
    out += "\ntag ";
    out += v.feasible() ? "Feasible" : "Infeasible";
    out += "\ngrid " + std::to_string(v.meta.a_grid.size());
    out += "\ncuts " + std::to_string(v.meta.cuts);
    out += "\niterations " + std::to_string(v.meta.iterations);
    out += "\nmarginal ";
    out += v.meta.marginal ? '1' : '0';
    out += '\n';
    if (v.feasible()) {
        out += "F";
        for (double x : v.witness().f) {
            out += ' ';
            detail::append_number(out, x);
        }
        out += '\n';
    } else {
        const FarkasCertificate& c = v.certificate();
        out += "farkas_eq";
        for (double y : c.eq) {
            out += ' ';
            detail::append_number(out, y);
        }
        out += '\n';
        for (std::size_t i = 0; i < c.ineq.size(); ++i) {
            if (c.ineq[i] == 0) continue;
            out += "farkas_ineq " + std::to_string(i) + ' ';
            detail::append_number(out, c.ineq[i]);
            out += '\n';
        }
        for (int k = 0; k < 16; ++k) {
            if (c.upper[static_cast<std::size_t>(k)] == 0) continue;
            out += "farkas_upper " + std::to_string(k) + ' ';
            detail::append_number(out, c.upper[static_cast<std::size_t>(k)]);
            out += '\n';
        }
        for (int k = 0; k < 16; ++k) {
            if (c.lower[static_cast<std::size_t>(k)] == 0) continue;
            out += "farkas_lower " + std::to_string(k) + ' ';
            detail::append_number(out, c.lower[static_cast<std::size_t>(k)]);
            out += '\n';
        }
    }
    return out;
}

}  // namespace qconv

#endif  // QCONV_NELP_HPP
