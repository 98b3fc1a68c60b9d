#ifndef QCONV_SIMPLEX_HPP
#define QCONV_SIMPLEX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qconv {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpOptions {
    double feas_tol = 1e-9;    // phase-1 optimum above this reports infeasible
    double pivot_tol = 1e-11;  // reduced-cost (pricing) threshold
    int max_iterations = 200000;
};

namespace detail {

// Entries this small after an elimination step are cancellation noise and are
// flushed to exact zero; pivot elements must clear kPivotFloor so the noise
// can never be divided through the tableau.
constexpr double kNoiseTol = 1e-11;
constexpr double kPivotFloor = 1e-7;

}  // namespace detail

/// Infeasibility certificate: nonnegative multipliers for the inequality rows
/// and variable bounds, free-signed multipliers for the equality rows. A valid
/// ray combines the rows into 0^T x <= rhs with rhs < 0.
struct FarkasRay {
    std::vector<double> eq;     // one per equality row, free sign
    std::vector<double> ineq;   // one per inequality row, >= 0
    std::vector<double> upper;  // one per variable (x_k <= u_k), >= 0
    std::vector<double> lower;  // one per variable (-x_k <= 0), >= 0
};

/// minimize c.x  s.t.  eq_lhs.x = eq_rhs,  ineq_lhs.x <= ineq_rhs,
///                     0 <= x_k <= upper[k]  (upper may be +infinity)
struct DenseLp {
    int nvars = 0;
    std::vector<double> objective;  // empty => pure feasibility
    std::vector<double> eq_lhs;     // row-major, eq_rhs.size() x nvars
    std::vector<double> eq_rhs;
    std::vector<double> ineq_lhs;   // row-major, ineq_rhs.size() x nvars
    std::vector<double> ineq_rhs;
    std::vector<double> upper;      // size nvars
};

struct SimplexResult {
    LpStatus status = LpStatus::IterationLimit;
    std::vector<double> x;  // primal point when Optimal
    FarkasRay ray;          // certificate when Infeasible
    double phase1_objective = 0;
    int iterations = 0;
};

namespace detail {

/// Standard-form tableau: every constraint becomes an equality row with a
/// slack or artificial basic column; finite upper bounds become rows.
class SimplexTableau {
  public:
    SimplexTableau(const DenseLp& lp, const LpOptions& opt) : lp_(lp), opt_(opt) {
        nx_ = lp.nvars;
        me_ = static_cast<int>(lp.eq_rhs.size());
        mi_ = static_cast<int>(lp.ineq_rhs.size());
        for (int k = 0; k < nx_; ++k)
            if (std::isfinite(lp.upper[static_cast<std::size_t>(k)])) bound_vars_.push_back(k);
        nb_ = static_cast<int>(bound_vars_.size());
        m_ = me_ + mi_ + nb_;

        slack_begin_ = nx_;
        bslack_begin_ = nx_ + mi_;
        art_begin_ = nx_ + mi_ + nb_;

        // Artificial columns: all equality rows, plus inequality rows whose
        // rhs is negative (their slack cannot start basic).
        art_rows_.assign(static_cast<std::size_t>(m_), -1);
        int na = 0;
        for (int i = 0; i < me_; ++i) art_rows_[static_cast<std::size_t>(i)] = na++;
        for (int i = 0; i < mi_; ++i)
            if (lp.ineq_rhs[static_cast<std::size_t>(i)] < 0)
                art_rows_[static_cast<std::size_t>(me_ + i)] = na++;
        na_ = na;
        ncols_ = art_begin_ + na_;
        width_ = ncols_ + 1;  // rhs in the last column

        build();
    }

    SimplexResult solve() {
        SimplexResult res;
        int iters = 0;

        // Phase 1: minimize the sum of artificial variables.
        setup_phase1_objective();
        const LpStatus p1 = run(iters);
        res.iterations = iters;
        if (p1 != LpStatus::Optimal) {
            // Phase 1 is bounded below by zero, so Unbounded signals a
            // numerical breakdown; surface it like an iteration failure.
            res.status = p1 == LpStatus::Unbounded ? LpStatus::IterationLimit : p1;
            return res;
        }
        double p1obj = 0;
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] >= art_begin_)
                p1obj += row(i)[ncols_];
        res.phase1_objective = p1obj;

        if (p1obj > opt_.feas_tol) {
            res.status = LpStatus::Infeasible;
            res.ray = extract_ray();
            return res;
        }
        purge_artificials();

        // Phase 2 over the real objective (skipped for pure feasibility).
        if (!lp_.objective.empty()) {
            setup_phase2_objective();
            const LpStatus p2 = run(iters);
            res.iterations = iters;
            if (p2 != LpStatus::Optimal) {
                res.status = p2;
                return res;
            }
        }

        res.status = LpStatus::Optimal;
        res.x.assign(static_cast<std::size_t>(nx_), 0.0);
        for (int i = 0; i < m_; ++i) {
            const int b = basis_[static_cast<std::size_t>(i)];
            if (b < nx_) res.x[static_cast<std::size_t>(b)] = row(i)[ncols_];
        }
        res.iterations = iters;
        return res;
    }

  private:
    const DenseLp& lp_;
    const LpOptions& opt_;
    int nx_ = 0, me_ = 0, mi_ = 0, nb_ = 0, na_ = 0, m_ = 0, ncols_ = 0, width_ = 0;
    int slack_begin_ = 0, bslack_begin_ = 0, art_begin_ = 0;
    std::vector<int> bound_vars_;
    std::vector<int> art_rows_;    // row -> artificial ordinal or -1
    std::vector<double> t_;        // m_ x width_
    std::vector<double> obj_;      // width_
    std::vector<int> basis_;       // m_
    std::vector<double> row_sign_; // +-1, sign applied to the original row

    double* row(int i) { return &t_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_)]; }
    const double* row(int i) const {
        return &t_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_)];
    }

    void build() {
        t_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(width_), 0.0);
        basis_.assign(static_cast<std::size_t>(m_), -1);
        row_sign_.assign(static_cast<std::size_t>(m_), 1.0);

        for (int i = 0; i < me_; ++i) {
            double* r = row(i);
            const double sign = lp_.eq_rhs[static_cast<std::size_t>(i)] < 0 ? -1.0 : 1.0;
            row_sign_[static_cast<std::size_t>(i)] = sign;
            for (int k = 0; k < nx_; ++k)
                r[k] = sign * lp_.eq_lhs[static_cast<std::size_t>(i) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(k)];
            r[ncols_] = sign * lp_.eq_rhs[static_cast<std::size_t>(i)];
            const int a = art_rows_[static_cast<std::size_t>(i)];
            r[art_begin_ + a] = 1.0;
            basis_[static_cast<std::size_t>(i)] = art_begin_ + a;
        }
        for (int i = 0; i < mi_; ++i) {
            const int ri = me_ + i;
            double* r = row(ri);
            const bool neg = lp_.ineq_rhs[static_cast<std::size_t>(i)] < 0;
            const double sign = neg ? -1.0 : 1.0;
            row_sign_[static_cast<std::size_t>(ri)] = sign;
            for (int k = 0; k < nx_; ++k)
                r[k] = sign * lp_.ineq_lhs[static_cast<std::size_t>(i) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(k)];
            r[ncols_] = sign * lp_.ineq_rhs[static_cast<std::size_t>(i)];
            r[slack_begin_ + i] = sign;  // slack keeps the original orientation
            if (neg) {
                const int a = art_rows_[static_cast<std::size_t>(ri)];
                r[art_begin_ + a] = 1.0;
                basis_[static_cast<std::size_t>(ri)] = art_begin_ + a;
            } else {
                basis_[static_cast<std::size_t>(ri)] = slack_begin_ + i;
            }
        }
        for (int b = 0; b < nb_; ++b) {
            const int ri = me_ + mi_ + b;
            const int k = bound_vars_[static_cast<std::size_t>(b)];
            double* r = row(ri);
            r[k] = 1.0;
            r[bslack_begin_ + b] = 1.0;
            r[ncols_] = lp_.upper[static_cast<std::size_t>(k)];
            basis_[static_cast<std::size_t>(ri)] = bslack_begin_ + b;
        }
    }

    void setup_phase1_objective() {
        obj_.assign(static_cast<std::size_t>(width_), 0.0);
        for (int a = 0; a < na_; ++a) obj_[static_cast<std::size_t>(art_begin_ + a)] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < art_begin_) continue;
            const double* r = row(i);
            for (int w = 0; w < width_; ++w) obj_[static_cast<std::size_t>(w)] -= r[w];
        }
    }

    void setup_phase2_objective() {
        obj_.assign(static_cast<std::size_t>(width_), 0.0);
        for (int k = 0; k < nx_; ++k) obj_[static_cast<std::size_t>(k)] = lp_.objective[static_cast<std::size_t>(k)];
        for (int i = 0; i < m_; ++i) {
            const int b = basis_[static_cast<std::size_t>(i)];
            const double cb = (b < nx_) ? lp_.objective[static_cast<std::size_t>(b)] : 0.0;
            if (cb == 0.0) continue;
            const double* r = row(i);
            for (int w = 0; w < width_; ++w) obj_[static_cast<std::size_t>(w)] -= cb * r[w];
        }
    }

    /// Two-pass ratio test: the first pass finds the tightest ratio among
    /// admissible pivot elements, the second picks the numerically largest
    /// element within a whisker of it (ties on the lowest basic-variable
    /// index). Preferring large pivots keeps borderline elements from
    /// blowing the entering variable up past rows whose entries sit below
    /// the admission floor. `bland` switches the second pass to the classic
    /// lowest-basic-index rule so the anti-cycling argument applies.
    int ratio_test(int pcol, bool bland) const {
        double theta = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i) {
            const double a = row(i)[pcol];
            if (a <= detail::kPivotFloor) continue;
            theta = std::min(theta, row(i)[ncols_] / a);
        }
        if (!std::isfinite(theta)) return -1;

        const double lim = theta + 1e-10 * (1 + std::abs(theta));
        int prow = -1;
        double besta = 0;
        for (int i = 0; i < m_; ++i) {
            const double a = row(i)[pcol];
            if (a <= detail::kPivotFloor) continue;
            if (row(i)[ncols_] / a > lim) continue;
            const bool better =
                bland ? (prow < 0 || basis_[static_cast<std::size_t>(i)] <
                                         basis_[static_cast<std::size_t>(prow)])
                      : (a > besta ||
                         (a == besta && prow >= 0 &&
                          basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(prow)]));
            if (better) {
                besta = a;
                prow = i;
            }
        }
        return prow;
    }

    /// Pricing: Dantzig (most negative reduced cost) while the objective
    /// makes progress, switching permanently to Bland's rule after a stall so
    /// cycling cannot occur. Ties in the ratio test always break on the
    /// lowest basic-variable index. Artificial columns never re-enter.
    /// Columns whose positive entries all sit below the pivot floor are
    /// skipped instead of reported unbounded; a genuinely unbounded column
    /// (phase 2 only) has no positive entry at all.
    LpStatus run(int& iters) {
        const int enter_limit = art_begin_;
        bool bland = false;
        int stall = 0;
        std::vector<char> tried(static_cast<std::size_t>(enter_limit));
        while (true) {
            if (iters >= opt_.max_iterations) return LpStatus::IterationLimit;

            int pcol = -1, prow = -1;
            bool saw_unbounded = false;
            if (bland) {
                for (int j = 0; j < enter_limit; ++j) {
                    if (obj_[static_cast<std::size_t>(j)] >= -opt_.pivot_tol) continue;
                    const int r = ratio_test(j, true);
                    if (r >= 0) {
                        pcol = j;
                        prow = r;
                        break;
                    }
                    bool any_positive = false;
                    for (int i = 0; i < m_ && !any_positive; ++i) any_positive = row(i)[j] > 0;
                    if (!any_positive) saw_unbounded = true;
                }
            } else {
                std::fill(tried.begin(), tried.end(), 0);
                while (true) {
                    int best = -1;
                    double bestrc = -opt_.pivot_tol;
                    for (int j = 0; j < enter_limit; ++j) {
                        if (tried[static_cast<std::size_t>(j)]) continue;
                        const double rc = obj_[static_cast<std::size_t>(j)];
                        if (rc < bestrc) {
                            bestrc = rc;
                            best = j;
                        }
                    }
                    if (best < 0) break;
                    const int r = ratio_test(best, false);
                    if (r >= 0) {
                        pcol = best;
                        prow = r;
                        break;
                    }
                    tried[static_cast<std::size_t>(best)] = 1;
                    bool any_positive = false;
                    for (int i = 0; i < m_ && !any_positive; ++i) any_positive = row(i)[best] > 0;
                    if (!any_positive) saw_unbounded = true;
                }
            }
            if (pcol < 0) return saw_unbounded ? LpStatus::Unbounded : LpStatus::Optimal;

            const double before = obj_[static_cast<std::size_t>(ncols_)];
            pivot(prow, pcol);
            ++iters;
            if (!bland) {
                if (std::abs(obj_[static_cast<std::size_t>(ncols_)] - before) <= 1e-14)
                    ++stall;
                else
                    stall = 0;
                if (stall > 100) bland = true;
            }
        }
    }

    /// Phase 2 must never let a leftover basic artificial grow again, or the
    /// corresponding equality silently relaxes. Artificials still basic after
    /// a successful phase 1 sit at (numerically) zero: pivot them out where a
    /// usable element exists; rows without one are redundant ("0 = 0") and
    /// are hard-zeroed so no later pivot can touch them.
    void purge_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < art_begin_) continue;
            double* r = row(i);
            int j = -1;
            for (int k = 0; k < art_begin_; ++k) {
                if (std::abs(r[k]) > detail::kPivotFloor) {
                    j = k;
                    break;
                }
            }
            if (j >= 0) {
                r[ncols_] = 0.0;
                pivot(i, j);
            } else {
                for (int w = 0; w < width_; ++w) r[w] = 0.0;
                r[basis_[static_cast<std::size_t>(i)]] = 1.0;
            }
        }
    }

    void pivot(int prow, int pcol) {
        double* pr = row(prow);
        const double inv = 1.0 / pr[pcol];
        for (int w = 0; w < width_; ++w) pr[w] *= inv;
        pr[pcol] = 1.0;

        for (int i = 0; i < m_; ++i) {
            if (i == prow) continue;
            double* r = row(i);
            const double f = r[pcol];
            if (f == 0.0) continue;
            for (int w = 0; w < width_; ++w) {
                const double v = r[w] - f * pr[w];
                r[w] = std::abs(v) < detail::kNoiseTol ? 0.0 : v;
            }
            r[pcol] = 0.0;
        }
        {
            const double f = obj_[static_cast<std::size_t>(pcol)];
            if (f != 0.0) {
                for (int w = 0; w < width_; ++w) obj_[static_cast<std::size_t>(w)] -= f * pr[w];
                obj_[static_cast<std::size_t>(pcol)] = 0.0;
            }
        }
        basis_[static_cast<std::size_t>(prow)] = pcol;
    }

    /// Phase-1 duals y (via the reduced costs of the initial basic columns)
    /// negated give the Farkas multipliers; the lower-bound multipliers take
    /// whatever is left so the aggregate row vanishes identically.
    FarkasRay extract_ray() {
        std::vector<double> y(static_cast<std::size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) {
            const int a = art_rows_[static_cast<std::size_t>(i)];
            if (a >= 0) {
                y[static_cast<std::size_t>(i)] = 1.0 - obj_[static_cast<std::size_t>(art_begin_ + a)];
            } else if (i >= me_ && i < me_ + mi_) {
                y[static_cast<std::size_t>(i)] = -obj_[static_cast<std::size_t>(slack_begin_ + (i - me_))];
            } else {
                y[static_cast<std::size_t>(i)] =
                    -obj_[static_cast<std::size_t>(bslack_begin_ + (i - me_ - mi_))];
            }
            y[static_cast<std::size_t>(i)] *= row_sign_[static_cast<std::size_t>(i)];
        }

        FarkasRay ray;
        ray.eq.resize(static_cast<std::size_t>(me_));
        ray.ineq.resize(static_cast<std::size_t>(mi_));
        ray.upper.assign(static_cast<std::size_t>(nx_), 0.0);
        ray.lower.assign(static_cast<std::size_t>(nx_), 0.0);
        for (int i = 0; i < me_; ++i) ray.eq[static_cast<std::size_t>(i)] = -y[static_cast<std::size_t>(i)];
        for (int i = 0; i < mi_; ++i)
            ray.ineq[static_cast<std::size_t>(i)] = std::max(0.0, -y[static_cast<std::size_t>(me_ + i)]);
        for (int b = 0; b < nb_; ++b)
            ray.upper[static_cast<std::size_t>(bound_vars_[static_cast<std::size_t>(b)])] =
                std::max(0.0, -y[static_cast<std::size_t>(me_ + mi_ + b)]);

        // Aggregate coefficient per variable; its nonnegative part is the
        // multiplier of the -x_k <= 0 row.
        for (int k = 0; k < nx_; ++k) {
            double t = ray.upper[static_cast<std::size_t>(k)];
            for (int i = 0; i < me_; ++i)
                t += ray.eq[static_cast<std::size_t>(i)] *
                     lp_.eq_lhs[static_cast<std::size_t>(i) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(k)];
            for (int i = 0; i < mi_; ++i)
                t += ray.ineq[static_cast<std::size_t>(i)] *
                     lp_.ineq_lhs[static_cast<std::size_t>(i) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(k)];
            ray.lower[static_cast<std::size_t>(k)] = std::max(0.0, t);
        }
        return ray;
    }
};

}  // namespace detail

inline SimplexResult solve_dense_lp(const DenseLp& lp, const LpOptions& opt = {}) {
    if (lp.nvars <= 0) throw std::invalid_argument("solve_dense_lp: nvars must be positive");
    if (static_cast<int>(lp.upper.size()) != lp.nvars)
        throw std::invalid_argument("solve_dense_lp: upper bound vector size mismatch");
    if (!lp.objective.empty() && static_cast<int>(lp.objective.size()) != lp.nvars)
        throw std::invalid_argument("solve_dense_lp: objective size mismatch");
    for (double u : lp.upper)
        if (std::isfinite(u) && u < 0)
            throw std::invalid_argument("solve_dense_lp: negative upper bound");
    detail::SimplexTableau tab(lp, opt);
    return tab.solve();
}

}  // namespace qconv

#endif  // QCONV_SIMPLEX_HPP
