#include <catch2/catch_amalgamated.hpp>

#include "qconv/simplex.hpp"

using namespace qconv;

namespace {

// Recombine a Farkas ray against the original problem (test-side check).
bool ray_valid(const DenseLp& lp, const FarkasRay& ray) {
    const int n = lp.nvars;
    for (double u : ray.ineq)
        if (u < -1e-12) return false;
    for (int k = 0; k < n; ++k) {
        double t = ray.upper[static_cast<std::size_t>(k)] - ray.lower[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < lp.eq_rhs.size(); ++i)
            t += ray.eq[i] * lp.eq_lhs[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < lp.ineq_rhs.size(); ++i)
            t += ray.ineq[i] * lp.ineq_lhs[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)];
        if (std::abs(t) > 1e-9) return false;
    }
    double rhs = 0;
    for (std::size_t i = 0; i < lp.eq_rhs.size(); ++i) rhs += ray.eq[i] * lp.eq_rhs[i];
    for (std::size_t i = 0; i < lp.ineq_rhs.size(); ++i) rhs += ray.ineq[i] * lp.ineq_rhs[i];
    for (int k = 0; k < n; ++k)
        if (std::isfinite(lp.upper[static_cast<std::size_t>(k)]))
            rhs += ray.upper[static_cast<std::size_t>(k)] * lp.upper[static_cast<std::size_t>(k)];
    return rhs <= -1e-9;
}

}  // namespace

TEST_CASE("feasible program returns a valid point") {
    DenseLp lp;
    lp.nvars = 2;
    lp.upper = {1, 1};
    lp.eq_lhs = {1, 1};
    lp.eq_rhs = {1.0};
    lp.ineq_lhs = {1, 0};
    lp.ineq_rhs = {0.7};
    const SimplexResult res = solve_dense_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    REQUIRE(res.x[0] + res.x[1] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(res.x[0] <= 0.7 + 1e-12);
    REQUIRE(res.x[0] >= -1e-12);
    REQUIRE(res.x[1] >= -1e-12);
}

TEST_CASE("optimization picks the minimum") {
    DenseLp lp;
    lp.nvars = 2;
    lp.upper = {1, 1};
    lp.objective = {-1, 0};  // maximize x1
    lp.eq_lhs = {1, 1};
    lp.eq_rhs = {1.0};
    lp.ineq_lhs = {1, 0};
    lp.ineq_rhs = {0.7};
    const SimplexResult res = solve_dense_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    REQUIRE(res.x[0] == Catch::Approx(0.7).margin(1e-10));
    REQUIRE(res.x[1] == Catch::Approx(0.3).margin(1e-10));
}

TEST_CASE("infeasible equality against bounds yields a checkable ray") {
    DenseLp lp;
    lp.nvars = 2;
    lp.upper = {1, 1};
    lp.eq_lhs = {1, 1};
    lp.eq_rhs = {3.0};
    const SimplexResult res = solve_dense_lp(lp);
    REQUIRE(res.status == LpStatus::Infeasible);
    REQUIRE(res.phase1_objective == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(ray_valid(lp, res.ray));
}

TEST_CASE("infeasible inequality system yields a checkable ray") {
    DenseLp lp;
    lp.nvars = 3;
    lp.upper = {1, 1, 1};
    lp.eq_lhs = {1, 1, 1, 1, 0, 0};
    lp.eq_rhs = {1.0, 0.9};
    lp.ineq_lhs = {1, 0, 0};
    lp.ineq_rhs = {0.5};
    const SimplexResult res = solve_dense_lp(lp);
    REQUIRE(res.status == LpStatus::Infeasible);
    REQUIRE(ray_valid(lp, res.ray));
}

TEST_CASE("negative inequality rhs is handled") {
    DenseLp lp;
    lp.nvars = 2;
    lp.upper = {1, 1};
    lp.eq_lhs = {1, 1};
    lp.eq_rhs = {1.5};
    lp.ineq_lhs = {1, -1};
    lp.ineq_rhs = {-1.2};  // x2 >= x1 + 1.2, forces x2 > 1
    const SimplexResult res = solve_dense_lp(lp);
    REQUIRE(res.status == LpStatus::Infeasible);
    REQUIRE(ray_valid(lp, res.ray));
}

TEST_CASE("iteration cap reports instead of guessing") {
    DenseLp lp;
    lp.nvars = 2;
    lp.upper = {1, 1};
    lp.eq_lhs = {1, 1};
    lp.eq_rhs = {1.0};
    LpOptions opt;
    opt.max_iterations = 0;
    const SimplexResult res = solve_dense_lp(lp, opt);
    REQUIRE(res.status == LpStatus::IterationLimit);
}

TEST_CASE("input validation") {
    DenseLp lp;
    lp.nvars = 0;
    REQUIRE_THROWS_AS(solve_dense_lp(lp), std::invalid_argument);
    lp.nvars = 2;
    lp.upper = {1};
    REQUIRE_THROWS_AS(solve_dense_lp(lp), std::invalid_argument);
    lp.upper = {1, -2};
    REQUIRE_THROWS_AS(solve_dense_lp(lp), std::invalid_argument);
}
