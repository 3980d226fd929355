#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "resop/lp.hpp"

using namespace resop;

namespace {

double dual_objective(const LpProblem& p, const LpSolution& sol) {
    // b'y plus the bound contributions of the nonbasic variables.
    const Vector reduced = p.objective - p.constraints.transpose() * sol.row_duals;
    double value = p.rhs.dot(sol.row_duals);
    for (Index j = 0; j < p.num_cols(); ++j) {
        const double d = reduced[j];
        if (std::abs(d) < 1e-9) continue;  // basic or degenerate
        const double to_lower = std::abs(sol.primal[j] - p.lower[j]);
        const double to_upper =
            p.upper[j] == kInfinity ? kInfinity : std::abs(sol.primal[j] - p.upper[j]);
        value += d * (to_lower <= to_upper ? p.lower[j] : p.upper[j]);
    }
    return value;
}

}  // namespace

TEST_CASE("bound-only minimum sits at the lower bound") {
    LpBuilder builder;
    builder.add_variable("x", 3.0, kInfinity, 1.0);
    const LpProblem p = std::move(builder).finalize();
    const LpSolution sol = solve(p);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.primal[0] == doctest::Approx(3.0));
    CHECK(sol.objective_value == doctest::Approx(3.0));
}

TEST_CASE("box LP attains the budget row") {
    LpBuilder builder;
    builder.add_variable("x", 0.0, 1.0, -1.0);
    builder.add_variable("y", 0.0, 1.0, -1.0);
    builder.add_row(RowSense::LessEqual, 1.0, {{0, 1.0}, {1, 1.0}});
    const LpSolution sol = solve(std::move(builder).finalize());
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.objective_value == doctest::Approx(-1.0));
}

TEST_CASE("empty problem is optimal with objective zero") {
    LpBuilder builder;
    const LpProblem p = std::move(builder).finalize();
    CHECK(p.num_rows() == 0);
    CHECK(p.num_cols() == 0);
    const LpSolution sol = solve(p);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.objective_value == 0.0);
}

TEST_CASE("rows naming unknown variables are rejected") {
    LpBuilder builder;
    builder.add_variable("flow", 0.0, 1.0, 0.0);
    CHECK_THROWS_WITH_AS(builder.add_row_named(RowSense::Equal, 0.0, {{"florw", 1.0}}),
                         doctest::Contains("florw"), std::invalid_argument);
    CHECK_THROWS_AS(builder.add_row(RowSense::Equal, 0.0, std::vector<LpBuilder::Term>{{7, 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("non-finite input is rejected") {
    LpBuilder builder;
    builder.add_variable("x", 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(builder.add_row(RowSense::Equal, 0.0,
                                    std::vector<LpBuilder::Term>{{0, std::nan("")}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(builder.add_row(RowSense::Equal, kInfinity,
                                    std::vector<LpBuilder::Term>{{0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(builder.add_variable("y", 0.0, 1.0, kInfinity), std::invalid_argument);
}

TEST_CASE("infeasible and unbounded basics") {
    SUBCASE("contradictory rows") {
        LpBuilder builder;
        builder.add_variable("x", 0.0, 10.0, 0.0);
        builder.add_row(RowSense::Equal, 2.0, {{0, 1.0}});
        builder.add_row(RowSense::Equal, 5.0, {{0, 1.0}});
        CHECK(solve(std::move(builder).finalize()).status == LpStatus::Infeasible);
    }
    SUBCASE("free fall") {
        LpBuilder builder;
        builder.add_variable("x", 0.0, kInfinity, -1.0);
        CHECK(solve(std::move(builder).finalize()).status == LpStatus::Unbounded);
    }
    SUBCASE("ray through a row") {
        LpBuilder builder;
        builder.add_variable("x", 0.0, kInfinity, -1.0);
        builder.add_variable("y", 0.0, kInfinity, 0.0);
        builder.add_row(RowSense::Equal, 1.0, {{0, 1.0}, {1, -1.0}});
        CHECK(solve(std::move(builder).finalize()).status == LpStatus::Unbounded);
    }
}

TEST_CASE("iteration cap reports IterationLimit") {
    LpBuilder builder;
    for (int j = 0; j < 6; ++j) builder.add_variable("x" + std::to_string(j), 0.0, 10.0, -1.0);
    for (int i = 0; i < 3; ++i) {
        std::vector<LpBuilder::Term> terms;
        for (int j = 0; j < 6; ++j) terms.emplace_back(j, (i + j) % 3 == 0 ? 1.0 : 0.5);
        builder.add_row(RowSense::LessEqual, 5.0, std::move(terms));
    }
    SolverOptions options;
    options.max_iterations = 1;
    CHECK(solve(std::move(builder).finalize(), options).status == LpStatus::IterationLimit);
}

TEST_CASE("random LPs agree with vertex enumeration") {
    std::mt19937_64 rng(42);
    int optimal_seen = 0, infeasible_seen = 0, unbounded_seen = 0;
    for (int round = 0; round < 200; ++round) {
        const LpProblem p = fixtures::random_lp(rng);
        const oracle::LpReference ref = oracle::enumerate_lp(p);
        const LpSolution sol = solve(p);
        INFO("round ", round, ": oracle ", to_string(ref.status), ", kernel ", to_string(sol.status));
        CHECK(sol.status == ref.status);
        if (ref.status == LpStatus::Optimal) {
            ++optimal_seen;
            CHECK(std::abs(sol.objective_value - ref.objective) <=
                  1e-7 * (1.0 + std::abs(ref.objective)));
        }
        if (ref.status == LpStatus::Infeasible) ++infeasible_seen;
        if (ref.status == LpStatus::Unbounded) ++unbounded_seen;
    }
    // The generator must exercise all three outcomes.
    CHECK(optimal_seen > 50);
    CHECK(infeasible_seen > 10);
    CHECK(unbounded_seen > 10);
}

TEST_CASE("feasibility and duality certificates at the optimum") {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int round = 0; round < 120; ++round) {
        const LpProblem p = fixtures::random_lp(rng);
        const LpSolution sol = solve(p);
        if (sol.status != LpStatus::Optimal) continue;
        ++checked;
        // Row feasibility within 1e-8 * (1 + |b|inf), bounds within 1e-9.
        const double row_tol = 1e-8 * (1.0 + (p.num_rows() ? p.rhs.lpNorm<Eigen::Infinity>() : 0.0));
        if (p.num_rows() > 0) {
            const Vector residual = p.constraints * sol.primal - p.rhs;
            CHECK(residual.lpNorm<Eigen::Infinity>() <= row_tol);
        }
        for (Index j = 0; j < p.num_cols(); ++j) {
            CHECK(sol.primal[j] >= p.lower[j] - 1e-9);
            CHECK(sol.primal[j] <= p.upper[j] + 1e-9);
        }
        const double gap = std::abs(sol.objective_value - dual_objective(p, sol));
        CHECK(gap <= 1e-7 * (1.0 + std::abs(sol.objective_value)));
    }
    CHECK(checked > 40);
}

TEST_CASE("identical problems yield identical solutions") {
    std::mt19937_64 rng(11);
    const LpProblem p = fixtures::random_lp(rng);
    const LpSolution a = solve(p);
    const LpSolution b = solve(p);
    CHECK(a.status == b.status);
    CHECK(a.iterations == b.iterations);
    if (a.status == LpStatus::Optimal) {
        REQUIRE(a.primal.size() == b.primal.size());
        for (Index j = 0; j < a.primal.size(); ++j) CHECK(a.primal[j] == b.primal[j]);
    }
}

TEST_CASE("positive objective scaling keeps the argmin activity pattern") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 40; ++round) {
        LpProblem p = fixtures::random_lp(rng);
        const LpSolution base = solve(p);
        if (base.status != LpStatus::Optimal) continue;
        LpProblem scaled = p;
        scaled.objective *= 8.0;
        const LpSolution again = solve(scaled);
        REQUIRE(again.status == LpStatus::Optimal);
        for (Index j = 0; j < p.num_cols(); ++j)
            CHECK(again.primal[j] == doctest::Approx(base.primal[j]).epsilon(1e-9));
    }
}

TEST_CASE("lp text dump lists objective, rows and bounds") {
    LpBuilder builder;
    builder.add_variable("x", 0.0, 2.0, 1.0);
    builder.add_variable("y", 1.0, kInfinity, 0.0);
    builder.add_row(RowSense::LessEqual, 4.0, {{0, 2.0}, {1, 1.0}});
    const LpProblem p = std::move(builder).finalize();
    std::ostringstream out;
    write_lp_text(p, out);
    const std::string text = out.str();
    CHECK(text.find("minimize") != std::string::npos);
    CHECK(text.find("x") != std::string::npos);
    CHECK(text.find("slack[0]") != std::string::npos);
    CHECK(text.find("inf") != std::string::npos);
}
