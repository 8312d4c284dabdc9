#include "doctest.h"

#include "flowdisc/errors.hpp"
#include "flowdisc/lp.hpp"
#include "flowdisc/rng.hpp"

using namespace flowdisc;

TEST_CASE("textbook LPs") {
  LinearProgram lp;
  int x = lp.add_variable("x");
  lp.set_objective(x, -1);
  lp.add_constraint({{x, 1}}, Relation::LessEq, 3);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.values[x] == 3);
  CHECK(sol.objective_value == -3);
  CHECK(check_point(lp, sol.values).empty());

  LinearProgram bad;
  int y = bad.add_variable("x");
  bad.add_constraint({{y, 1}}, Relation::LessEq, 1);
  bad.add_constraint({{y, 1}}, Relation::GreaterEq, 2);
  CHECK(solve_lp(bad).status == LpStatus::Infeasible);

  LinearProgram low;
  int z = low.add_variable("x");
  low.set_objective(z, 1);
  auto s3 = solve_lp(low);
  REQUIRE(s3.status == LpStatus::Optimal);
  CHECK(s3.values[z] == 0);

  LinearProgram unb;
  int u = unb.add_variable("x");
  unb.set_objective(u, -1);
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);
}

TEST_CASE("bounds and free variables") {
  LinearProgram lp;
  int a = lp.add_variable("a", std::nullopt, std::nullopt);
  int b = lp.add_variable("b", Rational(1), Rational(5, 2));
  int c = lp.add_variable("c", std::nullopt, Rational(-1));
  // min a + b - c  s.t. a >= -7/3, a + c = -4, b >= 2
  lp.set_objective(a, 1);
  lp.set_objective(b, 1);
  lp.set_objective(c, -1);
  lp.add_constraint({{a, 1}}, Relation::GreaterEq, Rational(-7, 3));
  lp.add_constraint({{a, 1}, {c, 1}}, Relation::Equal, -4);
  lp.add_constraint({{b, 1}}, Relation::GreaterEq, 2);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  // a - c = a - (-4 - a) = 2a + 4, minimized at a = -7/3 (c = -5/3 <= -1).
  CHECK(sol.values[a] == Rational(-7, 3));
  CHECK(sol.values[b] == 2);
  CHECK(sol.values[c] == Rational(-5, 3));
  CHECK(sol.objective_value == Rational(-14, 3) + 4 + 2);
  CHECK(check_point(lp, sol.values).empty());
}

TEST_CASE("check_point reports slacks") {
  LinearProgram lp;
  int x = lp.add_variable("x");
  lp.add_constraint({{x, 1}}, Relation::LessEq, 3, "cap");
  lp.add_constraint({{x, 2}}, Relation::Equal, 10, "eq");
  auto v = check_point(lp, std::vector<Rational>{Rational(5)});
  REQUIRE(v.size() == 1);
  CHECK(v[0].description == "cap");
  CHECK(v[0].slack == -2);
  CHECK(check_point(lp, std::map<std::string, Rational>{{"x", Rational(3)}}).size() == 1);
  CHECK_THROWS_AS(check_point(lp, std::map<std::string, Rational>{}), ValidationError);
  CHECK_THROWS_AS(check_point(lp, std::vector<Rational>{}), ValidationError);
}

TEST_CASE("undeclared variables are rejected") {
  LinearProgram lp;
  lp.add_variable("x");
  CHECK_THROWS_AS(lp.add_constraint(std::map<std::string, Rational>{{"y", Rational(1)}}, Relation::LessEq, 1),
                  ValidationError);
  CHECK_THROWS_AS(lp.add_constraint({{3, Rational(1)}}, Relation::LessEq, 1), ValidationError);
  CHECK_THROWS_AS(lp.set_objective("y", 1), ValidationError);
  CHECK_THROWS_AS(lp.add_variable("x"), ValidationError);
}

TEST_CASE("redundant equalities and degenerate rows") {
  LinearProgram lp;
  int x = lp.add_variable("x");
  int y = lp.add_variable("y");
  lp.set_objective(x, 1);
  lp.set_objective(y, 2);
  lp.add_constraint({{x, 1}, {y, 1}}, Relation::Equal, 1);
  lp.add_constraint({{x, 2}, {y, 2}}, Relation::Equal, 2);
  lp.add_constraint({{x, 1}}, Relation::LessEq, Rational(1, 3));
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.values[x] == Rational(1, 3));
  CHECK(sol.values[y] == Rational(2, 3));
  CHECK(sol.objective_value == Rational(5, 3));
}

TEST_CASE("dump lists every row") {
  LinearProgram lp;
  int x = lp.add_variable("x");
  int y = lp.add_variable("y", std::nullopt, Rational(4));
  lp.set_objective(x, -1);
  lp.add_constraint({{x, 1}, {y, Rational(-1, 2)}}, Relation::LessEq, 3, "row");
  const auto text = lp.dump();
  CHECK(text.find("minimize -x") != std::string::npos);
  CHECK(text.find("row: x - 1/2 y <= 3") != std::string::npos);
  CHECK(text.find("-inf <= y <= 4") != std::string::npos);
}

// Random LPs min c.x, A x >= b, x >= 0 with c >= 0 (so bounded). The dual
// max b.y, A^T y <= c, y >= 0 is built here and solved as a minimization.
TEST_CASE("strong duality on random small LPs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const int rows = static_cast<int>(rng.uniform_int(1, 4));
    const int cols = static_cast<int>(rng.uniform_int(1, 5));
    std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(cols));
    std::vector<Rational> b(rows), c(cols);
    for (auto& row : A) {
      for (auto& a : row) {
        a = Rational(rng.uniform_int(-3, 5), rng.uniform_int(1, 3));
        a.canonicalize();
      }
    }
    for (auto& v : b) v = Rational(rng.uniform_int(-2, 6));
    for (auto& v : c) {
      v = Rational(rng.uniform_int(0, 5), rng.uniform_int(1, 2));
      v.canonicalize();
    }

    LinearProgram primal;
    for (int k = 0; k < cols; ++k) primal.set_objective(primal.add_variable("x" + std::to_string(k)), c[k]);
    for (int r = 0; r < rows; ++r) {
      LinearTerms t;
      for (int k = 0; k < cols; ++k) t.emplace_back(k, A[r][k]);
      primal.add_constraint(t, Relation::GreaterEq, b[r]);
    }
    LinearProgram dual;
    for (int r = 0; r < rows; ++r) dual.set_objective(dual.add_variable("y" + std::to_string(r)), -b[r]);
    for (int k = 0; k < cols; ++k) {
      LinearTerms t;
      for (int r = 0; r < rows; ++r) t.emplace_back(r, A[r][k]);
      dual.add_constraint(t, Relation::LessEq, c[k]);
    }
    auto ps = solve_lp(primal);
    auto ds = solve_lp(dual);
    // The dual is feasible at y = 0, so it is bounded iff the primal is feasible.
    if (ps.status == LpStatus::Optimal) {
      REQUIRE(ds.status == LpStatus::Optimal);
      CHECK(ps.objective_value == -ds.objective_value);
      CHECK(check_point(primal, ps.values).empty());
      CHECK(check_point(dual, ds.values).empty());
    } else {
      CHECK(ps.status == LpStatus::Infeasible);
      CHECK(ds.status == LpStatus::Unbounded);
    }
    // Determinism.
    auto again = solve_lp(primal);
    CHECK(again.status == ps.status);
    CHECK(again.values == ps.values);
  }
}
