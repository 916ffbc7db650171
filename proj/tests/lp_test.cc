#include <chrono>
#include <cmath>

#include "doctest.h"
#include "ocsmatch/lp.h"

using namespace ocsmatch;

TEST_CASE("tiny programs") {
  LpModel m;
  const int x = m.add_var("x", 1.0);
  m.add_constraint("cap", Relation::kLessEqual, 3.0).row[x] = 1.0;
  LpSolution s = solve(m);
  CHECK(s.status == LpSolution::Status::kOptimal);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.value(m, "x") == doctest::Approx(3.0));
  CHECK_THROWS_AS(s.value(m, "y"), std::out_of_range);

  m.add_constraint("floor", Relation::kGreaterEqual, 4.0).row[x] = 1.0;
  CHECK(solve(m).status == LpSolution::Status::kInfeasible);

  LpModel open;
  const int y = open.add_var("y", 1.0);
  open.add_constraint("lo", Relation::kGreaterEqual, 1.0).row[y] = 1.0;
  CHECK(solve(open).status == LpSolution::Status::kUnbounded);
}

TEST_CASE("two-variable program with a negative right-hand side") {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, -x <= -1
  LpModel m;
  const int x = m.add_var("x", 3.0);
  const int y = m.add_var("y", 2.0);
  auto& a = m.add_constraint("a", Relation::kLessEqual, 4.0);
  a.row[x] = 1.0;
  a.row[y] = 1.0;
  auto& b = m.add_constraint("b", Relation::kLessEqual, 6.0);
  b.row[x] = 1.0;
  b.row[y] = 3.0;
  m.add_constraint("c", Relation::kLessEqual, -1.0).row[x] = -1.0;
  const LpSolution s = solve(m);
  REQUIRE(s.status == LpSolution::Status::kOptimal);
  CHECK(s.objective == doctest::Approx(12.0));
  CHECK(check_point(m, s.values, 1e-9).ok());
}

TEST_CASE("model validation") {
  LpModel m;
  m.add_var("x", 1.0);
  m.add_constraint("bad", Relation::kLessEqual, NAN).row[0] = 1.0;
  CHECK_THROWS_AS(solve(m), std::invalid_argument);
}

TEST_CASE("edge-weighted LP shape and right-hand sides") {
  const LpModel m = build_edge_weighted_lp(1.0 / 16.0, 1.5, 8);
  CHECK(m.n_vars() == 19);
  CHECK(m.constraints.size() == 38);
  auto rhs = [&](const std::string& name) {
    for (const auto& c : m.constraints) {
      if (c.name == name) return c.rhs;
    }
    FAIL("missing constraint " << name);
    return 0.0;
  };
  CHECK(rhs("split-det[0]") == 1.0);
  CHECK(rhs("split-rand[1]") == doctest::Approx(0.265625).epsilon(1e-15));
  CHECK(rhs("split-rand[0]") == 0.5);
  const LpModel g = build_edge_weighted_lp(0.109927, 1.5, 8);
  for (const auto& c : g.constraints) {
    if (c.name == "prepaid") CHECK(c.rhs == doctest::Approx(0.0549635));
  }
  CHECK_THROWS_AS(build_edge_weighted_lp(1.2, 1.5, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_edge_weighted_lp(0.1, 2.5, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_edge_weighted_lp(0.1, 1.5, 0), std::invalid_argument);
}

TEST_CASE("unweighted LP right-hand sides") {
  const RecurrenceTable g = RecurrenceTable::improved(optimal_p().p);
  const LpModel m = build_unweighted_lp(g, 8);
  CHECK(m.constraints[0].name == "split[0]");
  CHECK(m.constraints[0].rhs == 0.5);
  CHECK(m.constraints[2].rhs == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(2 * m.constraints[2].rhs ==
        doctest::Approx(0.5 * 0.89007253 - 0.25 * 0.78014506).epsilon(1e-7));
  CHECK_THROWS_AS(build_unweighted_lp(g, kRecurrenceCap), std::invalid_argument);
}

TEST_CASE("published competitive ratios are reproduced") {
  const auto start = std::chrono::steady_clock::now();
  const LpSolution a = solve(build_edge_weighted_lp(1.0 / 16.0, 1.5, 8));
  CHECK(std::abs(a.objective - 0.50503484) <= 1e-6);
  const LpSolution b = solve(build_edge_weighted_lp(optimal_p().gamma, 1.5, 8));
  CHECK(std::abs(b.objective - 0.508672) <= 1e-5);
  const LpSolution u =
      solve(build_unweighted_lp(RecurrenceTable::improved(optimal_p().p), 8));
  CHECK(std::abs(u.objective - 0.508986) <= 1e-5);
  CHECK(u.objective >= 0.508);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(1));
}

TEST_CASE("tables derived from LP solutions are valid and feasible") {
  const double gamma = optimal_p().gamma;
  const LpSolution s = solve(build_edge_weighted_lp(gamma, 1.5, 8));
  const GainTable t = gain_table_from_solution(s, gamma, 1.5, 8);
  CHECK(t.k_max() == 8);
  CHECK(verify_table(t, 1e-8).ok());
  const RecurrenceTable g = RecurrenceTable::improved(optimal_p().p);
  const UnweightedDualTable u =
      unweighted_table_from_solution(solve(build_unweighted_lp(g, 8)), g, 8);
  CHECK(verify_table(u, 1e-8).ok());
}

TEST_CASE("published tables satisfy their programs") {
  CHECK(verify_table(GainTable::table_1a(), 1e-6).ok());
  CHECK(verify_table(GainTable::table_1b(), 1e-6).ok());
  CHECK(verify_table(UnweightedDualTable::table_3(), 1e-6).ok());
}

TEST_CASE("perturbing any table entry is reported") {
  {
    GainTable t = GainTable::table_1a();
    t.b[0] += 0.1;
    const ViolationReport r = verify_table(t, 1e-6);
    CHECK_FALSE(r.ok());
    CHECK(r.worst == "split-rand[0]");
    CHECK(r.max_violation == doctest::Approx(0.1).epsilon(1e-6));
  }
  for (const GainTable& base : {GainTable::table_1a(), GainTable::table_1b()}) {
    for (int k = 0; k <= base.k_max(); ++k) {
      GainTable ta = base;
      ta.a[k] += 0.1;
      CHECK_FALSE(verify_table(ta, 1e-6).ok());
      GainTable tb = base;
      tb.b[k] += 0.1;
      CHECK_FALSE(verify_table(tb, 1e-6).ok());
    }
  }
  const UnweightedDualTable u = UnweightedDualTable::table_3();
  for (int k = 0; k <= u.k_max(); ++k) {
    UnweightedDualTable ua = u;
    ua.dalpha[k] += 0.1;
    CHECK_FALSE(verify_table(ua, 1e-6).ok());
    UnweightedDualTable ub = u;
    ub.dbeta[k] += 0.1;
    CHECK_FALSE(verify_table(ub, 1e-6).ok());
  }
}

TEST_CASE("kappa sweep") {
  std::vector<double> kappas;
  for (int l = 0; l <= 16; ++l) kappas.push_back(1.0 + l / 16.0);
  const auto sweep = kappa_sweep(1.0 / 16.0, 8, kappas);
  REQUIRE(sweep.size() == 17);
  CHECK(std::abs(sweep[0].Gamma - 0.5) <= 1e-6);
  CHECK(std::abs(sweep[16].Gamma - 0.5) <= 1e-6);
  CHECK(std::abs(sweep[15].Gamma - 0.5026) <= 5e-4);
  CHECK(sweep[8].Gamma > 0.505);
  for (int l = 1; l <= 14; ++l) CHECK(sweep[l].Gamma > 0.505);
}

TEST_CASE("more negative correlation never hurts") {
  double previous = 0.0;
  for (int i = 1; i <= 6; ++i) {
    const double gamma = 0.02 * i;
    const double Gamma = solve(build_edge_weighted_lp(gamma, 1.5, 8)).objective;
    CAPTURE(gamma);
    CHECK(Gamma >= previous - 1e-12);
    previous = Gamma;
  }
}

TEST_CASE("k_max = 8 is saturated") {
  const double g8 = solve(build_edge_weighted_lp(optimal_p().gamma, 1.5, 8)).objective;
  const double g12 = solve(build_edge_weighted_lp(optimal_p().gamma, 1.5, 12)).objective;
  CHECK(g8 - g12 <= 1e-4);
}

TEST_CASE("text listings") {
  const LpModel m = build_edge_weighted_lp(1.0 / 16.0, 1.5, 2);
  const std::string text = lp_text(m);
  CHECK(text.find("maximize\n  obj: Gamma\n") != std::string::npos);
  CHECK(text.find("  split-rand[0]: a[0] + b[0] <= 0.5\n") != std::string::npos);
  CHECK(text.find("  feas-chosen[1]: -Gamma + a[0] + a[1] + 1.5 b[1] >= 0\n") !=
        std::string::npos);
  const std::string sol = solution_text(m, solve(m));
  CHECK(sol.rfind("status optimal\nobjective ", 0) == 0);
}
