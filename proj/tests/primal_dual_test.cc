#include <cmath>
#include <vector>

#include "doctest.h"
#include "ocsmatch/primal_dual.h"
#include "ocsmatch/rng.h"
#include "ocsmatch/workbench.h"

using namespace ocsmatch;

namespace {

Instance random_weighted(std::uint64_t seed) {
  Rng rng(seed);
  const int n = 1 + static_cast<int>(rng.below(12));
  const int m = 1 + static_cast<int>(rng.below(12));
  return random_bipartite(n, m, 10.0, 0.2 + 0.8 * rng.uniform(), seed);
}

}  // namespace

TEST_CASE("delta_r on a fresh vertex") {
  const GainTable t = GainTable::table_1a();
  const OfflineDualState fresh;
  CHECK(delta_r(fresh, 1.0, t) == doctest::Approx(0.25251744).epsilon(1e-12));
  CHECK(delta_r(fresh, 0.0, t) == 0.0);
  CHECK(delta_d(fresh, 1.0, t) == doctest::Approx(0.37877616).epsilon(1e-12));
}

TEST_CASE("delta_r after one randomized round at weight 1") {
  const GainTable t = GainTable::table_1a();
  EdgeWeightedEngine engine(2, t);
  IndependentSelector sel(1);
  const std::vector<double> w = {1.0, 1.0};
  engine.arrive_dense(w, sel);
  const OfflineDualState& s = engine.offline_state(0);
  CHECK(s.k_at(0.5) == ExtendedCount(1));
  CHECK(s.k_at(1.5) == ExtendedCount(0));
  CHECK(delta_r(s, 1.0, t) == doctest::Approx(0.12877617).epsilon(1e-12));
  // Offered below its level the vertex pays for the part above.
  CHECK(delta_r(s, 0.5, t) < 0.5 * t.b[1]);
  CHECK(delta_d(s, 0.5, t) == doctest::Approx(t.kappa * delta_r(s, 0.5, t)));
}

TEST_CASE("two fresh neighbors at weight 1 make a randomized round") {
  EdgeWeightedEngine engine(2, GainTable::table_1a());
  IndependentSelector sel(1);
  const std::vector<double> w = {1.0, 1.0};
  const RoundOutcome o = engine.arrive_dense(w, sel);
  CHECK(o.type == RoundType::kRandomized);
  CHECK(o.i1 == 0);
  CHECK(o.i2 == 1);
  CHECK(o.beta == doctest::Approx(0.50503488).epsilon(1e-12));
  CHECK((o.selected == 0 || o.selected == 1));
  CHECK(engine.algorithm_value() == 1.0);
  CHECK(engine.check_invariants().ok());
}

TEST_CASE("ybar after two consecutive randomized rounds") {
  const GainTable t = GainTable::table_1a();
  EdgeWeightedEngine engine(3, t);
  IndependentSelector sel(4);
  const std::vector<Edge> first = {{0, 1.0}, {1, 1.0}};
  const std::vector<Edge> second = {{0, 1.0}, {2, 1.0}};
  CHECK(engine.arrive(first, sel).type == RoundType::kRandomized);
  CHECK(engine.arrive(second, sel).type == RoundType::kRandomized);
  CHECK(engine.offline_state(0).ybar_at(1.0) ==
        doctest::Approx(49.0 / 64.0).epsilon(1e-15));
  CHECK(engine.offline_state(2).ybar_at(1.0) == 0.5);
  CHECK(engine.check_invariants().ok());
}

TEST_CASE("zero weights and small offline sides") {
  IndependentSelector sel(1);
  {
    EdgeWeightedEngine engine(3, GainTable::table_1b());
    const std::vector<double> zero = {0.0, 0.0, 0.0};
    const RoundOutcome o = engine.arrive_dense(zero, sel);
    CHECK(o.type == RoundType::kRandomized);
    CHECK(o.beta == 0.0);
    CHECK(engine.algorithm_value() == 0.0);
  }
  {
    EdgeWeightedEngine engine(1, GainTable::table_1b());
    const std::vector<double> zero = {0.0};
    const RoundOutcome o = engine.arrive_dense(zero, sel);
    CHECK(o.type == RoundType::kDeterministic);
    CHECK(o.beta == 0.0);
  }
  {
    EdgeWeightedEngine engine(1, GainTable::table_1b());
    const std::vector<double> w = {3.5};
    const RoundOutcome o = engine.arrive_dense(w, sel);
    CHECK(o.type == RoundType::kDeterministic);
    CHECK(engine.algorithm_value() == 3.5);
    CHECK(engine.offline_state(0).k_at(3.5).is_infinite());
    CHECK(engine.offline_state(0).ybar_at(1.0) == 1.0);
    // A later offer to a fully matched level is worth nothing; the tie at
    // zero still resolves to a deterministic round.
    CHECK(engine.arrive_dense(w, sel).beta == 0.0);
    CHECK(engine.algorithm_value() == 3.5);
  }
  {
    EdgeWeightedEngine engine(0, GainTable::table_1b());
    CHECK(engine.arrive_dense({}, sel).type == RoundType::kUnmatched);
    CHECK(engine.algorithm_value() == 0.0);
  }
}

TEST_CASE("arrival input validation") {
  EdgeWeightedEngine engine(2, GainTable::table_1a());
  IndependentSelector sel(1);
  const std::vector<Edge> bad_id = {{5, 1.0}};
  CHECK_THROWS_AS(engine.arrive(bad_id, sel), std::invalid_argument);
  const std::vector<double> negative = {-1.0, 1.0};
  CHECK_THROWS_AS(engine.arrive_dense(negative, sel), std::invalid_argument);
  const std::vector<double> short_row = {1.0};
  CHECK_THROWS_AS(engine.arrive_dense(short_row, sel), std::invalid_argument);
  CHECK(engine.n_arrived() == 0);
}

TEST_CASE("empty engine passes all checks") {
  EdgeWeightedEngine engine(4, GainTable::table_1b());
  CHECK(engine.check_invariants().ok());
  CHECK(engine.algorithm_value() == 0.0);
  CHECK(engine.surrogate_primal() == 0.0);
}

TEST_CASE("invariants hold after every arrival on random instances") {
  for (const GainTable& table : {GainTable::table_1a(), GainTable::table_1b()}) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const Instance inst = random_weighted(seed);
      auto sel = new_selector(SelectorKind::improved_optimal(), seed);
      EdgeWeightedEngine engine(inst.n_offline, table);
      for (const auto& arrival : inst.arrivals) {
        engine.arrive(arrival, *sel);
        const InvariantReport r = engine.check_invariants();
        CAPTURE(seed);
        CAPTURE(r.describe());
        REQUIRE(r.ok());
      }
      // Breakpoints come from observed weights only.
      for (int i = 0; i < inst.n_offline; ++i) {
        for (double bp : engine.offline_state(i).levels.breakpoints()) {
          bool seen = false;
          for (const auto& arrival : inst.arrivals) {
            for (const Edge& e : arrival) seen = seen || (e.offline == i && e.weight == bp);
          }
          CHECK(seen);
        }
      }
    }
  }
}

TEST_CASE("zeroing alpha after a randomized round is caught") {
  EdgeWeightedEngine engine(2, GainTable::table_1a());
  IndependentSelector sel(1);
  const std::vector<double> w = {2.0, 1.0};
  REQUIRE(engine.arrive_dense(w, sel).type == RoundType::kRandomized);
  for (auto& piece : engine.mutable_offline_state_for_testing(0).levels.mutable_pieces()) {
    piece.value.alpha = 0.0;
  }
  const InvariantReport r = engine.check_invariants();
  REQUIRE_FALSE(r.ok());
  bool named = false;
  for (const auto& v : r.violations) {
    if (v.check == "alpha-invariant") {
      named = true;
      CHECK(v.offline == 0);
      CHECK(v.slack < 0.0);
    }
  }
  CHECK(named);
}

TEST_CASE("raising ybar above its bound is caught") {
  EdgeWeightedEngine engine(2, GainTable::table_1a());
  IndependentSelector sel(1);
  const std::vector<double> w = {1.0, 1.0};
  engine.arrive_dense(w, sel);
  engine.mutable_offline_state_for_testing(1).levels.mutable_pieces()[0].value.ybar = 0.9;
  const InvariantReport r = engine.check_invariants();
  bool ybar = false;
  bool duality = false;
  for (const auto& v : r.violations) {
    ybar = ybar || v.check == "ybar-lower-bound";
    duality = duality || v.check == "reverse-weak-duality";
  }
  CHECK(ybar);
  CHECK_FALSE(duality);  // raising ybar only helps duality
}

TEST_CASE("round structure does not depend on the selector") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_weighted(seed);
    auto a = new_selector(SelectorKind::improved_optimal(), 1);
    auto b = new_selector(SelectorKind::warmup(), 99);
    const EdgeWeightedEngine ea = run_edge_weighted(inst, GainTable::table_1b(), *a);
    const EdgeWeightedEngine eb = run_edge_weighted(inst, GainTable::table_1b(), *b);
    REQUIRE(ea.transcript().size() == eb.transcript().size());
    for (std::size_t r = 0; r < ea.transcript().size(); ++r) {
      CHECK(ea.transcript()[r].outcome.same_structure(eb.transcript()[r].outcome));
      CHECK(ea.transcript()[r].pbar == eb.transcript()[r].pbar);
    }
  }
}

TEST_CASE("replaying a transcript reproduces a full run") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_weighted(seed);
    auto probe = new_selector(SelectorKind::improved_optimal(), 5);
    const EdgeWeightedEngine base = run_edge_weighted(inst, GainTable::table_1b(), *probe);
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto full = new_selector(SelectorKind::improved_optimal(), s);
      auto replay = new_selector(SelectorKind::improved_optimal(), s);
      const double v = run_edge_weighted(inst, GainTable::table_1b(), *full).algorithm_value();
      CHECK(replay_value(base.transcript(), inst.n_offline, *replay) == v);
    }
  }
}

TEST_CASE("surrogate primal is a lower bound on the mean value") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(seed);
    const Instance inst = random_bipartite(2 + rng.below(9), 2 + rng.below(9),
                                           10.0, 0.7, 100 + seed);
    auto probe = new_selector(SelectorKind::improved_optimal(), 0);
    const EdgeWeightedEngine base = run_edge_weighted(inst, GainTable::table_1b(), *probe);
    const int trials = 10000;
    double sum = 0.0, sq = 0.0;
    auto sel = new_selector(SelectorKind::improved_optimal(), 0);
    for (int t = 0; t < trials; ++t) {
      sel->reset(trial_seed(seed, t));
      const double v = replay_value(base.transcript(), inst.n_offline, *sel);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / trials;
    const double sd = std::sqrt(std::max(0.0, sq / trials - mean * mean));
    CAPTURE(mean - base.surrogate_primal());
    CAPTURE(sd);
    CHECK(mean >= base.surrogate_primal() - 4 * sd / std::sqrt(trials) - 1e-9);
  }
}

TEST_CASE("transcript CSV") {
  EdgeWeightedEngine engine(2, GainTable::table_1a());
  IndependentSelector sel(1);
  const std::vector<double> w = {1.0, 1.0};
  engine.arrive_dense(w, sel);
  const std::string csv = transcript_csv(engine.transcript());
  CHECK(csv.rfind("round,type,i1,i2,selected,beta,pbar,dual\n0,randomized,0,1,", 0) == 0);
}
