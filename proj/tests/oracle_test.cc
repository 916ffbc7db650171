#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ocsmatch/oracle.h"
#include "ocsmatch/recurrences.h"
#include "ocsmatch/workbench.h"

using namespace ocsmatch;

namespace {

Instance dense(int n_offline, const std::vector<std::vector<double>>& w) {
  Instance inst;
  inst.name = "dense";
  inst.n_offline = n_offline;
  for (const auto& row : w) {
    std::vector<Edge> arrival;
    for (int i = 0; i < n_offline; ++i) {
      if (row[i] > 0) arrival.push_back({i, row[i]});
    }
    inst.arrivals.push_back(arrival);
  }
  return inst;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST_CASE("offline optimum on small examples") {
  CHECK(offline_optimum(dense(2, {{1, 2}, {3, 0}})) == doctest::Approx(5.0));
  CHECK(offline_optimum(dense(2, {{2, 1.5}, {2, 0}})) == doctest::Approx(3.5));
  CHECK(offline_optimum(dense(3, {{1, 1, 1}, {1, 1, 0}, {1, 0, 0}, {1, 0, 0}})) == 3.0);
  CHECK(offline_optimum(upper_triangular(9)) == 9.0);
  CHECK(offline_optimum(upper_triangular(50)) == 50.0);
  CHECK(offline_optimum(Instance{}) == 0.0);
  // Free disposal: a heavier later edge replaces a lighter one.
  CHECK(offline_optimum(dense(1, {{1}, {4}})) == 4.0);
}

TEST_CASE("matching oracles agree with exhaustive search") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const int n = 1 + static_cast<int>(rng.below(7));
    const int m = 1 + static_cast<int>(rng.below(7));
    const Instance w = random_bipartite(n, m, 10.0, 0.6, seed);
    const Instance u = random_unweighted(n, m, 0.5, seed);
    CAPTURE(seed);
    CHECK(offline_optimum(w) == doctest::Approx(brute_force_optimum(w)));
    CHECK(offline_optimum(u) == brute_force_optimum(u));
  }
}

TEST_CASE("Hopcroft-Karp and the Hungarian method agree on unit weights") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance u = random_unweighted(20, 25, 0.15, seed);
    std::vector<std::vector<int>> nbrs;
    std::vector<std::vector<double>> w;
    for (int j = 0; j < u.n_online(); ++j) {
      nbrs.emplace_back();
      for (const Edge& e : u.arrivals[j]) nbrs.back().push_back(e.offline);
      w.push_back(u.dense_weights(j));
    }
    CHECK(hopcroft_karp(u.n_offline, nbrs) ==
          doctest::Approx(hungarian_max_weight(w, u.n_offline)));
  }
}

TEST_CASE("independent selection misses a run of k with probability 2^-k") {
  std::vector<Pair> pairs;
  for (int k = 1; k <= 6; ++k) {
    pairs.push_back({0, k});
    const auto idx = all_indices(pairs.size());
    CHECK(exact_never_selected(SelectorKind::independent(), pairs, 0, idx) ==
          doctest::Approx(std::ldexp(1.0, -k)).epsilon(1e-14));
  }
}

TEST_CASE("exact distributions are probability distributions") {
  const std::vector<Pair> pairs = {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {0, 3}, {1, 3}};
  for (const SelectorKind& kind :
       {SelectorKind::independent(), SelectorKind::warmup(),
        SelectorKind::improved_optimal(), SelectorKind::improved(0.3)}) {
    const auto dist = exact_selection_distribution(kind, pairs);
    double total = 0.0;
    for (const auto& o : dist) {
      CHECK(o.probability > 0.0);
      total += o.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    // Every pair's marginal is one half.
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      double second = 0.0;
      for (const auto& o : dist) {
        if ((o.choices >> t) & 1u) second += o.probability;
      }
      CHECK(second == doctest::Approx(0.5).epsilon(1e-14));
    }
  }
}

TEST_CASE("never-selected bounds on short runs") {
  const std::vector<Pair> two = {{0, 1}, {0, 2}};
  const auto idx = all_indices(2);
  CHECK(exact_never_selected(SelectorKind::warmup(), two, 0, idx) <=
        0.234375 + 1e-15);
  const RecurrenceTable g = RecurrenceTable::improved(optimal_p().p);
  // Runs [2,1] separated by a pair that does not involve element 0.
  const std::vector<Pair> split = {{0, 1}, {0, 2}, {3, 4}, {3, 0}, {5, 6}, {0, 5}};
  const std::vector<std::size_t> mine = {0, 1, 5};
  CHECK(consecutive_decomposition(split, 0, mine) == std::vector<int>{2, 1});
  CHECK(exact_never_selected(SelectorKind::improved_optimal(), split, 0, mine) <=
        g.run_bound(2) * g.run_bound(1) + 1e-15);
}

TEST_CASE("exact enumeration limits") {
  std::vector<Pair> pairs;
  for (int t = 0; t <= kExactPairLimit; ++t) pairs.push_back({t, t + 1});
  CHECK_THROWS_AS(exact_selection_distribution(SelectorKind::warmup(), pairs),
                  std::length_error);
  const std::vector<Pair> bad = {{1, 1}};
  CHECK_THROWS_AS(exact_selection_distribution(SelectorKind::warmup(), bad),
                  std::invalid_argument);
}

TEST_CASE("exact algorithm value") {
  EngineSpec spec;
  SUBCASE("no randomized rounds") {
    const Instance inst = dense(2, {{1, 0}, {0, 2}});
    const ExactValue v = exact_algorithm_value(inst, spec, SelectorKind::warmup());
    CHECK(v.randomized_rounds == 0);
    CHECK(v.expected == doctest::Approx(3.0));
  }
  SUBCASE("complete 2x2 agrees with sampling") {
    const Instance inst = dense(2, {{1, 1}, {1, 1}});
    for (const SelectorKind& kind :
         {SelectorKind::independent(), SelectorKind::warmup(),
          SelectorKind::improved_optimal()}) {
      const ExactValue v = exact_algorithm_value(inst, spec, kind);
      CHECK(v.randomized_rounds >= 1);
      // The surrogate assumes the table's correlation; fair coins fall short.
      if (kind.type == SelectorKind::Type::kImproved) {
        CHECK(v.expected >= v.pbar - 1e-12);
      } else if (kind.type == SelectorKind::Type::kIndependent) {
        CHECK(v.expected < v.pbar);
      }
      const int trials = 100000;
      double sum = 0.0;
      double sq = 0.0;
      for (int t = 0; t < trials; ++t) {
        auto sel = new_selector(kind, trial_seed(3, t));
        const double x = run_engine(inst, spec, *sel).value;
        sum += x;
        sq += x * x;
      }
      const double mean = sum / trials;
      const double se = std::sqrt(std::max(sq / trials - mean * mean, 0.0) / trials);
      CAPTURE(kind.name());
      CHECK(std::abs(mean - v.expected) <= 5 * se + 1e-12);
    }
  }
  SUBCASE("unweighted engine") {
    spec.kind = EngineSpec::Kind::kUnweighted;
    const ExactValue v =
        exact_algorithm_value(nine_vertex_triangular(), spec, SelectorKind::improved_optimal(), 16);
    CHECK(v.expected >= v.pbar - 1e-12);
    CHECK(v.expected <= 9.0);
  }
}
