#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ocsmatch/ocs.h"
#include "ocsmatch/oracle.h"
#include "ocsmatch/recurrences.h"
#include "ocsmatch/rng.h"

using namespace ocsmatch;

namespace {

const SelectorKind kKinds[] = {SelectorKind::independent(),
                               SelectorKind::warmup(),
                               SelectorKind::improved_optimal()};

std::vector<Pair> random_pairs(Rng& rng, int n_pairs, int n_elements) {
  std::vector<Pair> pairs;
  while (static_cast<int>(pairs.size()) < n_pairs) {
    const int a = static_cast<int>(rng.below(n_elements));
    const int b = static_cast<int>(rng.below(n_elements));
    if (a != b) pairs.push_back({a, b});
  }
  return pairs;
}

std::vector<Element> run(Selector& s, const std::vector<Pair>& pairs) {
  std::vector<Element> out;
  for (const Pair& p : pairs) out.push_back(s.select(p));
  return out;
}

}  // namespace

TEST_CASE("consecutive decomposition") {
  // a=0 b=1 c=2 d=3 e=4 i=5 z=6
  const std::vector<Pair> pairs = {{0, 5}, {1, 5}, {2, 3}, {4, 5}, {5, 6}};
  const std::vector<std::size_t> split = {0, 1, 4};
  CHECK(consecutive_decomposition(pairs, 5, split) == std::vector<int>{2, 1});
  const std::vector<std::size_t> all = {0, 1, 3, 4};
  CHECK(consecutive_decomposition(pairs, 5, all) == std::vector<int>{4});
  CHECK(consecutive_decomposition(pairs, 5, {}).empty());
  const std::vector<std::size_t> unordered = {4, 0, 3};
  CHECK(consecutive_decomposition(pairs, 5, unordered) == std::vector<int>{1, 2});

  const std::vector<std::size_t> missing = {2};
  CHECK_THROWS_AS(consecutive_decomposition(pairs, 5, missing),
                  std::invalid_argument);
  const std::vector<std::size_t> past = {9};
  CHECK_THROWS_AS(consecutive_decomposition(pairs, 5, past), std::out_of_range);
  const std::vector<std::size_t> twice = {0, 0};
  CHECK_THROWS_AS(consecutive_decomposition(pairs, 5, twice),
                  std::invalid_argument);
}

TEST_CASE("selector kinds parse and name") {
  CHECK(SelectorKind::parse("warmup") == SelectorKind::warmup());
  CHECK(SelectorKind::parse("improved") == SelectorKind::improved_optimal());
  CHECK(SelectorKind::parse("improved:0.25").p == 0.25);
  CHECK(SelectorKind::parse("improved").name() == "improved");
  CHECK(SelectorKind::parse(SelectorKind::improved(0.3).name()) ==
        SelectorKind::improved(0.3));
  CHECK_THROWS_AS(SelectorKind::parse("improved:x"), std::invalid_argument);
  CHECK_THROWS_AS(SelectorKind::parse("greedy"), std::invalid_argument);
}

TEST_CASE("improved selector needs an interior sender probability") {
  CHECK_THROWS_AS(new_selector(SelectorKind::improved(0.0), 7), std::domain_error);
  CHECK_THROWS_AS(new_selector(SelectorKind::improved(1.0), 7), std::domain_error);
  auto s = new_selector(SelectorKind::improved(0.4648), 7);
  CHECK(s->kind().p == 0.4648);
}

TEST_CASE("degenerate pairs are rejected") {
  for (const SelectorKind& kind : kKinds) {
    auto s = new_selector(kind, 1);
    CHECK_THROWS_AS(s->select({3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(s->select({-1, 2}), std::invalid_argument);
    CHECK(s->pairs_seen() == 0);
  }
}

TEST_CASE("selection is a member of the pair and replays bit-identically") {
  Rng rng(11);
  for (const SelectorKind& kind : kKinds) {
    CAPTURE(kind.name());
    for (int rep = 0; rep < 20; ++rep) {
      const auto pairs = random_pairs(rng, 40, 6);
      auto a = new_selector(kind, 7 + rep);
      auto b = new_selector(kind, 7 + rep);
      const auto sa = run(*a, pairs);
      CHECK(sa == run(*b, pairs));
      for (std::size_t t = 0; t < pairs.size(); ++t) {
        CHECK(pairs[t].contains(sa[t]));
      }
      // reset() restarts the same stream; clone() continues it.
      a->reset(7 + rep);
      CHECK(run(*a, pairs) == sa);
      auto c = b->clone();
      CHECK(run(*b, pairs) == run(*c, pairs));
    }
  }
}

TEST_CASE("warmup selector spends at most three binary draws per pair") {
  Rng rng(5);
  const auto pairs = random_pairs(rng, 500, 5);
  WarmupSelector s(3);
  std::uint64_t before = 0;
  for (const Pair& p : pairs) {
    s.select(p);
    CHECK(s.draws() - before <= 3);
    CHECK(s.draws() - before >= 2);
    before = s.draws();
  }
}

TEST_CASE("warmup tau reflects only the latest pair of each element") {
  WarmupSelector s(9);
  for (int t = 0; t < 200; ++t) {
    const Pair p{t % 3, 3 + t % 2};
    const Element chosen = s.select(p);
    const auto t1 = s.tau(p.first);
    const auto t2 = s.tau(p.second);
    // A sender stores one element at most; a receiver clears both.
    CHECK((t1 == WarmupSelector::Tau::kUnknown ||
           t2 == WarmupSelector::Tau::kUnknown));
    if (t1 != WarmupSelector::Tau::kUnknown) {
      CHECK((t1 == WarmupSelector::Tau::kSelected) == (chosen == p.first));
    }
    if (t2 != WarmupSelector::Tau::kUnknown) {
      CHECK((t2 == WarmupSelector::Tau::kSelected) == (chosen == p.second));
    }
  }
}

TEST_CASE("improved selector keeps the ex-post graph a matching") {
  Rng rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const auto pairs = random_pairs(rng, 30, 2 + rep % 6);
    ImprovedSelector s(optimal_p().p, rep);
    run(s, pairs);
    const ImprovedState& st = s.state();
    CHECK(st.validate().empty());
    for (const auto& arc : st.arcs) {
      // Receivers select opposite to the sender on the shared element.
      const bool sender_took = st.nodes[arc.from].selection == arc.element;
      const bool receiver_took = st.nodes[arc.to].selection == arc.element;
      CHECK(sender_took != receiver_took);
    }
  }
}

TEST_CASE("ImprovedState::validate reports a broken matching") {
  ImprovedSelector s(0.5, 1);
  const std::vector<Pair> pairs = {{0, 1}, {1, 2}, {2, 3}};
  run(s, pairs);
  ImprovedState st = s.state();
  st.nodes = {{ImprovedState::NodeType::kSender, 1, 0},
              {ImprovedState::NodeType::kReceiver, -1, 2},
              {ImprovedState::NodeType::kReceiver, -1, 3}};
  st.arcs = {{0, 1, 1}, {0, 2, 1}};
  CHECK_FALSE(st.validate().empty());
}

TEST_CASE("each pair alone is a fair coin") {
  Rng rng(3);
  for (const SelectorKind& kind : kKinds) {
    for (int rep = 0; rep < 30; ++rep) {
      const auto pairs = random_pairs(rng, 6, 4);
      const auto dist = exact_selection_distribution(kind, pairs);
      for (std::size_t t = 0; t < pairs.size(); ++t) {
        double second = 0.0;
        for (const auto& o : dist) {
          if ((o.choices >> t) & 1U) second += o.probability;
        }
        CHECK(std::abs(second - 0.5) <= 1e-12);
      }
    }
  }
}

TEST_CASE("never-selected bounds on short consecutive runs") {
  // Element 0 with fresh partners.
  const std::vector<Pair> two = {{0, 1}, {0, 2}};
  const std::vector<std::size_t> both = {0, 1};
  CHECK(exact_never_selected(SelectorKind::warmup(), two, 0, both) <=
        15.0 / 64.0 + 1e-12);
  const std::vector<Pair> three = {{0, 1}, {0, 2}, {3, 0}};
  const std::vector<std::size_t> all = {0, 1, 2};
  CHECK(exact_never_selected(SelectorKind::improved_optimal(), three, 0, all) <=
        0.125 * eval_g(3, optimal_p().p) + 1e-12);
}

TEST_CASE("exact never-selected agrees with simulation") {
  Rng rng(77);
  const int trials = 40000;
  for (const SelectorKind& kind : kKinds) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto pairs = random_pairs(rng, 7, 4);
      const Element target = pairs[0].first;
      std::vector<std::size_t> idx;
      for (std::size_t t = 0; t < pairs.size(); ++t) {
        if (pairs[t].contains(target)) idx.push_back(t);
      }
      const double exact = exact_never_selected(kind, pairs, target, idx);
      int misses = 0;
      auto s = new_selector(kind, 0);
      for (int trial = 0; trial < trials; ++trial) {
        s->reset(trial_seed(1234 + rep, trial));
        bool hit = false;
        for (std::size_t t = 0; t < pairs.size(); ++t) {
          const Element e = s->select(pairs[t]);
          for (std::size_t i : idx) hit = hit || (i == t && e == target);
        }
        misses += !hit;
      }
      const double freq = static_cast<double>(misses) / trials;
      const double se = std::sqrt(std::max(exact * (1 - exact), 1e-12) / trials);
      CAPTURE(kind.name());
      CHECK(std::abs(freq - exact) <= 5 * se + 1e-12);
    }
  }
}
