#include "ocsmatch/unweighted.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ocsmatch {

namespace {

constexpr double kTolerance = 1e-9;

// The two attainers of the minimum key among `ids`, ordered by the tie-break
// rule; `count` receives the number of attainers.
template <class Key>
std::pair<int, int> two_least(std::span<const int> ids, Key key,
                              TieBreak tie_break, int& count) {
  count = 0;
  int a = -1;
  int b = -1;
  for (int id : ids) {
    const auto k = key(id);
    if (count == 0 || k < key(a)) {
      a = id;
      b = -1;
      count = 1;
      continue;
    }
    if (k == key(a)) {
      ++count;
      const bool better_than_a =
          tie_break == TieBreak::kSmallestId ? id < a : id > a;
      if (better_than_a) {
        b = a;
        a = id;
      } else if (b < 0 ||
                 (tie_break == TieBreak::kSmallestId ? id < b : id > b)) {
        b = id;
      }
    }
  }
  return {a, b};
}

}  // namespace

TieBreak parse_tie_break(const std::string& text) {
  if (text == "smallest") return TieBreak::kSmallestId;
  if (text == "reverse") return TieBreak::kReverseLex;
  throw std::invalid_argument("unknown tie-break '" + text +
                              "' (expected smallest|reverse)");
}

const char* tie_break_name(TieBreak tie_break) {
  return tie_break == TieBreak::kSmallestId ? "smallest" : "reverse";
}

UnweightedEngine::UnweightedEngine(int n_offline, UnweightedDualTable table,
                                   TieBreak tie_break)
    : table_(std::move(table)),
      tie_break_(tie_break),
      offline_(n_offline),
      matched_(n_offline, false) {
  if (n_offline < 0) throw std::invalid_argument("negative offline count");
  table_.validate();
}

RoundOutcome UnweightedEngine::arrive(std::span<const int> neighbors,
                                      Selector& selector) {
  std::vector<int> open;
  open.reserve(neighbors.size());
  for (int i : neighbors) {
    if (i < 0 || i >= n_offline()) {
      throw std::invalid_argument("neighbor " + std::to_string(i) +
                                  " out of range");
    }
    if (offline_[i].k.is_finite()) open.push_back(i);
  }

  RoundOutcome outcome;
  ExtendedCount level = 0;
  int attainers = 0;
  const auto [first, second] = two_least(
      std::span<const int>(open), [&](int i) { return offline_[i].k; },
      tie_break_, attainers);

  if (attainers >= 2) {
    const ExtendedCount k_min = offline_[first].k;
    outcome.type = RoundType::kRandomized;
    outcome.i1 = first;
    outcome.i2 = second;
    outcome.w1 = outcome.w2 = 1.0;
    outcome.beta = 2.0 * table_.dbeta_at(k_min);
    outcome.selected = selector.select({first, second});
    matched_[outcome.selected] = true;
    for (int i : {first, second}) {
      OfflineState& s = offline_[i];
      pbar_ -= s.xbar;
      s.alpha += table_.dalpha_at(k_min);
      s.k = k_min.next();
      s.xbar = 1.0 - table_.unmatched_mass(s.k);
      pbar_ += s.xbar;
      dual_ += table_.dalpha_at(k_min);
    }
    level = k_min;
  } else if (attainers == 1) {
    OfflineState& s = offline_[first];
    const ExtendedCount k_min = s.k;
    outcome.type = RoundType::kDeterministic;
    outcome.i1 = first;
    outcome.selected = first;
    outcome.w1 = 1.0;
    outcome.beta = 2.0 * table_.dbeta_at(k_min.next());
    matched_[first] = true;
    const double gain = table_.dalpha_suffix(k_min);
    s.alpha += gain;
    dual_ += gain;
    pbar_ += 1.0 - s.xbar;
    s.xbar = 1.0;
    s.k = ExtendedCount::infinity();
    level = k_min.next();
  }

  dual_ += outcome.beta;
  neighbors_.emplace_back(neighbors.begin(), neighbors.end());
  betas_.push_back(outcome.beta);
  beta_level_.push_back(level);
  transcript_.push_back({n_arrived() - 1, outcome, pbar_, dual_});
  return outcome;
}

InvariantReport UnweightedEngine::check_invariants() const {
  InvariantReport report;
  double pbar = 0.0;
  double dual = 0.0;
  for (int i = 0; i < n_offline(); ++i) {
    const OfflineState& s = offline_[i];
    const double xbar = 1.0 - table_.unmatched_mass(s.k);
    if (std::abs(s.xbar - xbar) > kTolerance) {
      report.violations.push_back({"xbar-drift", i, -1, 0.0,
                                   -std::abs(s.xbar - xbar)});
    }
    const double alpha = table_.dalpha_prefix(s.k);
    if (std::abs(s.alpha - alpha) > kTolerance) {
      report.violations.push_back({"alpha-invariant", i, -1, 0.0,
                                   s.alpha - alpha});
    }
    pbar += s.xbar;
    dual += s.alpha;
  }
  for (int j = 0; j < n_arrived(); ++j) {
    dual += betas_[j];
    const TranscriptRecord& r = transcript_[j];
    if (r.outcome.type != RoundType::kUnmatched) {
      const double expected = 2.0 * table_.dbeta_at(beta_level_[j]);
      if (std::abs(betas_[j] - expected) > kTolerance) {
        report.violations.push_back({"beta-rule", -1, j, 0.0,
                                     -std::abs(betas_[j] - expected)});
      }
    } else if (betas_[j] != 0.0) {
      report.violations.push_back({"beta-rule", -1, j, 0.0, -betas_[j]});
    }
  }

  const double duality_slack = pbar - dual;
  if (duality_slack < -1e-9 * (1.0 + std::abs(pbar))) {
    report.violations.push_back({"reverse-weak-duality", -1, -1, 0.0,
                                 duality_slack});
  }

  for (int j = 0; j < n_arrived(); ++j) {
    for (int i : neighbors_[j]) {
      const double slack = offline_[i].alpha + betas_[j] - table_.Gamma;
      if (slack < -kTolerance) {
        report.violations.push_back({"approximate-dual-feasibility", i, j, 1.0,
                                     slack});
      }
    }
  }
  return report;
}

double UnweightedEngine::algorithm_value() const {
  return static_cast<double>(std::count(matched_.begin(), matched_.end(), true));
}

double UnweightedEngine::surrogate_primal() const { return pbar_; }
double UnweightedEngine::dual_objective() const { return dual_; }

std::vector<std::vector<int>> unweighted_neighbors(const Instance& instance) {
  std::vector<std::vector<int>> out;
  out.reserve(instance.arrivals.size());
  for (const auto& arrival : instance.arrivals) {
    std::vector<int> ids;
    for (const Edge& e : arrival) {
      if (e.weight == 1.0) {
        ids.push_back(e.offline);
      } else if (e.weight != 0.0) {
        throw std::invalid_argument(
            "instance '" + instance.name +
            "' has a weighted edge; unweighted engines need 0/1 weights");
      }
    }
    out.push_back(std::move(ids));
  }
  return out;
}

UnweightedEngine run_unweighted(const Instance& instance,
                                const UnweightedDualTable& table,
                                Selector& selector, TieBreak tie_break) {
  UnweightedEngine engine(instance.n_offline, table, tie_break);
  for (const auto& ids : unweighted_neighbors(instance)) {
    engine.arrive(ids, selector);
  }
  return engine;
}

double perfect_correlation_sim(const Instance& instance, TieBreak tie_break) {
  // Mass is tracked in halves: 0, 1 or 2.
  std::vector<int> halves(instance.n_offline, 0);
  for (const auto& ids : unweighted_neighbors(instance)) {
    std::vector<int> open;
    for (int i : ids) {
      if (halves[i] < 2) open.push_back(i);
    }
    int attainers = 0;
    const auto [first, second] =
        two_least(std::span<const int>(open), [&](int i) { return halves[i]; },
                  tie_break, attainers);
    if (attainers >= 2) {
      ++halves[first];
      ++halves[second];
    } else if (attainers == 1) {
      halves[first] = 2;
    }
  }
  double total = 0.0;
  for (int h : halves) total += 0.5 * h;
  return total;
}

}  // namespace ocsmatch
