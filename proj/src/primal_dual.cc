#include "ocsmatch/primal_dual.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ocsmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLevelTolerance = 1e-9;

// Index of the largest value; ties go to the smallest index. `skip` is
// excluded.
int argmax(const std::vector<double>& values, int skip = -1) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (i == skip) continue;
    if (best < 0 || values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace

double OfflineDualState::alpha_integral() const {
  return levels.integrate([](const DualLevel& l) { return l.alpha; });
}

double OfflineDualState::ybar_integral() const {
  return levels.integrate([](const DualLevel& l) { return l.ybar; });
}

double delta_r(const OfflineDualState& state, double w, const GainTable& table) {
  const double below = state.levels.integrate(
      0.0, w, [&](const DualLevel& l) { return table.b_at(l.k); });
  const double above = state.levels.integrate(
      w, kInf, [&](const DualLevel& l) { return table.a_prefix(l.k); });
  return below - 0.5 * above;
}

double delta_d(const OfflineDualState& state, double w, const GainTable& table) {
  return table.kappa * delta_r(state, w, table);
}

EdgeWeightedEngine::EdgeWeightedEngine(int n_offline, GainTable table)
    : table_(std::move(table)),
      offline_(n_offline),
      heaviest_(n_offline, 0.0) {
  if (n_offline < 0) throw std::invalid_argument("negative offline count");
  table_.validate();
}

RoundOutcome EdgeWeightedEngine::arrive(std::span<const Edge> edges,
                                        Selector& selector) {
  std::vector<double> weights(offline_.size(), 0.0);
  for (const Edge& e : edges) {
    if (e.offline < 0 || e.offline >= n_offline()) {
      throw std::invalid_argument("edge to unknown offline vertex " +
                                  std::to_string(e.offline));
    }
    weights[e.offline] = e.weight;
  }
  return arrive_dense(weights, selector);
}

RoundOutcome EdgeWeightedEngine::arrive_dense(std::span<const double> weights,
                                              Selector& selector) {
  if (weights.size() != offline_.size()) {
    throw std::invalid_argument("weight vector does not cover offline vertices");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("weights must be finite and nonnegative");
    }
  }

  const int n = n_offline();
  std::vector<double> gain_r(n);
  std::vector<double> gain_d(n);
  for (int i = 0; i < n; ++i) {
    gain_r[i] = delta_r(offline_[i], weights[i], table_);
    gain_d[i] = table_.kappa * gain_r[i];
  }

  RoundOutcome outcome;
  const int star = argmax(gain_d);
  const double offer_d = star >= 0 ? gain_d[star] : -kInf;
  int first = -1;
  int second = -1;
  double offer_r = -kInf;
  if (n >= 2) {
    first = argmax(gain_r);
    second = argmax(gain_r, first);
    offer_r = gain_r[first] + gain_r[second];
  }

  if (n >= 2 && offer_r >= offer_d && offer_r >= 0.0) {
    outcome.type = RoundType::kRandomized;
    outcome.i1 = first;
    outcome.i2 = second;
    outcome.w1 = weights[first];
    outcome.w2 = weights[second];
    outcome.beta = offer_r;
    outcome.selected = selector.select({first, second});
    const double w_sel = outcome.selected == first ? outcome.w1 : outcome.w2;
    heaviest_[outcome.selected] = std::max(heaviest_[outcome.selected], w_sel);
    apply_randomized(first, weights[first]);
    apply_randomized(second, weights[second]);
  } else if (star >= 0 && offer_d >= 0.0) {
    outcome.type = RoundType::kDeterministic;
    outcome.i1 = star;
    outcome.selected = star;
    outcome.w1 = weights[star];
    outcome.beta = offer_d;
    heaviest_[star] = std::max(heaviest_[star], weights[star]);
    apply_deterministic(star, weights[star]);
  }

  weights_.emplace_back(weights.begin(), weights.end());
  betas_.push_back(outcome.beta);
  transcript_.push_back({n_arrived() - 1, outcome, surrogate_primal(),
                         dual_objective()});
  return outcome;
}

void EdgeWeightedEngine::apply_randomized(int i, double w) {
  OfflineDualState& state = offline_[i];
  if (w > 0.0) state.levels.split_at(w);
  const double previous = state.last_randomized_weight;
  for (auto& piece : state.levels.mutable_pieces()) {
    DualLevel& level = piece.value;
    const ExtendedCount k = level.k;
    if (piece.upper <= w) {
      // Levels also covered by the previous randomized round continue a
      // consecutive run: larger ybar gain, and the prepaid share is kept.
      const bool continues_run = piece.upper <= previous && k >= 1;
      if (continues_run || k == 0) {
        level.alpha += table_.a_at(k);
      } else {
        level.alpha += table_.a_at(k) - table_.prepaid(k);
      }
      const double factor = continues_run ? 0.5 * (1.0 - table_.gamma) : 0.5;
      level.ybar = 1.0 - (1.0 - level.ybar) * factor;
      level.k = k.next();
    } else if (k >= 1) {
      level.alpha += table_.prepaid(k);
    }
  }
  state.last_randomized_weight = w;
}

void EdgeWeightedEngine::apply_deterministic(int i, double w) {
  OfflineDualState& state = offline_[i];
  if (!(w > 0.0)) return;
  state.levels.split_at(w);
  for (auto& piece : state.levels.mutable_pieces()) {
    if (piece.upper > w) break;
    DualLevel& level = piece.value;
    level.alpha += table_.a_suffix(level.k);
    level.k = ExtendedCount::infinity();
    level.ybar = 1.0;
  }
}

InvariantReport EdgeWeightedEngine::check_invariants() const {
  InvariantReport report;
  const int n = n_offline();
  std::vector<double> alpha_total(n);

  for (int i = 0; i < n; ++i) {
    const OfflineDualState& state = offline_[i];
    alpha_total[i] = state.alpha_integral();
    ExtendedCount previous_k = ExtendedCount::infinity();
    double previous_ybar = 1.0;
    for (const auto& piece : state.levels.pieces()) {
      const DualLevel& level = piece.value;
      const double alpha_slack = level.alpha - table_.a_prefix(level.k);
      if (alpha_slack < -kLevelTolerance) {
        report.violations.push_back({"alpha-invariant", i, -1, piece.upper,
                                     alpha_slack});
      }
      const double ybar_slack =
          (1.0 - level.ybar) - table_.unmatched_bound(level.k);
      if (ybar_slack < -kLevelTolerance) {
        report.violations.push_back({"ybar-lower-bound", i, -1, piece.upper,
                                     ybar_slack});
      }
      if (level.k > previous_k || level.ybar > previous_ybar + kLevelTolerance) {
        report.violations.push_back({"monotone-in-weight", i, -1, piece.upper,
                                     previous_ybar - level.ybar});
      }
      previous_k = level.k;
      previous_ybar = level.ybar;
    }
  }

  const double pbar = surrogate_primal();
  const double dual = dual_objective();
  const double duality_slack = pbar - dual;
  if (duality_slack < -1e-9 * (1.0 + std::abs(pbar))) {
    report.violations.push_back({"reverse-weak-duality", -1, -1, 0.0,
                                 duality_slack});
  }

  for (int j = 0; j < n_arrived(); ++j) {
    for (int i = 0; i < n; ++i) {
      const double slack =
          alpha_total[i] + betas_[j] - table_.Gamma * weights_[j][i];
      if (slack < -1e-9) {
        report.violations.push_back({"approximate-dual-feasibility", i, j,
                                     weights_[j][i], slack});
      }
    }
  }
  return report;
}

double EdgeWeightedEngine::algorithm_value() const {
  double total = 0.0;
  for (double w : heaviest_) total += w;
  return total;
}

double EdgeWeightedEngine::surrogate_primal() const {
  double total = 0.0;
  for (const OfflineDualState& state : offline_) total += state.ybar_integral();
  return total;
}

double EdgeWeightedEngine::dual_objective() const {
  double total = 0.0;
  for (const OfflineDualState& state : offline_) {
    total += state.alpha_integral();
  }
  for (double beta : betas_) total += beta;
  return total;
}

EdgeWeightedEngine run_edge_weighted(const Instance& instance,
                                     const GainTable& table,
                                     Selector& selector) {
  EdgeWeightedEngine engine(instance.n_offline, table);
  for (const auto& arrival : instance.arrivals) engine.arrive(arrival, selector);
  return engine;
}

}  // namespace ocsmatch
