#include "ocsmatch/recurrences.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ocsmatch {

namespace {

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("sender probability must lie in [0, 1], got " +
                            std::to_string(p));
  }
}

}  // namespace

RecurrenceTable::RecurrenceTable(Kind kind, double p, double coefficient)
    : kind_(kind), p_(p), coefficient_(coefficient) {
  values_.resize(kRecurrenceCap + 1);
  values_[0] = 1.0;
  values_[1] = 1.0;
  for (int k = 2; k <= kRecurrenceCap; ++k) {
    values_[k] = values_[k - 1] - coefficient_ * values_[k - 2];
  }
}

RecurrenceTable RecurrenceTable::warmup() {
  return RecurrenceTable(Kind::kWarmup, 0.5, 1.0 / 16.0);
}

RecurrenceTable RecurrenceTable::improved(double p) {
  return RecurrenceTable(Kind::kImproved, p, gamma_from_p(p));
}

double RecurrenceTable::at(int k) const {
  if (k < 0 || k > kRecurrenceCap) {
    throw std::out_of_range("recurrence index " + std::to_string(k) +
                            " outside 0.." + std::to_string(kRecurrenceCap));
  }
  return values_[k];
}

double RecurrenceTable::run_bound(int k) const {
  if (k > kRecurrenceCap) return 0.0;
  return std::ldexp(at(k), -k);
}

double eval_f(int k) {
  static const RecurrenceTable table = RecurrenceTable::warmup();
  return table.at(k);
}

double eval_g(int k, double p) {
  require_probability(p);
  if (k < 0 || k > kRecurrenceCap) {
    throw std::out_of_range("recurrence index " + std::to_string(k));
  }
  const double c = gamma_from_p(p);
  double prev = 1.0;
  double cur = 1.0;
  for (int i = 2; i <= k; ++i) {
    const double next = cur - c * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double gamma_from_p(double p) {
  require_probability(p);
  return p * (1.0 - p) * (4.0 - p) / 8.0;
}

OptimalSender optimal_p() {
  const double root13 = std::sqrt(13.0);
  const double p = (5.0 - root13) / 3.0;
  return {p, gamma_from_p(p)};
}

}  // namespace ocsmatch
