#pragma once

#include <vector>

namespace ocsmatch {

/// Largest index for which recurrence values are tabulated. Beyond it the
/// quantities 2^-k f_k and 2^-k g_k are below 1e-19 and treated as zero.
inline constexpr int kRecurrenceCap = 64;

/// Tabulated f_k (warmup selector) or g_k (improved selector with sender
/// probability p) for k = 0..kRecurrenceCap. Both satisfy
///   v[0] = v[1] = 1,  v[k] = v[k-1] - c * v[k-2],
/// with c = 1/16 for the warmup recurrence and c = p(1-p)(4-p)/8 otherwise.
class RecurrenceTable {
 public:
  enum class Kind { kWarmup, kImproved };

  static RecurrenceTable warmup();
  static RecurrenceTable improved(double p);

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double coefficient() const { return coefficient_; }

  /// Value at index k; throws std::out_of_range for k outside 0..cap.
  double at(int k) const;
  double operator[](int k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

  /// 2^-k * v[k]: the never-selected bound of one run of k consecutive pairs.
  /// Zero past the cap.
  double run_bound(int k) const;

 private:
  RecurrenceTable(Kind kind, double p, double coefficient);

  Kind kind_;
  double p_;
  double coefficient_;
  std::vector<double> values_;
};

double eval_f(int k);
double eval_g(int k, double p);

/// OCS quality of the improved selector: p(1-p)(4-p)/8.
double gamma_from_p(double p);

struct OptimalSender {
  double p;
  double gamma;
};

/// p = (5 - sqrt 13)/3 and gamma = (13 sqrt 13 - 35)/108.
OptimalSender optimal_p();

}  // namespace ocsmatch
