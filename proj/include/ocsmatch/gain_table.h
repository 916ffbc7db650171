#pragma once

#include <string>
#include <vector>

#include "ocsmatch/recurrences.h"
#include "ocsmatch/step_function.h"

namespace ocsmatch {

/// Gain-sharing parameters of the edge-weighted engine: a(k) goes to the
/// offline dual at a weight-level with k prior randomized rounds, b(k) to the
/// online dual. Both vanish for k > k_max and for k = infinity.
struct GainTable {
  std::string name;
  double gamma = 0.0;  // OCS quality the table was optimized for
  double kappa = 1.5;  // deterministic-offer multiplier
  double Gamma = 0.0;  // certified competitive ratio
  std::vector<double> a;
  std::vector<double> b;

  int k_max() const { return static_cast<int>(a.size()) - 1; }

  double a_at(ExtendedCount k) const;
  double b_at(ExtendedCount k) const;
  /// Sum of a(l) for l < k; the full sum when k is infinite.
  double a_prefix(ExtendedCount k) const;
  /// Sum of a(l) for l >= k; zero when k is infinite.
  double a_suffix(ExtendedCount k) const;
  /// 2^(-k-1) (1-gamma)^(k-1) gamma for finite k >= 1, zero otherwise. This
  /// is the amount prepaid above the edge weight and withheld on the next
  /// non-consecutive round.
  double prepaid(ExtendedCount k) const;
  /// 2^-k (1-gamma)^max(k-1,0); zero for infinity.
  double unmatched_bound(ExtendedCount k) const;

  /// Throws std::invalid_argument on negative entries, mismatched lengths,
  /// kappa outside [1,2] or a(0) < gamma/2.
  void validate() const;

  static GainTable table_1a();  // gamma = 1/16
  static GainTable table_1b();  // gamma = (13 sqrt13 - 35)/108
};

/// Dual increments of the unweighted two-choice greedy. `recurrence` is the
/// OCS recurrence (g_k at the optimal sender probability for t3) that
/// defines the surrogate 1 - 2^-k g_k.
struct UnweightedDualTable {
  std::string name;
  double Gamma = 0.0;
  std::vector<double> dalpha;
  std::vector<double> dbeta;
  RecurrenceTable recurrence = RecurrenceTable::improved(optimal_p().p);

  int k_max() const { return static_cast<int>(dalpha.size()) - 1; }
  double dalpha_at(ExtendedCount k) const;
  double dbeta_at(ExtendedCount k) const;
  double dalpha_prefix(ExtendedCount k) const;
  double dalpha_suffix(ExtendedCount k) const;
  /// 2^-k r_k, zero for infinity or past the recurrence cap.
  double unmatched_mass(ExtendedCount k) const;

  void validate() const;

  static UnweightedDualTable table_3();
};

/// "1a", "1b" (edge-weighted) or a JSON table file.
GainTable load_gain_table(const std::string& name_or_path);
/// "t3" or a JSON table file.
UnweightedDualTable load_unweighted_table(const std::string& name_or_path);

void save_gain_table_json(const GainTable& table, const std::string& path);
void save_unweighted_table_json(const UnweightedDualTable& table,
                                const std::string& path);

/// CSV in the published layout: k,a,b / k,g,dalpha,beta.
std::string gain_table_csv(const GainTable& table);
std::string unweighted_table_csv(const UnweightedDualTable& table);

}  // namespace ocsmatch
