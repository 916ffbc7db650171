#pragma once

#include <string>
#include <vector>

#include "ocsmatch/gain_table.h"
#include "ocsmatch/recurrences.h"

namespace ocsmatch {

enum class Relation { kLessEqual, kGreaterEqual };

struct LpConstraint {
  std::string name;
  std::vector<double> row;  // one coefficient per variable
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;

  double activity(const std::vector<double>& x) const;
  /// Amount by which x violates the constraint; <= 0 when satisfied.
  double violation(const std::vector<double>& x) const;
};

/// Maximize objective . x subject to the constraints and x >= 0.
struct LpModel {
  std::vector<std::string> names;
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;

  int n_vars() const { return static_cast<int>(names.size()); }
  int index_of(const std::string& name) const;  // -1 when absent
  int add_var(std::string name, double objective_coefficient = 0.0);
  LpConstraint& add_constraint(std::string name, Relation relation, double rhs);

  /// Throws std::invalid_argument on ragged rows or non-finite entries.
  void validate() const;
};

struct LpSolution {
  enum class Status { kOptimal, kInfeasible, kUnbounded };

  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;
  int pivots = 0;

  double value(const LpModel& model, const std::string& name) const;
};

const char* status_name(LpSolution::Status status);

/// Two-phase dense tableau simplex with Bland's rule. Optimal solutions are
/// re-checked against every constraint at 1e-8 before being returned; a
/// failed check throws std::runtime_error.
LpSolution solve(const LpModel& model);

struct ViolationReport {
  double max_violation = 0.0;  // max over constraints, >= 0
  std::string worst;           // name of the worst constraint
  std::vector<std::pair<std::string, double>> violated;  // above tolerance
  double tolerance = 0.0;

  bool ok() const { return max_violation <= tolerance; }
};

ViolationReport check_point(const LpModel& model, const std::vector<double>& x,
                            double tolerance);

/// Edge-weighted factor-revealing LP over Gamma, a(0..k_max), b(0..k_max).
/// kappa in [1,2] (the closed interval, so a sweep may include both ends).
LpModel build_edge_weighted_lp(double gamma, double kappa, int k_max);

/// Unweighted LP over Gamma, dalpha(0..k_max), dbeta(0..k_max).
LpModel build_unweighted_lp(const RecurrenceTable& g, int k_max);

/// Evaluates the corresponding LP at the table's values with its own Gamma.
ViolationReport verify_table(const GainTable& table, double tolerance);
ViolationReport verify_table(const UnweightedDualTable& table,
                             double tolerance);

GainTable gain_table_from_solution(const LpSolution& solution, double gamma,
                                   double kappa, int k_max);
UnweightedDualTable unweighted_table_from_solution(const LpSolution& solution,
                                                   const RecurrenceTable& g,
                                                   int k_max);

struct SweepPoint {
  double kappa;
  double Gamma;
};

std::vector<SweepPoint> kappa_sweep(double gamma, int k_max,
                                    const std::vector<double>& kappas);

/// Plain-text listing of the model, LP-file style.
std::string lp_text(const LpModel& model);
/// name = value lines.
std::string solution_text(const LpModel& model, const LpSolution& solution);

}  // namespace ocsmatch
