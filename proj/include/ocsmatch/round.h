#pragma once

#include <span>
#include <string>
#include <vector>

#include "ocsmatch/ocs.h"

namespace ocsmatch {

enum class RoundType { kUnmatched, kDeterministic, kRandomized };

const char* round_type_name(RoundType type);

/// Outcome of one online arrival. Candidates and their edge weights are kept
/// so that a run can be replayed against a different selector.
struct RoundOutcome {
  RoundType type = RoundType::kUnmatched;
  int i1 = -1;  // deterministic: the matched vertex
  int i2 = -1;
  int selected = -1;
  double w1 = 0.0;
  double w2 = 0.0;
  double beta = 0.0;

  /// Same round type and candidates (ignores the selection).
  bool same_structure(const RoundOutcome& other) const {
    return type == other.type && i1 == other.i1 && i2 == other.i2;
  }
};

struct TranscriptRecord {
  int round = 0;
  RoundOutcome outcome;
  double pbar = 0.0;  // surrogate primal after the round
  double dual = 0.0;  // dual objective after the round
};

/// CSV with header round,type,i1,i2,selected,beta,pbar,dual.
std::string transcript_csv(std::span<const TranscriptRecord> records);

/// Realized objective of a fixed round sequence when randomized rounds are
/// resolved by `selector`: each offline vertex counts its heaviest matched
/// edge. Valid because the engines' candidate choices never depend on the
/// selector's output.
double replay_value(std::span<const TranscriptRecord> records, int n_offline,
                    Selector& selector);

/// Same, with randomized round r resolved to i2 iff bit r of `choices` is set.
double value_for_choices(std::span<const TranscriptRecord> records,
                         int n_offline, std::uint64_t choices);

struct InvariantViolation {
  std::string check;
  int offline = -1;
  int online = -1;
  double level = 0.0;  // weight-level, when applicable
  double slack = 0.0;  // negative by the amount of the violation

  std::string describe() const;
};

struct InvariantReport {
  std::vector<InvariantViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

}  // namespace ocsmatch
