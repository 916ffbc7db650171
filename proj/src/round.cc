#include "ocsmatch/round.h"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace ocsmatch {

const char* round_type_name(RoundType type) {
  switch (type) {
    case RoundType::kUnmatched:
      return "unmatched";
    case RoundType::kDeterministic:
      return "deterministic";
    case RoundType::kRandomized:
      return "randomized";
  }
  return "?";
}

std::string transcript_csv(std::span<const TranscriptRecord> records) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "round,type,i1,i2,selected,beta,pbar,dual\n";
  for (const TranscriptRecord& r : records) {
    out << r.round << ',' << round_type_name(r.outcome.type) << ','
        << r.outcome.i1 << ',' << r.outcome.i2 << ',' << r.outcome.selected
        << ',' << r.outcome.beta << ',' << r.pbar << ',' << r.dual << '\n';
  }
  return out.str();
}

namespace {

template <class Resolve>
double realized(std::span<const TranscriptRecord> records, int n_offline,
                Resolve resolve_second) {
  std::vector<double> heaviest(n_offline, 0.0);
  int randomized = 0;
  for (const TranscriptRecord& r : records) {
    const RoundOutcome& o = r.outcome;
    if (o.type == RoundType::kDeterministic) {
      heaviest[o.i1] = std::max(heaviest[o.i1], o.w1);
    } else if (o.type == RoundType::kRandomized) {
      if (resolve_second(randomized++, o)) {
        heaviest[o.i2] = std::max(heaviest[o.i2], o.w2);
      } else {
        heaviest[o.i1] = std::max(heaviest[o.i1], o.w1);
      }
    }
  }
  double total = 0.0;
  for (double w : heaviest) total += w;
  return total;
}

}  // namespace

double replay_value(std::span<const TranscriptRecord> records, int n_offline,
                    Selector& selector) {
  return realized(records, n_offline, [&](int, const RoundOutcome& o) {
    return selector.select({o.i1, o.i2}) == o.i2;
  });
}

double value_for_choices(std::span<const TranscriptRecord> records,
                         int n_offline, std::uint64_t choices) {
  return realized(records, n_offline, [&](int r, const RoundOutcome&) {
    return ((choices >> r) & 1U) != 0;
  });
}

std::string InvariantViolation::describe() const {
  std::ostringstream out;
  out << check;
  if (offline >= 0) out << " offline=" << offline;
  if (online >= 0) out << " online=" << online;
  if (level > 0.0) out << " level=" << level;
  out << " slack=" << std::setprecision(6) << slack;
  return out.str();
}

std::string InvariantReport::describe() const {
  if (ok()) return "all checks passed";
  std::ostringstream out;
  out << violations.size() << " violation(s)";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 5);
  for (std::size_t v = 0; v < shown; ++v) {
    out << "\n  " << violations[v].describe();
  }
  return out.str();
}

}  // namespace ocsmatch
