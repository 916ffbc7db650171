#include "ocsmatch/ocs.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ocsmatch/recurrences.h"

namespace ocsmatch {

SelectorKind SelectorKind::improved(double p) {
  return {Type::kImproved, p};
}

SelectorKind SelectorKind::improved_optimal() {
  return improved(optimal_p().p);
}

std::string SelectorKind::name() const {
  switch (type) {
    case Type::kIndependent:
      return "independent";
    case Type::kWarmup:
      return "warmup";
    case Type::kImproved: {
      if (p == optimal_p().p) return "improved";
      std::ostringstream out;
      out.precision(17);
      out << "improved:" << p;
      return out.str();
    }
  }
  return "unknown";
}

SelectorKind SelectorKind::parse(const std::string& text) {
  if (text == "independent") return independent();
  if (text == "warmup") return warmup();
  if (text == "improved") return improved_optimal();
  if (text.rfind("improved:", 0) == 0) {
    std::size_t used = 0;
    const std::string tail = text.substr(9);
    double p = 0.0;
    try {
      p = std::stod(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tail.size()) {
      throw std::invalid_argument("bad sender probability in selector '" +
                                  text + "'");
    }
    return improved(p);
  }
  throw std::invalid_argument("unknown selector '" + text + "'");
}

Element Selector::select(Pair pair) {
  if (pair.first == pair.second) {
    throw std::invalid_argument("degenerate pair: element " +
                                std::to_string(pair.first) + " twice");
  }
  if (pair.first < 0 || pair.second < 0) {
    throw std::invalid_argument("negative element id in pair");
  }
  const Element chosen = do_select(pair, pairs_seen_);
  ++pairs_seen_;
  return chosen;
}

void Selector::reset(std::uint64_t seed) {
  rng_.reseed(seed);
  pairs_seen_ = 0;
  draws_ = 0;
  clear_state();
}

// ---------------------------------------------------------------------------

std::unique_ptr<Selector> IndependentSelector::clone() const {
  return std::make_unique<IndependentSelector>(*this);
}

Element IndependentSelector::do_select(Pair pair, std::size_t) {
  return coin() ? pair.second : pair.first;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Selector> WarmupSelector::clone() const {
  return std::make_unique<WarmupSelector>(*this);
}

WarmupSelector::Tau WarmupSelector::tau(Element e) const {
  if (e < 0 || static_cast<std::size_t>(e) >= tau_.size()) return Tau::kUnknown;
  return tau_[e];
}

WarmupSelector::Tau& WarmupSelector::tau_ref(Element e) {
  if (static_cast<std::size_t>(e) >= tau_.size()) {
    tau_.resize(e + 1, Tau::kUnknown);
  }
  return tau_[e];
}

Element WarmupSelector::do_select(Pair pair, std::size_t) {
  const Element members[2] = {pair.first, pair.second};
  int chosen;  // index into members
  if (coin()) {
    // Sender: fresh selection, remember it for one of the two elements.
    const int l = coin() ? 1 : 0;
    const int m = coin() ? 1 : 0;
    tau_ref(members[1 - m]) = Tau::kUnknown;
    tau_ref(members[m]) = (m == l) ? Tau::kSelected : Tau::kNotSelected;
    chosen = l;
  } else {
    // Receiver: reuse the stored bit of one element, oppositely.
    const int m = coin() ? 1 : 0;
    switch (tau_ref(members[m])) {
      case Tau::kSelected:
        chosen = 1 - m;
        break;
      case Tau::kNotSelected:
        chosen = m;
        break;
      case Tau::kUnknown:
      default:
        chosen = coin() ? 1 : 0;
        break;
    }
    tau_ref(members[0]) = Tau::kUnknown;
    tau_ref(members[1]) = Tau::kUnknown;
  }
  return members[chosen];
}

// ---------------------------------------------------------------------------

std::string ImprovedState::validate() const {
  std::vector<int> in_degree(nodes.size(), 0);
  std::vector<int> out_degree(nodes.size(), 0);
  for (const Arc& arc : arcs) {
    if (arc.from >= arc.to || arc.to >= nodes.size()) {
      return "arc (" + std::to_string(arc.from) + "," + std::to_string(arc.to) +
             ") is not forward";
    }
    if (!pairs[arc.from].contains(arc.element) ||
        !pairs[arc.to].contains(arc.element)) {
      return "arc element " + std::to_string(arc.element) +
             " missing from an endpoint";
    }
    for (std::size_t t = arc.from + 1; t < arc.to; ++t) {
      if (pairs[t].contains(arc.element)) {
        return "arc (" + std::to_string(arc.from) + "," +
               std::to_string(arc.to) + ") skips pair " + std::to_string(t);
      }
    }
    if (nodes[arc.from].type != NodeType::kSender ||
        nodes[arc.to].type != NodeType::kReceiver) {
      return "arc does not run from a sender to a receiver";
    }
    if (nodes[arc.from].sent_toward != arc.element) {
      return "arc element differs from the sender's chosen out-arc";
    }
    ++out_degree[arc.from];
    ++in_degree[arc.to];
  }
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (in_degree[j] + out_degree[j] > 1) {
      return "pair " + std::to_string(j) + " has " +
             std::to_string(in_degree[j] + out_degree[j]) + " realized arcs";
    }
  }
  return {};
}

ImprovedSelector::ImprovedSelector(double p, std::uint64_t seed)
    : Selector(seed), p_(p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("improved selector needs 0 < p < 1, got " +
                            std::to_string(p));
  }
}

std::unique_ptr<Selector> ImprovedSelector::clone() const {
  return std::make_unique<ImprovedSelector>(*this);
}

void ImprovedSelector::clear_state() {
  state_.last_pair.clear();
  state_.pairs.clear();
  state_.nodes.clear();
  state_.arcs.clear();
}

std::int64_t& ImprovedSelector::last_pair_ref(Element e) {
  if (static_cast<std::size_t>(e) >= state_.last_pair.size()) {
    state_.last_pair.resize(e + 1, -1);
  }
  return state_.last_pair[e];
}

Element ImprovedSelector::do_select(Pair pair, std::size_t index) {
  using NodeType = ImprovedState::NodeType;
  const Element members[2] = {pair.first, pair.second};
  // In-neighbors in the ex-ante graph, read before this pair is recorded.
  const std::int64_t in_neighbor[2] = {last_pair_ref(members[0]),
                                       last_pair_ref(members[1])};

  ImprovedState::Node node{};
  if (bernoulli(p_)) {
    node.type = NodeType::kSender;
    node.selection = members[coin() ? 1 : 0];
    node.sent_toward = members[coin() ? 1 : 0];
  } else {
    node.type = NodeType::kReceiver;
    int offers[2];
    int count = 0;
    for (int m = 0; m < 2; ++m) {
      if (in_neighbor[m] < 0) continue;
      const ImprovedState::Node& from = state_.nodes[in_neighbor[m]];
      if (from.type == NodeType::kSender && from.sent_toward == members[m]) {
        offers[count++] = m;
      }
    }
    if (count > 0) {
      const int m = (count == 2) ? (coin() ? offers[1] : offers[0]) : offers[0];
      const std::size_t sender = static_cast<std::size_t>(in_neighbor[m]);
      const bool was_selected = state_.nodes[sender].selection == members[m];
      node.selection = was_selected ? members[1 - m] : members[m];
      state_.arcs.push_back({sender, index, members[m]});
    } else {
      node.selection = members[coin() ? 1 : 0];
    }
  }

  state_.pairs.push_back(pair);
  state_.nodes.push_back(node);
  last_pair_ref(members[0]) = static_cast<std::int64_t>(index);
  last_pair_ref(members[1]) = static_cast<std::int64_t>(index);
  return node.selection;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Selector> new_selector(const SelectorKind& kind,
                                       std::uint64_t seed) {
  switch (kind.type) {
    case SelectorKind::Type::kIndependent:
      return std::make_unique<IndependentSelector>(seed);
    case SelectorKind::Type::kWarmup:
      return std::make_unique<WarmupSelector>(seed);
    case SelectorKind::Type::kImproved:
      return std::make_unique<ImprovedSelector>(kind.p, seed);
  }
  throw std::invalid_argument("unknown selector kind");
}

std::vector<int> consecutive_decomposition(std::span<const Pair> pairs,
                                           Element element,
                                           std::span<const std::size_t> indices) {
  // Rank of each pair among the occurrences of `element`.
  std::vector<int> rank(pairs.size(), -1);
  int next_rank = 0;
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    if (pairs[t].contains(element)) rank[t] = next_rank++;
  }

  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate pair index in subsequence");
  }

  std::vector<int> runs;
  int previous_rank = -2;
  for (std::size_t index : sorted) {
    if (index >= pairs.size()) {
      throw std::out_of_range("pair index " + std::to_string(index) +
                              " out of range");
    }
    if (rank[index] < 0) {
      throw std::invalid_argument("pair " + std::to_string(index) +
                                  " does not contain element " +
                                  std::to_string(element));
    }
    if (rank[index] == previous_rank + 1 && !runs.empty()) {
      ++runs.back();
    } else {
      runs.push_back(1);
    }
    previous_rank = rank[index];
  }
  return runs;
}

}  // namespace ocsmatch
