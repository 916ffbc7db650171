#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ocsmatch/rng.h"

namespace ocsmatch {

/// Ground element of a selection sequence (an offline vertex). Ids are dense
/// within a run; selectors size their per-element state on demand.
using Element = int;

struct Pair {
  Element first;
  Element second;

  bool contains(Element e) const { return first == e || second == e; }
  friend bool operator==(const Pair&, const Pair&) = default;
};

struct SelectorKind {
  enum class Type { kIndependent, kWarmup, kImproved };

  Type type = Type::kIndependent;
  double p = 0.5;  // sender probability, improved selector only

  static SelectorKind independent() { return {Type::kIndependent, 0.5}; }
  static SelectorKind warmup() { return {Type::kWarmup, 0.5}; }
  static SelectorKind improved(double p);
  /// Improved selector at the sender probability maximizing its quality.
  static SelectorKind improved_optimal();

  /// "independent", "warmup" or "improved" (with ":p" when p is not optimal).
  std::string name() const;
  static SelectorKind parse(const std::string& text);

  friend bool operator==(const SelectorKind&, const SelectorKind&) = default;
};

/// Online correlated selection: picks one element of every pair it is fed.
/// Behaviour is a deterministic function of (kind, seed, input sequence).
class Selector {
 public:
  virtual ~Selector() = default;

  /// Returns pair.first or pair.second. Throws std::invalid_argument when the
  /// two elements coincide or are negative.
  Element select(Pair pair);

  /// Forgets all history and restarts the random stream from `seed`.
  void reset(std::uint64_t seed);

  virtual SelectorKind kind() const = 0;
  virtual std::unique_ptr<Selector> clone() const = 0;

  std::size_t pairs_seen() const { return pairs_seen_; }
  /// Total random draws consumed so far.
  std::uint64_t draws() const { return draws_; }

 protected:
  explicit Selector(std::uint64_t seed) : rng_(seed) {}

  virtual Element do_select(Pair pair, std::size_t index) = 0;
  virtual void clear_state() = 0;

  bool coin() {
    ++draws_;
    return rng_.coin();
  }
  bool bernoulli(double p) {
    ++draws_;
    return rng_.bernoulli(p);
  }

 private:
  Rng rng_;
  std::size_t pairs_seen_ = 0;
  std::uint64_t draws_ = 0;
};

/// A fresh fair bit per pair (a 0-OCS).
class IndependentSelector final : public Selector {
 public:
  explicit IndependentSelector(std::uint64_t seed) : Selector(seed) {}
  SelectorKind kind() const override { return SelectorKind::independent(); }
  std::unique_ptr<Selector> clone() const override;

 protected:
  Element do_select(Pair pair, std::size_t index) override;
  void clear_state() override {}
};

/// Sender/receiver selector that forwards one stored bit per element.
class WarmupSelector final : public Selector {
 public:
  enum class Tau : std::uint8_t { kUnknown, kSelected, kNotSelected };

  explicit WarmupSelector(std::uint64_t seed) : Selector(seed) {}
  SelectorKind kind() const override { return SelectorKind::warmup(); }
  std::unique_ptr<Selector> clone() const override;

  Tau tau(Element e) const;

 protected:
  Element do_select(Pair pair, std::size_t index) override;
  void clear_state() override { tau_.clear(); }

 private:
  Tau& tau_ref(Element e);

  std::vector<Tau> tau_;
};

/// Bookkeeping of the improved selector: the ex-ante graph is implicit in
/// `last_pair`, the ex-post graph is the list of realized arcs.
struct ImprovedState {
  enum class NodeType : std::uint8_t { kSender, kReceiver };

  struct Node {
    NodeType type;
    Element sent_toward = -1;  // sender only: element whose out-arc carries the bit
    Element selection;
  };

  struct Arc {
    std::size_t from;  // sender pair index
    std::size_t to;    // receiver pair index
    Element element;   // shared element carrying the arc
  };

  std::vector<std::int64_t> last_pair;  // per element, -1 when unseen
  std::vector<Pair> pairs;
  std::vector<Node> nodes;
  std::vector<Arc> arcs;

  /// Verifies that realized arcs form a matching on pair nodes and that every
  /// arc links consecutive occurrences of its element. Returns an empty string
  /// on success, otherwise a description of the first problem found.
  std::string validate() const;
};

/// Sender with probability p; receivers check both in-arcs and select
/// opposite to a sender that directed its out-arc at them.
class ImprovedSelector final : public Selector {
 public:
  ImprovedSelector(double p, std::uint64_t seed);
  SelectorKind kind() const override { return SelectorKind::improved(p_); }
  std::unique_ptr<Selector> clone() const override;

  const ImprovedState& state() const { return state_; }

 protected:
  Element do_select(Pair pair, std::size_t index) override;
  void clear_state() override;

 private:
  std::int64_t& last_pair_ref(Element e);

  double p_;
  ImprovedState state_;
};

/// Throws std::domain_error for an improved kind with p outside (0, 1).
std::unique_ptr<Selector> new_selector(const SelectorKind& kind,
                                       std::uint64_t seed);

/// Splits the pairs at `indices` (all containing `element`) into maximal
/// consecutive runs and returns their lengths in sequence order. A run is
/// consecutive when it contains every pair holding `element` between its
/// first and last member.
std::vector<int> consecutive_decomposition(std::span<const Pair> pairs,
                                           Element element,
                                           std::span<const std::size_t> indices);

}  // namespace ocsmatch
