#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace ocsmatch {

/// A nonnegative count that may be infinite; infinity absorbs increments.
class ExtendedCount {
 public:
  constexpr ExtendedCount() = default;
  constexpr ExtendedCount(int n) : n_(n) {}  // NOLINT: counts convert freely

  static constexpr ExtendedCount infinity() {
    ExtendedCount c;
    c.n_ = kInfinite;
    return c;
  }

  constexpr bool is_infinite() const { return n_ == kInfinite; }
  constexpr bool is_finite() const { return n_ != kInfinite; }
  /// Finite value; meaningless for infinity.
  constexpr int value() const { return n_; }

  constexpr ExtendedCount next() const {
    return is_infinite() ? *this : ExtendedCount(n_ + 1);
  }

  friend constexpr auto operator<=>(ExtendedCount, ExtendedCount) = default;

  friend std::ostream& operator<<(std::ostream& out, ExtendedCount c) {
    if (c.is_infinite()) return out << "inf";
    return out << c.n_;
  }

 private:
  static constexpr int kInfinite = std::numeric_limits<int>::max();
  int n_ = 0;
};

/// Piecewise-constant function of the weight-level w > 0. Piece t holds its
/// value on (upper[t-1], upper[t]] with upper[-1] = 0; beyond the last
/// breakpoint the function equals `neutral`.
template <class T>
class StepFunction {
 public:
  struct Piece {
    double upper;
    T value;
  };

  StepFunction() = default;
  explicit StepFunction(T neutral) : neutral_(std::move(neutral)) {}

  const T& neutral() const { return neutral_; }
  std::span<const Piece> pieces() const { return pieces_; }
  std::span<Piece> mutable_pieces() { return pieces_; }
  std::size_t size() const { return pieces_.size(); }

  /// Value at weight-level w > 0.
  const T& at(double w) const {
    auto it = std::lower_bound(
        pieces_.begin(), pieces_.end(), w,
        [](const Piece& p, double x) { return p.upper < x; });
    return it == pieces_.end() ? neutral_ : it->value;
  }

  /// Makes w a breakpoint without changing the function. w must be a finite
  /// positive level.
  void split_at(double w) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("breakpoint must be finite and positive");
    }
    auto it = std::lower_bound(
        pieces_.begin(), pieces_.end(), w,
        [](const Piece& p, double x) { return p.upper < x; });
    if (it != pieces_.end() && it->upper == w) return;
    const T value = (it == pieces_.end()) ? neutral_ : it->value;
    pieces_.insert(it, Piece{w, value});
  }

  std::vector<double> breakpoints() const {
    std::vector<double> out;
    out.reserve(pieces_.size());
    for (const Piece& p : pieces_) out.push_back(p.upper);
    return out;
  }

  /// Exact integral of proj(value) over (lo, hi]; hi may be +infinity when
  /// proj(neutral) is zero.
  template <class Proj>
  double integrate(double lo, double hi, Proj proj) const {
    double total = 0.0;
    double left = 0.0;
    for (const Piece& p : pieces_) {
      const double a = std::max(left, lo);
      const double b = std::min(p.upper, hi);
      if (b > a) total += (b - a) * static_cast<double>(proj(p.value));
      left = p.upper;
      if (left >= hi) return total;
    }
    const double a = std::max(left, lo);
    if (hi > a) {
      const double tail = static_cast<double>(proj(neutral_));
      if (tail != 0.0) total += (hi - a) * tail;
    }
    return total;
  }

  template <class Proj>
  double integrate(Proj proj) const {
    return integrate(0.0, std::numeric_limits<double>::infinity(), proj);
  }

 private:
  T neutral_{};
  std::vector<Piece> pieces_;
};

}  // namespace ocsmatch
