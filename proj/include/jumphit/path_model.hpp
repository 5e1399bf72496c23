// Finite-activity cadlag paths over [0, horizon]: an exact piecewise-linear
// continuous part plus a sorted finite jump list at rational times in
// (0, horizon]. Right-continuity and the no-jump-at-zero convention hold by
// construction, so eval/left_limit/jump_size are total and exact.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jumphit/rational.hpp"

namespace jumphit {

struct JumpSpec {
  Rat time;  // in (0, horizon]; a jump exactly at 0 is excluded by convention
  Rat size;  // never 0
};

// Continuous piecewise-linear function on [0, horizon] given by breakpoints
// with strictly increasing rational times; first time 0, last time = horizon.
class PiecewiseLinear {
 public:
  using Breakpoint = std::pair<Rat, Rat>;  // (time, value)

  explicit PiecewiseLinear(std::vector<Breakpoint> breakpoints) : points_(std::move(breakpoints)) {
    if (points_.size() < 2) throw std::invalid_argument("piecewise-linear part needs at least two breakpoints");
    if (points_.front().first != 0) throw std::invalid_argument("first breakpoint time must be 0");
    for (std::size_t i = 1; i < points_.size(); ++i)
      if (!(points_[i - 1].first < points_[i].first))
        throw std::invalid_argument("breakpoint times must be strictly increasing");
    if (!(points_.back().first > 0)) throw std::invalid_argument("horizon must be positive");
  }

  static PiecewiseLinear constant(const Rat& horizon, const Rat& value) {
    return PiecewiseLinear({{Rat(0), value}, {horizon, value}});
  }

  const Rat& horizon() const { return points_.back().first; }
  const std::vector<Breakpoint>& breakpoints() const { return points_; }

  Rat eval(const Rat& t) const {
    if (t < 0 || t > horizon()) throw std::out_of_range("evaluation time outside [0, horizon]");
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](const Rat& v, const Breakpoint& b) { return v < b.first; });
    if (it == points_.begin()) return points_.front().second;  // t == 0 with upper_bound quirk-proofing
    auto hi = (it == points_.end()) ? std::prev(it) : it;
    auto lo = std::prev(hi);
    if (t == lo->first) return lo->second;
    const Rat& t0 = lo->first;
    const Rat& t1 = hi->first;
    return lo->second + (hi->second - lo->second) * (t - t0) / (t1 - t0);
  }

  // Max |slope| over segments; the exact Lipschitz constant.
  Rat lipschitz_bound() const {
    Rat best(0);
    for (std::size_t i = 1; i < points_.size(); ++i) {
      Rat slope = rat_abs((points_[i].second - points_[i - 1].second) / (points_[i].first - points_[i - 1].first));
      if (slope > best) best = slope;
    }
    return best;
  }

 private:
  std::vector<Breakpoint> points_;
};

class CadlagPath {
 public:
  // Jumps may arrive unsorted; they are sorted here. Times must be distinct,
  // in (0, horizon], sizes nonzero. `exact_provenance` is false for paths
  // whose continuous part came out of floating-point generation; values are
  // still exact rationals, but resolution certificates are withheld.
  CadlagPath(PiecewiseLinear continuous, std::vector<JumpSpec> jumps, bool exact_provenance = true)
      : continuous_(std::move(continuous)), jumps_(std::move(jumps)), exact_(exact_provenance) {
    std::sort(jumps_.begin(), jumps_.end(), [](const JumpSpec& a, const JumpSpec& b) { return a.time < b.time; });
    const Rat& h = continuous_.horizon();
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
      if (!(jumps_[i].time > 0) || jumps_[i].time > h)
        throw std::invalid_argument("jump time outside (0, horizon]");
      if (jumps_[i].size == 0) throw std::invalid_argument("zero-size entries are not jumps");
      if (i > 0 && jumps_[i].time == jumps_[i - 1].time)
        throw std::invalid_argument("jump times must be distinct");
    }
    prefix_.reserve(jumps_.size() + 1);
    prefix_.emplace_back(0);
    for (const auto& j : jumps_) prefix_.push_back(prefix_.back() + j.size);
  }

  const Rat& horizon() const { return continuous_.horizon(); }
  const PiecewiseLinear& continuous() const { return continuous_; }
  const std::vector<JumpSpec>& jumps() const { return jumps_; }
  bool exact() const { return exact_; }

  // X_t: continuous part plus all jumps with time <= t (right-continuous).
  Rat eval(const Rat& t) const { return continuous_.eval(t) + jump_sum_where(t, true); }

  // X_{t-}: jumps with time < t only; at t == 0 equals eval(0) (X_{0-} = X_0).
  Rat left_limit(const Rat& t) const { return continuous_.eval(t) + jump_sum_where(t, false); }

  // Delta X_t = X_t - X_{t-}: the listed size at jump times, 0 elsewhere and at 0.
  Rat jump_size(const Rat& t) const {
    if (t < 0 || t > horizon()) throw std::out_of_range("evaluation time outside [0, horizon]");
    auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                               [](const JumpSpec& j, const Rat& v) { return j.time < v; });
    if (it != jumps_.end() && it->time == t) return it->size;
    return Rat(0);
  }

  Rat lipschitz_bound() const { return continuous_.lipschitz_bound(); }

  // Min over consecutive jump gaps, the first jump's distance to 0, and the
  // last jump's distance to the horizon (omitted for a jump sitting exactly
  // at the horizon, which no event horizon t <= horizon can see). +inf when
  // jump-free. Always > 0.
  ExtRat min_jump_gap() const {
    if (jumps_.empty()) return ExtRat::pos_infinity();
    Rat best = jumps_.front().time;
    for (std::size_t i = 1; i < jumps_.size(); ++i) {
      Rat gap = jumps_[i].time - jumps_[i - 1].time;
      if (gap < best) best = gap;
    }
    if (jumps_.back().time < horizon()) {
      Rat tail = horizon() - jumps_.back().time;
      if (tail < best) best = tail;
    }
    return ExtRat(best);
  }

 private:
  Rat jump_sum_where(const Rat& t, bool inclusive) const {
    if (t < 0 || t > horizon()) throw std::out_of_range("evaluation time outside [0, horizon]");
    std::size_t idx;
    if (inclusive) {
      auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                                 [](const Rat& v, const JumpSpec& j) { return v < j.time; });
      idx = static_cast<std::size_t>(it - jumps_.begin());
    } else {
      auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                                 [](const JumpSpec& j, const Rat& v) { return j.time < v; });
      idx = static_cast<std::size_t>(it - jumps_.begin());
    }
    return prefix_[idx];
  }

  PiecewiseLinear continuous_;
  std::vector<JumpSpec> jumps_;
  std::vector<Rat> prefix_;  // prefix_[k] = sum of first k jump sizes
  bool exact_;
};

}  // namespace jumphit
