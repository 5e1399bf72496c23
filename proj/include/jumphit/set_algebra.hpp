// Exact closed sets on the line (finite unions of closed intervals, points and
// rays) and F-sigma sets (ordered finite unions of closed sets). Supports the
// three queries everything else is built on: membership, distance, and the
// closed r-enlargement {x : dist(x, F) <= r}.
#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jumphit/rational.hpp"

namespace jumphit {

// Closed interval [lo, hi]; lo may be -inf and hi may be +inf (rays),
// lo == hi encodes a single point and must be finite.
struct ClosedInterval {
  ExtRat lo;
  ExtRat hi;

  ClosedInterval(ExtRat lo_in, ExtRat hi_in) : lo(std::move(lo_in)), hi(std::move(hi_in)) {
    if (lo.is_pos_inf() || hi.is_neg_inf() || hi < lo)
      throw std::invalid_argument("malformed interval: need lo <= hi with lo < +inf, hi > -inf");
  }

  static ClosedInterval point(Rat x) {
    ExtRat e(std::move(x));
    return ClosedInterval(e, e);
  }
  static ClosedInterval ray_below(Rat hi) { return ClosedInterval(ExtRat::neg_infinity(), ExtRat(std::move(hi))); }
  static ClosedInterval ray_above(Rat lo) { return ClosedInterval(ExtRat(std::move(lo)), ExtRat::pos_infinity()); }
  static ClosedInterval whole_line() { return ClosedInterval(ExtRat::neg_infinity(), ExtRat::pos_infinity()); }

  bool contains(const Rat& x) const { return lo <= ExtRat(x) && ExtRat(x) <= hi; }

  // Distance from x to this interval; 0 inside, endpoint gap outside.
  Rat distance(const Rat& x) const {
    if (ExtRat(x) < lo) return lo.value() - x;
    if (hi < ExtRat(x)) return x - hi.value();
    return Rat(0);
  }

  // [lo - r, hi + r]; infinite endpoints stay infinite.
  ClosedInterval widened(const Rat& r) const {
    ExtRat nlo = lo.is_finite() ? ExtRat(Rat(lo.value() - r)) : lo;
    ExtRat nhi = hi.is_finite() ? ExtRat(Rat(hi.value() + r)) : hi;
    return ClosedInterval(nlo, nhi);
  }

  friend bool operator==(const ClosedInterval& a, const ClosedInterval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }

  std::string str() const { return "[" + lo.str() + ", " + hi.str() + "]"; }
};

// Sorted, pairwise disjoint, non-adjacent union of closed intervals.
// Touching closed intervals are merged by normalization, so component
// structure is canonical and membership(x) <=> distance(x) == 0.
class ClosedSet {
 public:
  ClosedSet() = default;

  // The normalize operation: sort by lo and merge whenever the next interval
  // starts at or before the current end (closed sets touching at a point form
  // one component).
  static ClosedSet normalize(std::vector<ClosedInterval> intervals) {
    std::sort(intervals.begin(), intervals.end(), [](const ClosedInterval& a, const ClosedInterval& b) {
      if (a.lo != b.lo) return a.lo < b.lo;
      return a.hi < b.hi;
    });
    std::vector<ClosedInterval> merged;
    for (auto& iv : intervals) {
      if (!merged.empty() && iv.lo <= merged.back().hi) {
        if (merged.back().hi < iv.hi) merged.back().hi = iv.hi;
      } else {
        merged.push_back(iv);
      }
    }
    ClosedSet s;
    s.intervals_ = std::move(merged);
    return s;
  }

  static ClosedSet of(std::initializer_list<ClosedInterval> intervals) {
    return normalize(std::vector<ClosedInterval>(intervals));
  }

  const std::vector<ClosedInterval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }

  bool contains(const Rat& x) const {
    // last interval with lo <= x
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), ExtRat(x),
                               [](const ExtRat& v, const ClosedInterval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    return ExtRat(x) <= it->hi;
  }

  // Exact inf |x - y| over y in the set; +inf for the empty set.
  ExtRat distance(const Rat& x) const {
    if (intervals_.empty()) return ExtRat::pos_infinity();
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), ExtRat(x),
                               [](const ExtRat& v, const ClosedInterval& iv) { return v < iv.lo; });
    std::optional<Rat> best;
    if (it != intervals_.begin()) {
      auto prev = std::prev(it);
      if (ExtRat(x) <= prev->hi) return ExtRat(Rat(0));
      best = x - prev->hi.value();  // prev->hi finite: x lies strictly above it
    }
    if (it != intervals_.end()) {
      Rat d = it->lo.value() - x;  // it->lo finite: x lies strictly below it
      if (!best || d < *best) best = d;
    }
    return ExtRat(*best);
  }

  // Closed enlargement E_r = {x : distance(x) <= r}, r > 0.
  ClosedSet enlarged(const Rat& r) const {
    if (r <= 0) throw std::invalid_argument("enlargement radius must be > 0");
    std::vector<ClosedInterval> widened;
    widened.reserve(intervals_.size());
    for (const auto& iv : intervals_) widened.push_back(iv.widened(r));
    return normalize(std::move(widened));
  }

  friend bool operator==(const ClosedSet& a, const ClosedSet& b) { return a.intervals_ == b.intervals_; }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      if (i) out += ", ";
      out += intervals_[i].str();
    }
    return out + "}";
  }

 private:
  std::vector<ClosedInterval> intervals_;
};

// Ordered finite list of closed components C_1, C_2, ... representing their
// union. `truncated` flags that the list is a finite prefix of an infinite
// union; a prefix always under-approximates, so truncation errors are
// one-sided.
struct FSigmaSet {
  std::vector<ClosedSet> components;
  bool truncated = false;

  bool contains(const Rat& x) const {
    for (const auto& c : components)
      if (c.contains(x)) return true;
    return false;
  }

  bool contains_zero() const { return contains(Rat(0)); }

  // min over components; +inf when the union is empty.
  ExtRat distance(const Rat& x) const {
    ExtRat best = ExtRat::pos_infinity();
    for (const auto& c : components) {
      ExtRat d = c.distance(x);
      if (d < best) best = d;
      if (best == ExtRat(Rat(0))) break;
    }
    return best;
  }

  // Smallest 1-based component index containing x, if any.
  std::optional<std::size_t> first_component_containing(const Rat& x) const {
    for (std::size_t k = 0; k < components.size(); ++k)
      if (components[k].contains(x)) return k + 1;
    return std::nullopt;
  }

  // The open interval (a, b) as a truncated union of K nested closed
  // intervals C_k = [a + (b-a)/(2(k+1)), b - (b-a)/(2(k+1))], k = 1..K.
  // Every x in (a, b) enters C_k once (b-a)/(2(k+1)) <= min(x-a, b-x);
  // the endpoints never do.
  static FSigmaSet open_interval(const Rat& a, const Rat& b, long K) {
    if (!(a < b)) throw std::invalid_argument("open interval needs a < b");
    if (K < 1) throw std::invalid_argument("open interval needs K >= 1");
    FSigmaSet u;
    u.truncated = true;
    u.components.reserve(static_cast<std::size_t>(K));
    Rat width = b - a;
    for (long k = 1; k <= K; ++k) {
      Rat margin = width / Rat(2 * (k + 1));
      u.components.push_back(ClosedSet::of({ClosedInterval(ExtRat(Rat(a + margin)), ExtRat(Rat(b - margin)))}));
    }
    return u;
  }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (i) out += ", ";
      out += components[i].str();
    }
    out += "}";
    if (truncated) out += "...";
    return out;
  }
};

}  // namespace jumphit
