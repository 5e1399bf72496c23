// Finite-grid evaluation of the increment characterization of the event
// (T < t): level n accepts when some rational pair p < q strictly inside
// (0, t) with q - p <= 1/n has X_q - X_p in the closed 1/n-enlargement of the
// target closed set; the event verdict is the AND over levels n = 1..N (per
// closed component, OR over components of an F-sigma target).
//
// The grid is the uniform lattice {k*t/m : k = 1..m-1}. Two certificates make
// the finite truncation quantitative for exact paths:
//   required_resolution - a per-level m such that any in-target jump in (0,t)
//     is provably caught by an adjacent straddling pair (the spacing keeps
//     the continuous drift within 1/2n and isolates the jump);
//   rejection_level - an n* such that, when every jump size and 0 sit at
//     distance >= d from the target and windows of width 1/n* isolate jumps,
//     every windowed increment stays farther than 1/n* from the target, so
//     level n* rejects on every grid.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jumphit/path_model.hpp"
#include "jumphit/rational.hpp"
#include "jumphit/set_algebra.hpp"

namespace jumphit {

// Index set truncation: level n, resolution m, grid points k*t/m strictly
// inside (0, t).
struct GridSpec {
  Rat t;
  long n;
  long m;

  GridSpec(Rat t_in, long n_in, long m_in) : t(std::move(t_in)), n(n_in), m(m_in) {
    if (!(t > 0)) throw std::invalid_argument("grid horizon t must be > 0");
    if (n < 1) throw std::invalid_argument("grid level n must be >= 1");
    if (m < 2) throw std::invalid_argument("grid resolution m must be >= 2");
  }

  Rat point(long k) const { return t * Rat(k) / Rat(m); }

  // Largest index gap with (j - i) * t/m <= 1/n, capped at m-2 (the widest
  // pair the interior grid admits). Zero means the pair set is empty.
  long max_index_gap() const {
    mpz_class w = floor_rat(Rat(m) / (Rat(n) * t));
    mpz_class cap(m - 2);
    if (w > cap) w = cap;
    if (w < 0) w = 0;
    return static_cast<long>(w.get_si());
  }

  std::uint64_t pair_count() const {
    long M = m - 1;  // interior points
    long w = max_index_gap();
    if (M < 2 || w < 1) return 0;
    std::uint64_t wu = static_cast<std::uint64_t>(w);
    std::uint64_t Mu = static_cast<std::uint64_t>(M);
    return wu * (Mu - wu) + wu * (wu - 1) / 2;
  }
};

// Lazy enumeration of the grid pairs (p, q) = (i*t/m, j*t/m) with
// 1 <= i < j <= m-1 and j - i <= max_index_gap, in increasing (i, j) order.
// A sliding window over indices; the O(m^2) pair set is never materialized.
class ThetaPairs {
 public:
  explicit ThetaPairs(GridSpec spec) : spec_(std::move(spec)), w_(spec_.max_index_gap()) {}

  struct IndexPair {
    long i;
    long j;
  };

  class iterator {
   public:
    iterator(const ThetaPairs* parent, long i, long j) : parent_(parent), i_(i), j_(j) {}
    IndexPair operator*() const { return IndexPair{i_, j_}; }
    iterator& operator++() {
      ++j_;
      if (j_ > parent_->j_limit(i_)) {
        ++i_;
        j_ = i_ + 1;
        if (i_ > parent_->i_limit() || j_ > spec_ref().m - 1) {
          i_ = -1;  // end sentinel
          j_ = -1;
        }
      }
      return *this;
    }
    bool operator==(const iterator& other) const { return i_ == other.i_ && j_ == other.j_; }
    bool operator!=(const iterator& other) const { return !(*this == other); }

   private:
    const GridSpec& spec_ref() const { return parent_->spec_; }
    const ThetaPairs* parent_;
    long i_;
    long j_;
  };

  iterator begin() const {
    if (w_ < 1 || spec_.m < 3) return end();
    return iterator(this, 1, 2);
  }
  iterator end() const { return iterator(this, -1, -1); }

  const GridSpec& spec() const { return spec_; }
  std::uint64_t count() const { return spec_.pair_count(); }

 private:
  friend class iterator;
  long i_limit() const { return spec_.m - 2; }  // last i that still admits j = i+1
  long j_limit(long i) const { return std::min<long>(spec_.m - 1, i + w_); }

  GridSpec spec_;
  long w_;
};

struct Witness {
  Rat p;
  Rat q;
  Rat increment;
};

// Verdict of one level: accepted iff some pair increment lies in the
// enlargement E_n = enlarge(F, 1/n). Witness is the first in enumeration
// order, which makes reruns bit-reproducible.
struct LevelVerdict {
  long n = 0;
  long m = 0;
  bool accepted = false;
  std::optional<Witness> witness;
  ClosedSet enlargement_used;
  std::uint64_t pair_count = 0;
  std::uint64_t pairs_tested = 0;
  bool vacuous = false;  // empty pair set; counts as rejection with diagnostic
};

struct DetectorVerdict {
  std::vector<LevelVerdict> levels;
  bool overall = false;
  std::optional<long> first_reject_level;

  std::uint64_t pairs_tested_total() const {
    std::uint64_t s = 0;
    for (const auto& lv : levels) s += lv.pairs_tested;
    return s;
  }
};

// Grid path values shared across levels (and components) that reuse a
// resolution; keyed by m for a fixed (path, t).
class GridValueCache {
 public:
  GridValueCache(const CadlagPath& path, Rat t) : path_(&path), t_(std::move(t)) {}

  const std::vector<Rat>& values(long m) {
    for (auto& entry : cache_)
      if (entry.first == m) return entry.second;
    std::vector<Rat> vals;
    vals.reserve(static_cast<std::size_t>(m - 1));
    for (long k = 1; k <= m - 1; ++k) vals.push_back(path_->eval(t_ * Rat(k) / Rat(m)));
    cache_.emplace_back(m, std::move(vals));
    return cache_.back().second;
  }

 private:
  const CadlagPath* path_;
  Rat t_;
  std::vector<std::pair<long, std::vector<Rat>>> cache_;
};

inline LevelVerdict detect_level(const CadlagPath& path, const ClosedSet& target, const GridSpec& spec,
                                 GridValueCache* cache = nullptr) {
  if (spec.t > path.horizon()) throw std::invalid_argument("grid horizon exceeds path horizon");
  LevelVerdict verdict;
  verdict.n = spec.n;
  verdict.m = spec.m;
  verdict.enlargement_used = target.empty() ? target : target.enlarged(make_rat(1, spec.n));
  verdict.pair_count = spec.pair_count();
  if (verdict.pair_count == 0) {
    verdict.vacuous = true;
    return verdict;
  }
  if (target.empty()) {
    verdict.pairs_tested = 0;  // nothing can land in an empty set
    return verdict;
  }

  GridValueCache local(path, spec.t);
  GridValueCache& store = cache ? *cache : local;
  const std::vector<Rat>& values = store.values(spec.m);  // values[k-1] = X(k*t/m)

  ThetaPairs pairs{spec};
  for (auto it = pairs.begin(); it != pairs.end(); ++it) {
    auto [i, j] = *it;
    ++verdict.pairs_tested;
    Rat increment = values[static_cast<std::size_t>(j - 1)] - values[static_cast<std::size_t>(i - 1)];
    if (verdict.enlargement_used.contains(increment)) {
      verdict.accepted = true;
      verdict.witness = Witness{spec.point(i), spec.point(j), std::move(increment)};
      break;
    }
  }
  return verdict;
}

// Resolution schedule: level n -> grid resolution m(n).
using Schedule = std::function<long(long)>;

inline Schedule make_base_schedule(long m) {
  if (m < 2) throw std::invalid_argument("base schedule resolution must be >= 2");
  return [m](long) { return m; };
}

inline Schedule make_custom_schedule(std::vector<long> ms) {
  if (ms.empty()) throw std::invalid_argument("custom schedule must list at least one resolution");
  for (long m : ms)
    if (m < 2) throw std::invalid_argument("custom schedule resolutions must be >= 2");
  return [ms = std::move(ms)](long n) {
    if (n < 1 || static_cast<std::size_t>(n) > ms.size())
      throw std::out_of_range("custom schedule has no resolution for this level");
    return ms[static_cast<std::size_t>(n - 1)];
  };
}

// Evaluate levels 1..N; overall = every level accepted. Rejections
// short-circuit unless full_sweep asks for the complete level profile.
inline DetectorVerdict detect(const CadlagPath& path, const ClosedSet& target, const Rat& t, long N,
                              const Schedule& schedule, bool full_sweep = false,
                              GridValueCache* cache = nullptr) {
  if (N < 1) throw std::invalid_argument("level count N must be >= 1");
  DetectorVerdict verdict;
  verdict.overall = true;
  for (long n = 1; n <= N; ++n) {
    LevelVerdict lv = detect_level(path, target, GridSpec(t, n, schedule(n)), cache);
    bool ok = lv.accepted;
    verdict.levels.push_back(std::move(lv));
    if (!ok) {
      verdict.overall = false;
      if (!verdict.first_reject_level) verdict.first_reject_level = n;
      if (!full_sweep) break;
    }
  }
  return verdict;
}

// Per-component verdicts for an F-sigma target; overall = OR over components.
struct FSigmaVerdict {
  std::vector<DetectorVerdict> components;
  bool overall = false;

  std::uint64_t pairs_tested_total() const {
    std::uint64_t s = 0;
    for (const auto& c : components) s += c.pairs_tested_total();
    return s;
  }
  std::uint64_t levels_run_total() const {
    std::uint64_t s = 0;
    for (const auto& c : components) s += c.levels.size();
    return s;
  }
  // Deepest first-reject over components (max), if every component rejected
  // somewhere; components that never rejected leave it empty.
  std::optional<long> first_reject_level() const {
    std::optional<long> worst;
    for (const auto& c : components) {
      if (!c.first_reject_level) return std::nullopt;
      worst = worst ? std::max(*worst, *c.first_reject_level) : *c.first_reject_level;
    }
    return worst;
  }
};

inline FSigmaVerdict detect_fsigma(const CadlagPath& path, const FSigmaSet& target, const Rat& t, long N,
                                   const Schedule& schedule, bool full_sweep = false) {
  // No components means an empty union: nothing can be hit, overall false.
  GridValueCache cache(path, t);
  FSigmaVerdict verdict;
  for (const ClosedSet& component : target.components) {
    DetectorVerdict dv = detect(path, component, t, N, schedule, full_sweep, &cache);
    verdict.overall = verdict.overall || dv.overall;
    verdict.components.push_back(std::move(dv));
  }
  return verdict;
}

// Tightest spacing constraint visible before t: distance from 0 to the first
// jump, consecutive jump gaps, and the tail gap to t itself, over jumps
// strictly before t. +inf when (0, t) holds no jumps. This is what adjacent
// straddling pairs must resolve; jumps at or after t never enter a window.
inline ExtRat effective_jump_gap(const CadlagPath& path, const Rat& t) {
  if (!(t > 0) || t > path.horizon()) throw std::invalid_argument("t must lie in (0, horizon]");
  ExtRat gap = ExtRat::pos_infinity();
  const Rat* prev = nullptr;
  for (const JumpSpec& jump : path.jumps()) {
    if (!(jump.time < t)) break;  // jumps are sorted
    Rat d = prev ? Rat(jump.time - *prev) : jump.time;
    gap = min(gap, ExtRat(d));
    prev = &jump.time;
  }
  if (prev) gap = min(gap, ExtRat(Rat(t - *prev)));
  return gap;
}

// Smallest m with grid spacing t/m <= min(1/(2n*max(L,1)), g/2) where L is
// the continuous Lipschitz bound and g the effective jump gap before t:
// m = ceil(t * max(2n*max(L,1), 2/g)), floored at 2 so the grid has interior
// points. At this resolution every jump before t is straddled by an adjacent
// isolated pair whose increment sits within 1/2n of the jump size.
inline long required_resolution(const CadlagPath& path, const Rat& t, long n) {
  if (n < 1) throw std::invalid_argument("level n must be >= 1");
  if (!(t > 0) || t > path.horizon()) throw std::invalid_argument("t must lie in (0, horizon]");
  if (!path.exact())
    throw std::domain_error("resolution certificate requires an exactly-represented path");
  Rat L = path.lipschitz_bound();
  if (L < 1) L = 1;
  Rat rate = Rat(2 * n) * L;
  ExtRat gap = effective_jump_gap(path, t);
  if (gap.is_finite()) {
    Rat gap_rate = Rat(2) / gap.value();
    if (gap_rate > rate) rate = gap_rate;
  }
  long out = static_cast<long>(ceil_rat(t * rate).get_si());
  return std::max<long>(out, 2);
}

// Overload matching the certificate's statement: the bound is uniform over
// closed targets, so the set parameter only documents scope.
inline long required_resolution(const CadlagPath& path, const ClosedSet&, const Rat& t, long n) {
  return required_resolution(path, t, n);
}

// Guaranteed schedule: enough resolution for the completeness certificate and
// never so coarse that levels go vacuous (m >= 2*ceil(t*n) + 2 keeps adjacent
// pairs inside the width-1/n window).
inline Schedule make_guaranteed_schedule(const CadlagPath& path, const Rat& t) {
  if (!path.exact())
    throw std::domain_error("guaranteed schedule requires an exactly-represented path");
  return [&path, t](long n) {
    long nonvacuous = 2 * static_cast<long>(ceil_rat(t * Rat(n)).get_si()) + 2;
    return std::max(required_resolution(path, t, n), nonvacuous);
  };
}

// Certificate that some level must reject. Exists when every jump size before
// t, and 0 (the small-window increment limit), keep distance >= d > 0 from
// the target; then n* = floor((L+1)/d) + 1 rejects on any grid provided
// width-1/n* windows isolate jumps (inter-jump gaps before t exceed 1/n*).
struct RejectionBound {
  long level;      // n* certified to reject
  ExtRat margin;   // the distance d the bound was computed from
  bool isolated;   // whether the isolation hypothesis holds at n*
};

inline std::optional<RejectionBound> rejection_level(const CadlagPath& path, const FSigmaSet& target,
                                                     const Rat& t) {
  if (!(t > 0) || t > path.horizon()) throw std::invalid_argument("t must lie in (0, horizon]");
  if (!path.exact())
    throw std::domain_error("rejection certificate requires an exactly-represented path");
  ExtRat d = target.distance(Rat(0));
  ExtRat inter_gap = ExtRat::pos_infinity();
  const Rat* prev = nullptr;
  for (const JumpSpec& jump : path.jumps()) {
    if (!(jump.time < t)) break;
    d = min(d, target.distance(jump.size));
    if (prev) inter_gap = min(inter_gap, ExtRat(Rat(jump.time - *prev)));
    prev = &jump.time;
  }
  if (d == ExtRat(Rat(0))) return std::nullopt;  // no margin, nothing to certify

  long level = 1;
  if (d.is_finite()) {
    Rat ratio = (path.lipschitz_bound() + Rat(1)) / d.value();
    level = static_cast<long>(floor_rat(ratio).get_si()) + 1;
  }
  bool isolated = inter_gap > ExtRat(make_rat(1, level));
  return RejectionBound{level, d, isolated};
}

}  // namespace jumphit
