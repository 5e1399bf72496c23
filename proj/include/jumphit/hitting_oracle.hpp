// Ground truth for T = inf{t >= 0 : jump_size(t) in U} read directly off the
// explicit jump list. Off jump times the jump process is zero, and non-jump
// times are dense at 0, so T is identically 0 as soon as U contains zero;
// otherwise T is the earliest listed jump whose size lies in U, or +inf.
#pragma once

#include <optional>
#include <stdexcept>

#include "jumphit/path_model.hpp"
#include "jumphit/set_algebra.hpp"

namespace jumphit {

enum class HitBranch { zero_in_U, jump_hit, never };

inline const char* branch_name(HitBranch b) {
  switch (b) {
    case HitBranch::zero_in_U: return "zero_in_U";
    case HitBranch::jump_hit: return "jump_hit";
    default: return "never";
  }
}

struct HittingResult {
  ExtRat time;                                 // rational or +inf
  HitBranch branch;
  std::optional<std::size_t> component_index;  // 1-based; only for jump_hit
};

inline HittingResult first_hitting_time(const CadlagPath& path, const FSigmaSet& target) {
  if (target.contains_zero()) return HittingResult{ExtRat(Rat(0)), HitBranch::zero_in_U, std::nullopt};
  for (const auto& jump : path.jumps()) {
    if (auto k = target.first_component_containing(jump.size))
      return HittingResult{ExtRat(jump.time), HitBranch::jump_hit, k};
  }
  return HittingResult{ExtRat::pos_infinity(), HitBranch::never, std::nullopt};
}

// The event (T < t). Strict: a jump exactly at t does not count.
inline bool event_before(const CadlagPath& path, const FSigmaSet& target, const Rat& t) {
  if (!(t > 0) || t > path.horizon()) throw std::invalid_argument("event horizon t must lie in (0, horizon]");
  return first_hitting_time(path, target).time < ExtRat(t);
}

struct HitWitness {
  Rat time;
  std::size_t component_index;  // 1-based, smallest component containing the size
};

// Earliest jump in (0, t) whose size lies in U; absent when the event is
// false or was decided by the zero branch.
inline std::optional<HitWitness> hit_witness(const CadlagPath& path, const FSigmaSet& target, const Rat& t) {
  if (!(t > 0) || t > path.horizon()) throw std::invalid_argument("event horizon t must lie in (0, horizon]");
  if (target.contains_zero()) return std::nullopt;
  for (const auto& jump : path.jumps()) {
    if (!(jump.time < t)) break;
    if (auto k = target.first_component_containing(jump.size)) return HitWitness{jump.time, *k};
  }
  return std::nullopt;
}

}  // namespace jumphit
