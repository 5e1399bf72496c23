// Seeded scenario generators. Jump times live on the rational lattice
// {k/D : 0 < k/D <= horizon} and sizes are rational-valued and never zero, so
// generated paths stay exactly evaluable. The Brownian continuous part is the
// one deliberately inexact option; paths built with it carry
// exact() == false and forfeit resolution certificates downstream.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "jumphit/path_model.hpp"
#include "jumphit/random.hpp"
#include "jumphit/rational.hpp"

namespace jumphit {

// Uniform over {k/denominator : min_numerator <= k <= max_numerator, k != 0}.
struct LatticeUniformSizes {
  long denominator = 1;
  long min_numerator = -8;
  long max_numerator = 8;
};

// Weighted choice over an explicit nonzero rational support.
struct ChoiceSizes {
  std::vector<Rat> values;
  std::vector<std::uint64_t> weights;  // empty means uniform
};

using SizeSampler = std::variant<LatticeUniformSizes, ChoiceSizes>;

inline void validate(const SizeSampler& sampler) {
  if (const auto* lat = std::get_if<LatticeUniformSizes>(&sampler)) {
    if (lat->denominator < 1) throw std::invalid_argument("size lattice denominator must be >= 1");
    if (lat->min_numerator > lat->max_numerator)
      throw std::invalid_argument("size lattice numerator range is empty");
    if (lat->min_numerator == 0 && lat->max_numerator == 0)
      throw std::invalid_argument("size lattice contains only zero");
  } else {
    const auto& ch = std::get<ChoiceSizes>(sampler);
    if (ch.values.empty()) throw std::invalid_argument("size choice list is empty");
    for (const auto& v : ch.values)
      if (v == 0) throw std::invalid_argument("size choice list contains zero");
    if (!ch.weights.empty() && ch.weights.size() != ch.values.size())
      throw std::invalid_argument("size choice weights do not match values");
  }
}

inline Rat draw_size(SplitMix64& rng, const SizeSampler& sampler) {
  if (const auto* lat = std::get_if<LatticeUniformSizes>(&sampler)) {
    // count of admissible numerators, excluding 0 when it is in range
    std::uint64_t span = static_cast<std::uint64_t>(lat->max_numerator - lat->min_numerator + 1);
    bool skip_zero = lat->min_numerator <= 0 && 0 <= lat->max_numerator;
    std::uint64_t n = span - (skip_zero ? 1 : 0);
    std::uint64_t idx = rng.next_below(n);
    long k = lat->min_numerator + static_cast<long>(idx);
    if (skip_zero && k >= 0) ++k;
    return make_rat(k, lat->denominator);
  }
  const auto& ch = std::get<ChoiceSizes>(sampler);
  if (ch.weights.empty()) return ch.values[rng.next_below(ch.values.size())];
  std::uint64_t total = 0;
  for (std::uint64_t w : ch.weights) total += w;
  if (total == 0) throw std::invalid_argument("size choice weights sum to zero");
  std::uint64_t r = rng.next_below(total);
  for (std::size_t i = 0; i < ch.values.size(); ++i) {
    if (r < ch.weights[i]) return ch.values[i];
    r -= ch.weights[i];
  }
  return ch.values.back();  // unreachable
}

// Continuous-part choices.
struct ZeroContinuous {};
struct ConstantContinuous {
  Rat value;
};
struct FixedPiecewise {
  std::vector<PiecewiseLinear::Breakpoint> breakpoints;
};
// `segments` equal pieces with slopes drawn uniformly from the lattice
// {j/slope_denominator : |j/slope_denominator| <= slope_bound}. Exact, with
// Lipschitz bound <= slope_bound by construction.
struct RandomSlopes {
  Rat slope_bound;
  unsigned segments = 4;
  long slope_denominator = 4;
};
// Scaled random-walk stress part, generated in doubles (each double embeds
// exactly into the rationals, but no useful a-priori Lipschitz bound exists).
struct BrownianStress {
  double sigma = 1.0;
  unsigned steps = 64;
};

using ContinuousSpec = std::variant<ZeroContinuous, ConstantContinuous, FixedPiecewise, RandomSlopes, BrownianStress>;

inline bool is_exact(const ContinuousSpec& spec) { return !std::holds_alternative<BrownianStress>(spec); }

inline PiecewiseLinear build_continuous(SplitMix64& rng, const ContinuousSpec& spec, const Rat& horizon) {
  if (std::holds_alternative<ZeroContinuous>(spec)) return PiecewiseLinear::constant(horizon, Rat(0));
  if (const auto* c = std::get_if<ConstantContinuous>(&spec)) return PiecewiseLinear::constant(horizon, c->value);
  if (const auto* f = std::get_if<FixedPiecewise>(&spec)) {
    auto pts = f->breakpoints;
    if (!pts.empty() && pts.back().first != horizon)
      throw std::invalid_argument("fixed continuous part must end at the horizon");
    return PiecewiseLinear(std::move(pts));
  }
  if (const auto* rs = std::get_if<RandomSlopes>(&spec)) {
    if (rs->segments == 0) throw std::invalid_argument("random-slope part needs at least one segment");
    if (rs->slope_bound < 0) throw std::invalid_argument("slope bound must be >= 0");
    if (rs->slope_denominator < 1) throw std::invalid_argument("slope denominator must be >= 1");
    // admissible slope numerators: |j| <= slope_bound * den
    mpz_class top_z = floor_rat(Rat(rs->slope_bound * rs->slope_denominator));
    long top = top_z.get_si();
    std::vector<PiecewiseLinear::Breakpoint> pts;
    pts.reserve(rs->segments + 1);
    Rat value(0);
    pts.emplace_back(Rat(0), value);
    for (unsigned i = 1; i <= rs->segments; ++i) {
      long j = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(2 * top + 1))) - top;
      Rat slope = make_rat(j, rs->slope_denominator);
      Rat t_prev = horizon * Rat(i - 1) / Rat(rs->segments);
      Rat t_cur = horizon * Rat(i) / Rat(rs->segments);
      value += slope * (t_cur - t_prev);
      pts.emplace_back(t_cur, value);
    }
    return PiecewiseLinear(std::move(pts));
  }
  const auto& bs = std::get<BrownianStress>(spec);
  if (bs.steps == 0) throw std::invalid_argument("Brownian part needs at least one step");
  double dt = mpq_get_d(Rat(horizon / Rat(bs.steps)).get_mpq_t());
  double scale = bs.sigma * std::sqrt(dt);
  std::vector<PiecewiseLinear::Breakpoint> pts;
  pts.reserve(bs.steps + 1);
  double w = 0.0;
  pts.emplace_back(Rat(0), Rat(0));
  for (unsigned i = 1; i <= bs.steps; ++i) {
    w += scale * draw_gaussian(rng);
    pts.emplace_back(Rat(horizon * Rat(i) / Rat(bs.steps)), Rat(w));  // exact double -> rational embed
  }
  return PiecewiseLinear(std::move(pts));
}

struct CompoundPoissonParams {
  Rat rate;                           // jumps per unit time, > 0
  Rat horizon;                        // > 0
  SizeSampler sizes = LatticeUniformSizes{};
  std::uint64_t time_denominator = 1000;  // D: jump times drawn from {k/D}
  ContinuousSpec continuous = ZeroContinuous{};
};

// Deterministic function of (seed, params): jump count ~ Poisson(rate*horizon),
// times uniform without replacement from the lattice {k/D : 0 < k/D <= horizon},
// sizes from the sampler. Throws when the drawn count exceeds the lattice.
inline CadlagPath gen_compound_poisson(std::uint64_t seed, const CompoundPoissonParams& params) {
  if (!(params.rate > 0)) throw std::invalid_argument("rate must be > 0");
  if (!(params.horizon > 0)) throw std::invalid_argument("horizon must be > 0");
  if (params.time_denominator < 1) throw std::invalid_argument("time denominator must be >= 1");
  validate(params.sizes);

  SplitMix64 rng(seed);
  double mean = mpq_get_d(Rat(params.rate * params.horizon).get_mpq_t());
  std::uint64_t count = draw_poisson(rng, mean);

  // lattice slots k = 1..G with k/D <= horizon
  mpz_class slots_z = floor_rat(Rat(params.horizon * Rat(static_cast<long>(params.time_denominator))));
  if (!slots_z.fits_ulong_p()) throw std::invalid_argument("time lattice too large");
  std::uint64_t slots = slots_z.get_ui();
  if (count > slots)
    throw std::invalid_argument("drawn jump count " + std::to_string(count) + " exceeds time lattice size " +
                                std::to_string(slots));

  std::vector<JumpSpec> jumps;
  jumps.reserve(count);
  if (count > 0) {
    auto chosen = sample_without_replacement(rng, slots, count);
    for (std::uint64_t slot : chosen) {
      Rat time = make_rat(static_cast<long>(slot + 1), static_cast<long>(params.time_denominator));
      jumps.push_back(JumpSpec{time, draw_size(rng, params.sizes)});
    }
  }
  PiecewiseLinear cont = build_continuous(rng, params.continuous, params.horizon);
  return CadlagPath(std::move(cont), std::move(jumps), is_exact(params.continuous));
}

}  // namespace jumphit
