// Exact rational scalar type and the extended line (rationals plus +/-infinity).
// All set endpoints, path values and grid times in this library are mpq_class
// rationals, so membership and comparison are decidable with no tolerance knob.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jumphit {

using Rat = mpq_class;

// Canonical "p/q" (or "p" when q == 1) form. Never decimal.
inline std::string rat_str(const Rat& x) { return x.get_str(); }

inline Rat make_rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p", "-p", or "p/q". Decimal notation is rejected: exactness must
// survive serialization, and "0.5" is ambiguous about intent.
inline Rat parse_rat(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::string s(text);
  if (s.find('.') != std::string::npos)
    throw std::invalid_argument("decimal notation not accepted for exact rational: '" + s + "'");
  mpq_class r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal: '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("rational with zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

inline mpz_class floor_rat(const Rat& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline mpz_class ceil_rat(const Rat& x) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// A rational extended with -inf/+inf. Used for interval endpoints (rays),
// distances to possibly-empty sets, and jump gaps of jump-free paths.
class ExtRat {
 public:
  enum class Kind : std::uint8_t { neg_inf, finite, pos_inf };

  ExtRat() : kind_(Kind::finite), value_(0) {}
  ExtRat(Rat v) : kind_(Kind::finite), value_(std::move(v)) {}  // NOLINT: implicit by design
  ExtRat(long v) : kind_(Kind::finite), value_(v) {}            // NOLINT

  static ExtRat pos_infinity() { return ExtRat(Kind::pos_inf); }
  static ExtRat neg_infinity() { return ExtRat(Kind::neg_inf); }

  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  const Rat& value() const {
    if (!is_finite()) throw std::domain_error("value() on infinite ExtRat");
    return value_;
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::finite || a.value_ == b.value_;
  }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ == Kind::neg_inf) return b.kind_ != Kind::neg_inf;
    if (a.kind_ == Kind::pos_inf) return false;
    if (b.kind_ == Kind::pos_inf) return true;
    if (b.kind_ == Kind::neg_inf) return false;
    return a.value_ < b.value_;
  }
  friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return !(b < a); }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return !(a < b); }

  std::string str() const {
    switch (kind_) {
      case Kind::neg_inf: return "-inf";
      case Kind::pos_inf: return "+inf";
      default: return value_.get_str();
    }
  }

 private:
  explicit ExtRat(Kind k) : kind_(k), value_(0) {}
  Kind kind_;
  Rat value_;
};

inline ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }

}  // namespace jumphit
