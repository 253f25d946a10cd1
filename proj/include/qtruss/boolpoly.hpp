#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "qtruss/errors.hpp"

namespace qtruss {

/// Index of one boolean variable (choice qubit or quadratization auxiliary).
/// Indices are dense 0..V-1 within one problem context.
using VarId = std::uint32_t;

/// A set of boolean variables, i.e. one multilinear product term.
/// Stored as a fixed-width bitmask; bit v set means variable v is a factor.
/// The empty set is the constant monomial.
class Monomial {
 public:
  static constexpr int kWords = 2;
  static constexpr VarId kMaxVars = 64 * kWords;

  constexpr Monomial() = default;

  static Monomial single(VarId v);
  static Monomial of(std::initializer_list<VarId> vars);

  bool contains(VarId v) const {
    return v < kMaxVars && (w_[v >> 6] >> (v & 63)) & 1u;
  }
  /// Set union; this is the boolean product since q*q = q.
  Monomial merged(const Monomial& o) const {
    Monomial m;
    for (int i = 0; i < kWords; ++i) m.w_[i] = w_[i] | o.w_[i];
    return m;
  }
  Monomial with(VarId v) const;
  Monomial without(VarId v) const;
  bool subset_of(const Monomial& o) const {
    for (int i = 0; i < kWords; ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  int degree() const;
  bool is_constant() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }
  /// Variable indices in ascending order.
  std::vector<VarId> vars() const;
  VarId max_var() const;  // requires !is_constant()

  std::uint64_t word(int i) const { return w_[i]; }

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::array<std::uint64_t, kWords> w_{};
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

/// Canonical term order: by degree, then lexicographically on the ascending
/// variable sequence. Serialization and internal storage both use it, so two
/// equal polynomials always serialize identically.
bool monomial_less(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  double coeff = 0.0;
  friend bool operator==(const Term&, const Term&) = default;
};

/// An assignment of boolean values to variables 0..size-1, as 0/1 bytes.
using Bits = std::vector<std::uint8_t>;

/// Exact multilinear polynomial over boolean variables: a map from monomials
/// to real coefficients. Zero coefficients are never stored and terms are
/// kept in canonical order, so evaluation and serialization are
/// deterministic. Values are immutable after construction and safe to share
/// across threads.
class BoolPoly {
 public:
  BoolPoly() = default;

  static BoolPoly zero() { return {}; }
  static BoolPoly constant(double c);
  static BoolPoly variable(VarId v);
  static BoolPoly term(const Monomial& m, double c);
  /// Accumulates duplicate monomials, prunes zeros, sorts canonically.
  static BoolPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  int degree() const;
  /// Union of all monomials.
  Monomial support() const;
  /// Number of variables referenced (support size).
  int num_vars_referenced() const { return support().degree(); }
  double coeff(const Monomial& m) const;  // 0 if absent

  /// Value at a boolean assignment. `bits` must assign every variable that
  /// appears in the polynomial, else MissingVariableError.
  double evaluate(const Bits& bits) const;
  /// Same, with the assignment packed as a monomial-style mask of the
  /// variables set to 1 over a universe of `num_vars` variables.
  double evaluate_mask(const Monomial& ones, VarId num_vars) const;

  std::string to_text() const;

  friend bool operator==(const BoolPoly&, const BoolPoly&) = default;

 private:
  friend BoolPoly add(const BoolPoly&, const BoolPoly&);
  friend BoolPoly scaled(const BoolPoly&, double);
  std::vector<Term> terms_;  // canonical order, nonzero coeffs
};

BoolPoly add(const BoolPoly& p, const BoolPoly& q);
BoolPoly sub(const BoolPoly& p, const BoolPoly& q);
/// Every coefficient multiplied by s (s = 0 gives the zero polynomial).
BoolPoly scaled(const BoolPoly& p, double s);

/// Product with idempotent reduction (x*x = x). Dispatches to a dense
/// OpenMP kernel when both operands are large and their combined support is
/// small; result is identical for any thread count.
BoolPoly mul(const BoolPoly& p, const BoolPoly& q);
/// Plain sparse reference implementation of mul, kept for tests and the
/// benchmark tool.
BoolPoly mul_serial(const BoolPoly& p, const BoolPoly& q);

inline BoolPoly operator+(const BoolPoly& p, const BoolPoly& q) { return add(p, q); }
inline BoolPoly operator-(const BoolPoly& p, const BoolPoly& q) { return sub(p, q); }
inline BoolPoly operator*(const BoolPoly& p, const BoolPoly& q) { return mul(p, q); }
inline BoolPoly operator*(const BoolPoly& p, double s) { return scaled(p, s); }
inline BoolPoly operator*(double s, const BoolPoly& p) { return scaled(p, s); }

/// Removes all monomials of more than k variables. Values at assignments of
/// Hamming weight <= k are unchanged.
BoolPoly truncate_above_order(const BoolPoly& p, int k);
/// Removes coefficients with |c| < eps.
BoolPoly truncate_below_magnitude(const BoolPoly& p, double eps);
/// Largest |coefficient|; EmptyPolynomialError on the zero polynomial.
double max_abs_coeff(const BoolPoly& p);

/// Numerator/denominator pair of multilinear polynomials. Value at an
/// assignment a is num(a)/den(a), defined only where den(a) != 0.
struct RationalExpr {
  BoolPoly num;
  BoolPoly den;

  double evaluate(const Bits& bits) const;
};

}  // namespace qtruss
