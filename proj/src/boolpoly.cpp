#include "qtruss/boolpoly.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace qtruss {

Monomial Monomial::single(VarId v) { return Monomial().with(v); }

Monomial Monomial::of(std::initializer_list<VarId> vars) {
  Monomial m;
  for (VarId v : vars) m = m.with(v);
  return m;
}

Monomial Monomial::with(VarId v) const {
  if (v >= kMaxVars) throw Error("variable index " + std::to_string(v) + " exceeds monomial capacity");
  Monomial m = *this;
  m.w_[v >> 6] |= std::uint64_t(1) << (v & 63);
  return m;
}

Monomial Monomial::without(VarId v) const {
  Monomial m = *this;
  if (v < kMaxVars) m.w_[v >> 6] &= ~(std::uint64_t(1) << (v & 63));
  return m;
}

int Monomial::degree() const {
  int d = 0;
  for (auto w : w_) d += std::popcount(w);
  return d;
}

std::vector<VarId> Monomial::vars() const {
  std::vector<VarId> out;
  out.reserve(degree());
  for (int i = 0; i < kWords; ++i) {
    std::uint64_t w = w_[i];
    while (w) {
      out.push_back(VarId(i * 64 + std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

VarId Monomial::max_var() const {
  for (int i = kWords - 1; i >= 0; --i)
    if (w_[i]) return VarId(i * 64 + 63 - std::countl_zero(w_[i]));
  throw Error("max_var of constant monomial");
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < Monomial::kWords; ++i) {
    std::uint64_t x = m.word(i) + 0xbf58476d1ce4e5b9ull * (i + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return std::size_t(h);
}

bool monomial_less(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  // Lexicographic on ascending variable sequences: the smaller first
  // differing variable wins.
  for (int i = 0; i < Monomial::kWords; ++i) {
    std::uint64_t diff = a.word(i) ^ b.word(i);
    if (diff) {
      std::uint64_t low = diff & ~(diff - 1);
      return a.word(i) & low;
    }
  }
  return false;
}

namespace {

bool term_less(const Term& a, const Term& b) { return monomial_less(a.mono, b.mono); }

BoolPoly make_canonical(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_less);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const Term& t : terms) {
    if (!out.empty() && out.back().mono == t.mono)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const Term& t) { return t.coeff == 0.0; });
  return BoolPoly::from_terms(std::move(out));
}

}  // namespace

BoolPoly BoolPoly::constant(double c) { return term(Monomial(), c); }

BoolPoly BoolPoly::variable(VarId v) { return term(Monomial::single(v), 1.0); }

BoolPoly BoolPoly::term(const Monomial& m, double c) {
  BoolPoly p;
  if (c != 0.0) p.terms_.push_back({m, c});
  return p;
}

BoolPoly BoolPoly::from_terms(std::vector<Term> terms) {
  bool sorted = true;
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    if (!term_less(terms[i], terms[i + 1])) {
      sorted = false;
      break;
    }
  }
  if (!sorted) return make_canonical(std::move(terms));
  std::erase_if(terms, [](const Term& t) { return t.coeff == 0.0; });
  BoolPoly p;
  p.terms_ = std::move(terms);
  return p;
}

int BoolPoly::degree() const {
  // Canonical order is degree-major, so the last term has maximal degree.
  return terms_.empty() ? 0 : terms_.back().mono.degree();
}

Monomial BoolPoly::support() const {
  Monomial s;
  for (const Term& t : terms_) s = s.merged(t.mono);
  return s;
}

double BoolPoly::coeff(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{m, 0.0}, term_less);
  if (it != terms_.end() && it->mono == m) return it->coeff;
  return 0.0;
}

double BoolPoly::evaluate(const Bits& bits) const {
  Monomial ones;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) ones = ones.with(VarId(i));
  return evaluate_mask(ones, VarId(bits.size()));
}

double BoolPoly::evaluate_mask(const Monomial& ones, VarId num_vars) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    if (!t.mono.is_constant() && t.mono.max_var() >= num_vars)
      throw MissingVariableError("assignment does not cover variable " +
                                 std::to_string(t.mono.max_var()));
    if (t.mono.subset_of(ones)) sum += t.coeff;
  }
  return sum;
}

std::string BoolPoly::to_text() const {
  std::string out;
  char buf[64];
  for (const Term& t : terms_) {
    std::snprintf(buf, sizeof(buf), "%.17g\t", t.coeff);
    out += buf;
    if (t.mono.is_constant()) {
      out += "1";
    } else {
      bool first = true;
      for (VarId v : t.mono.vars()) {
        if (!first) out += "*";
        out += "v" + std::to_string(v);
        first = false;
      }
    }
    out += "\n";
  }
  return out;
}

BoolPoly add(const BoolPoly& p, const BoolPoly& q) {
  std::vector<Term> out;
  out.reserve(p.terms_.size() + q.terms_.size());
  auto a = p.terms_.begin(), ae = p.terms_.end();
  auto b = q.terms_.begin(), be = q.terms_.end();
  while (a != ae && b != be) {
    if (a->mono == b->mono) {
      double c = a->coeff + b->coeff;
      if (c != 0.0) out.push_back({a->mono, c});
      ++a, ++b;
    } else if (monomial_less(a->mono, b->mono)) {
      out.push_back(*a++);
    } else {
      out.push_back(*b++);
    }
  }
  out.insert(out.end(), a, ae);
  out.insert(out.end(), b, be);
  BoolPoly r;
  r.terms_ = std::move(out);
  return r;
}

BoolPoly sub(const BoolPoly& p, const BoolPoly& q) { return add(p, scaled(q, -1.0)); }

BoolPoly scaled(const BoolPoly& p, double s) {
  if (s == 0.0) return {};
  BoolPoly r;
  r.terms_ = p.terms_;
  for (Term& t : r.terms_) t.coeff *= s;
  return r;
}

BoolPoly mul_serial(const BoolPoly& p, const BoolPoly& q) {
  std::unordered_map<Monomial, double, MonomialHash> acc;
  acc.reserve(p.term_count() * 2 + q.term_count());
  for (const Term& a : p.terms())
    for (const Term& b : q.terms()) acc[a.mono.merged(b.mono)] += a.coeff * b.coeff;
  std::vector<Term> out;
  out.reserve(acc.size());
  for (const auto& [m, c] : acc)
    if (c != 0.0) out.push_back({m, c});
  return BoolPoly::from_terms(std::move(out));
}

namespace {

// Dense product over the combined support, remapped to compact bit indices.
// Work is split into fixed-size blocks of p's terms that are merged in block
// order, so the result does not depend on the number of threads.
BoolPoly mul_dense(const BoolPoly& p, const BoolPoly& q, const std::vector<VarId>& sup) {
  const int k = int(sup.size());
  const std::size_t table = std::size_t(1) << k;
  std::array<int, Monomial::kMaxVars> pos{};
  for (int i = 0; i < int(sup.size()); ++i) pos[sup[i]] = i;

  auto compact = [&](const Monomial& m) {
    std::uint32_t idx = 0;
    for (VarId v : m.vars()) idx |= std::uint32_t(1) << pos[v];
    return idx;
  };
  std::vector<std::pair<std::uint32_t, double>> pa(p.term_count()), qa(q.term_count());
  for (std::size_t i = 0; i < p.term_count(); ++i)
    pa[i] = {compact(p.terms()[i].mono), p.terms()[i].coeff};
  for (std::size_t i = 0; i < q.term_count(); ++i)
    qa[i] = {compact(q.terms()[i].mono), q.terms()[i].coeff};

  // Beyond 16 support variables the per-block tables get large, so fall back
  // to a single block (serial accumulation) to cap memory.
  const std::size_t block = k <= 16 ? 512 : pa.size();
  const std::size_t nblocks = (pa.size() + block - 1) / block;
  std::vector<std::vector<double>> partial(nblocks);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t blk = 0; blk < nblocks; ++blk) {
    auto& dense = partial[blk];
    dense.assign(table, 0.0);
    const std::size_t lo = blk * block, hi = std::min(pa.size(), lo + block);
    for (std::size_t i = lo; i < hi; ++i)
      for (const auto& [bm, bc] : qa) dense[pa[i].first | bm] += pa[i].second * bc;
  }

  std::vector<double>& dense = partial[0];
  for (std::size_t blk = 1; blk < nblocks; ++blk)
    for (std::size_t i = 0; i < table; ++i) dense[i] += partial[blk][i];

  std::vector<Term> out;
  for (std::size_t idx = 0; idx < table; ++idx) {
    if (dense[idx] == 0.0) continue;
    Monomial m;
    for (int b = 0; b < k; ++b)
      if (idx >> b & 1) m = m.with(sup[b]);
    out.push_back({m, dense[idx]});
  }
  return BoolPoly::from_terms(std::move(out));
}

}  // namespace

BoolPoly mul(const BoolPoly& p, const BoolPoly& q) {
  const std::size_t work = p.term_count() * q.term_count();
  if (work == 0) return {};
  if (work >= 4096) {
    Monomial sup = p.support().merged(q.support());
    if (sup.degree() <= 22) return mul_dense(p, q, sup.vars());
  }
  return mul_serial(p, q);
}

BoolPoly truncate_above_order(const BoolPoly& p, int k) {
  if (k < 0) throw Error("truncate_above_order: negative order");
  std::vector<Term> out;
  for (const Term& t : p.terms())
    if (t.mono.degree() <= k) out.push_back(t);
  return BoolPoly::from_terms(std::move(out));
}

BoolPoly truncate_below_magnitude(const BoolPoly& p, double eps) {
  if (!(eps > 0.0)) throw Error("truncate_below_magnitude: eps must be positive");
  std::vector<Term> out;
  for (const Term& t : p.terms())
    if (std::abs(t.coeff) >= eps) out.push_back(t);
  return BoolPoly::from_terms(std::move(out));
}

double max_abs_coeff(const BoolPoly& p) {
  if (p.is_zero()) throw EmptyPolynomialError("max_abs_coeff of empty polynomial");
  double m = 0.0;
  for (const Term& t : p.terms()) m = std::max(m, std::abs(t.coeff));
  return m;
}

double RationalExpr::evaluate(const Bits& bits) const {
  const double d = den.evaluate(bits);
  if (d == 0.0) throw SingularPointError("rational expression denominator is zero here");
  return num.evaluate(bits) / d;
}

}  // namespace qtruss
