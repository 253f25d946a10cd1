#include "qtruss/symfem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qtruss {

std::array<std::array<BoolPoly, 4>, 4> element_stiffness(const TrussProblem& p, std::size_t e) {
  const Element& el = p.elements.at(e);
  const Node& na = p.nodes[p.node_index(el.start)];
  const Node& nb = p.nodes[p.node_index(el.end)];
  const double L = p.element_length(e);
  if (!(L > 0.0)) throw ZeroLengthError("element " + el.id + " has zero length");
  const double c = (nb.x - na.x) / L;
  const double s = (nb.y - na.y) / L;

  // A_n = sum_c q_{n,c} A_{n,c}
  const std::size_t C = p.num_choices();
  BoolPoly area;
  for (std::size_t ch = 0; ch < C; ++ch)
    area = area + BoolPoly::term(Monomial::single(VarId(e * C + ch)), el.choices[ch]);

  const double geo[2][2] = {{c * c, c * s}, {c * s, s * s}};
  const double k = p.material.youngs_modulus / L;
  std::array<std::array<BoolPoly, 4>, 4> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double sign = ((i < 2) == (j < 2)) ? 1.0 : -1.0;
      m[i][j] = scaled(area, sign * k * geo[i % 2][j % 2]);
    }
  return m;
}

SymStiffness assemble(const TrussProblem& p) {
  SymStiffness K;
  K.dofs = make_dof_map(p);
  K.dim = K.dofs.num_free();
  if (K.dim == 0) throw NoFreeDofError(p.name + ": no free degree of freedom");
  K.entries.assign(K.dim * K.dim, BoolPoly());
  for (std::size_t e = 0; e < p.num_elements(); ++e) {
    const auto m = element_stiffness(p, e);
    const Element& el = p.elements[e];
    const int gdof[4] = {2 * p.node_index(el.start), 2 * p.node_index(el.start) + 1,
                         2 * p.node_index(el.end), 2 * p.node_index(el.end) + 1};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const int fi = K.dofs.global_to_free[gdof[i]];
        const int fj = K.dofs.global_to_free[gdof[j]];
        if (fi < 0 || fj < 0) continue;
        K.entries[fi * K.dim + fj] = K.entries[fi * K.dim + fj] + m[i][j];
      }
  }
  return K;
}

namespace {

// Determinant of a matrix of multilinear polynomials by Laplace expansion
// with memoization over column subsets. No division takes place, so the
// computation stays inside the polynomial ring. (Fraction-free pivoting in
// the Bareiss sense is unavailable here: q^2 = q gives zero divisors, so
// exact division by previous pivots is not well defined.)
BoolPoly subset_determinant(const std::vector<const BoolPoly*>& m, std::size_t dim) {
  std::vector<std::vector<BoolPoly>> layer(1);  // minors for subsets of size r
  layer[0] = {BoolPoly::constant(1.0)};
  // subsets of size r, in lexicographic-combination order, identified by rank
  std::vector<std::uint32_t> subsets = {0};
  for (std::size_t r = 0; r < dim; ++r) {
    std::vector<std::uint32_t> next_subsets;
    std::vector<BoolPoly> next;
    for (std::uint32_t bits = 0; bits < (1u << dim); ++bits)
      if (std::uint32_t(std::popcount(bits)) == r + 1) next_subsets.push_back(bits);
    next.assign(next_subsets.size(), BoolPoly());
    for (std::size_t t = 0; t < next_subsets.size(); ++t) {
      const std::uint32_t bits = next_subsets[t];
      int pos = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        if (!(bits >> j & 1)) continue;
        const std::uint32_t sub = bits & ~(1u << j);
        const auto it = std::lower_bound(subsets.begin(), subsets.end(), sub);
        const BoolPoly& minor = layer[0][std::size_t(it - subsets.begin())];
        const BoolPoly& entry = *m[r * dim + j];
        const double sign = ((int(r) + pos) % 2 == 0) ? 1.0 : -1.0;
        if (!entry.is_zero() && !minor.is_zero())
          next[t] = next[t] + scaled(mul(entry, minor), sign);
        ++pos;
      }
    }
    layer[0] = std::move(next);
    subsets = std::move(next_subsets);
  }
  return layer[0][0];
}

}  // namespace

SymSolution solve_symbolic(const SymStiffness& K, const std::vector<double>& f) {
  const std::size_t dim = K.dim;
  if (f.size() != dim)
    throw LengthMismatchError("load vector size " + std::to_string(f.size()) + ", expected " +
                              std::to_string(dim));
  if (dim > 20) throw Error("symbolic solve limited to 20 free DoFs");

  std::vector<const BoolPoly*> mat(dim * dim);
  for (std::size_t i = 0; i < dim * dim; ++i) mat[i] = &K.entries[i];

  SymSolution sol;
  sol.dofs = K.dofs;
  sol.den = subset_determinant(mat, dim);
  if (sol.den.is_zero()) throw ZeroDeterminantError("det(K) is the zero polynomial");

  // Cramer: numerator i = det of K with column i replaced by f.
  std::vector<BoolPoly> fcol(dim);
  for (std::size_t i = 0; i < dim; ++i) fcol[i] = BoolPoly::constant(f[i]);
  sol.num_u.resize(dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::vector<const BoolPoly*> replaced = mat;
    for (std::size_t row = 0; row < dim; ++row) replaced[row * dim + col] = &fcol[row];
    sol.num_u[col] = subset_determinant(replaced, dim);
  }

  // Shared positive scale so that coefficients stay O(1); the ratios
  // num_u/den are unchanged.
  double s = max_abs_coeff(sol.den);
  for (const BoolPoly& nu : sol.num_u)
    if (!nu.is_zero()) s = std::max(s, max_abs_coeff(nu));
  sol.scale = s;
  sol.den = scaled(sol.den, 1.0 / s);
  for (BoolPoly& nu : sol.num_u) nu = scaled(nu, 1.0 / s);
  return sol;
}

std::vector<RationalExpr> stress_expressions(const TrussProblem& p, const SymSolution& sol) {
  const BoolPoly den2 = mul(sol.den, sol.den);
  const double E = p.material.youngs_modulus;

  auto num_disp = [&](int node, int axis) -> BoolPoly {
    const int fd = sol.dofs.global_to_free[2 * node + axis];
    return fd >= 0 ? sol.num_u[fd] : BoolPoly();
  };

  std::vector<RationalExpr> stresses(p.num_elements());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t e = 0; e < p.num_elements(); ++e) {
    const Element& el = p.elements[e];
    const int ia = p.node_index(el.start), ib = p.node_index(el.end);
    const Node& na = p.nodes[ia];
    const Node& nb = p.nodes[ib];
    const double L0 = p.element_length(e);

    // Deformed squared length over den^2:
    //   P = (dx*den + dnum_x)^2 + (dy*den + dnum_y)^2
    const BoolPoly dnx = sub(num_disp(ib, 0), num_disp(ia, 0));
    const BoolPoly dny = sub(num_disp(ib, 1), num_disp(ia, 1));
    const BoolPoly ax = add(scaled(sol.den, nb.x - na.x), dnx);
    const BoolPoly ay = add(scaled(sol.den, nb.y - na.y), dny);
    const BoolPoly length_sq = add(mul(ax, ax), mul(ay, ay));

    // eps = (P - L0^2 den^2) / (2 L0^2 den^2), sigma = E * eps.
    const BoolPoly strain_num = sub(length_sq, scaled(den2, L0 * L0));
    stresses[e] = RationalExpr{scaled(strain_num, E / (2.0 * L0 * L0)), den2};
  }
  return stresses;
}

namespace {

// sum_n (sigma_limit^2 * (den^2)^2 - S_n^2)^2, the shared numerator of the
// fractional objective and, taken alone, the flawed objective.
BoolPoly stress_margin_sum(const TrussProblem& p, const std::vector<RationalExpr>& stresses,
                           const BoolPoly& den2) {
  const double limit_sq = p.material.sigma_limit * p.material.sigma_limit;
  const BoolPoly den4 = mul(den2, den2);
  std::vector<BoolPoly> parts(stresses.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t n = 0; n < stresses.size(); ++n) {
    const BoolPoly inner = sub(scaled(den4, limit_sq), mul(stresses[n].num, stresses[n].num));
    parts[n] = mul(inner, inner);
  }
  BoolPoly sum;
  for (const BoolPoly& part : parts) sum = add(sum, part);
  return sum;
}

const BoolPoly& common_denominator(const std::vector<RationalExpr>& stresses) {
  if (stresses.empty()) throw Error("no stress expressions");
  for (const RationalExpr& s : stresses)
    if (!(s.den.terms() == stresses[0].den.terms()))
      throw Error("stress expressions do not share a denominator");
  return stresses[0].den;
}

}  // namespace

ObjectiveFractional objective_fractional(const TrussProblem& p,
                                         const std::vector<RationalExpr>& stresses) {
  const BoolPoly& den2 = common_denominator(stresses);
  BoolPoly num = stress_margin_sum(p, stresses, den2);
  const BoolPoly den4 = mul(den2, den2);
  BoolPoly den = mul(den4, den4);

  ObjectiveFractional obj;
  obj.normalization_scale = std::max(max_abs_coeff(num), max_abs_coeff(den));
  obj.expr.num = scaled(num, 1.0 / obj.normalization_scale);
  obj.expr.den = scaled(den, 1.0 / obj.normalization_scale);
  return obj;
}

ObjectiveFlawed objective_nonfractional_flawed(const TrussProblem& p,
                                               const std::vector<RationalExpr>& stresses) {
  const BoolPoly& den2 = common_denominator(stresses);
  BoolPoly poly = stress_margin_sum(p, stresses, den2);
  ObjectiveFlawed obj;
  obj.normalization_scale = max_abs_coeff(poly);
  obj.poly = scaled(poly, 1.0 / obj.normalization_scale);
  return obj;
}

namespace {

std::vector<RationalExpr> build_stresses(const TrussProblem& p) {
  const SymStiffness K = assemble(p);
  const SymSolution sol = solve_symbolic(K, load_vector(p, K.dofs));
  return stress_expressions(p, sol);
}

}  // namespace

ObjectiveFractional build_fractional_objective(const TrussProblem& p) {
  return objective_fractional(p, build_stresses(p));
}

ObjectiveFlawed build_flawed_objective(const TrussProblem& p) {
  return objective_nonfractional_flawed(p, build_stresses(p));
}

}  // namespace qtruss
