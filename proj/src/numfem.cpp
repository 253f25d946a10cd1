#include <Eigen/Dense>
#include <cmath>

#include "qtruss/truss.hpp"

namespace qtruss {

FemResult numeric_fem_solve(const TrussProblem& p, const std::vector<double>& areas) {
  if (areas.size() != p.num_elements())
    throw LengthMismatchError("areas size " + std::to_string(areas.size()) + ", expected " +
                              std::to_string(p.num_elements()));
  for (std::size_t e = 0; e < areas.size(); ++e)
    if (!(areas[e] > 0.0))
      throw SingularStiffnessError("element " + p.elements[e].id + " has non-positive area");

  const DofMap dofs = make_dof_map(p);
  const std::size_t m = dofs.num_free();
  if (m == 0) throw NoFreeDofError(p.name + ": no free degree of freedom");

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
  const double E = p.material.youngs_modulus;
  for (std::size_t e = 0; e < p.num_elements(); ++e) {
    const Element& el = p.elements[e];
    const Node& na = p.nodes[p.node_index(el.start)];
    const Node& nb = p.nodes[p.node_index(el.end)];
    const double L = p.element_length(e);
    const double c = (nb.x - na.x) / L;
    const double s = (nb.y - na.y) / L;
    const double k = E * areas[e] / L;
    const double geo[2][2] = {{c * c, c * s}, {c * s, s * s}};
    const int gdof[4] = {2 * p.node_index(el.start), 2 * p.node_index(el.start) + 1,
                         2 * p.node_index(el.end), 2 * p.node_index(el.end) + 1};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const int fi = dofs.global_to_free[gdof[i]];
        const int fj = dofs.global_to_free[gdof[j]];
        if (fi < 0 || fj < 0) continue;
        const double sign = ((i < 2) == (j < 2)) ? 1.0 : -1.0;
        K(fi, fj) += sign * k * geo[i % 2][j % 2];
      }
    }
  }

  const std::vector<double> fv = load_vector(p, dofs);
  Eigen::VectorXd f(m);
  for (std::size_t i = 0; i < m; ++i) f(i) = fv[i];

  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible())
    throw SingularStiffnessError(p.name + ": singular stiffness matrix (mechanism)");
  Eigen::VectorXd u = lu.solve(f);

  FemResult res;
  res.displacements.assign(u.data(), u.data() + m);
  res.gl_strains.resize(p.num_elements());
  res.stresses.resize(p.num_elements());
  for (std::size_t e = 0; e < p.num_elements(); ++e) {
    const Element& el = p.elements[e];
    const Node& na = p.nodes[p.node_index(el.start)];
    const Node& nb = p.nodes[p.node_index(el.end)];
    auto disp = [&](int node, int axis) {
      const int fd = dofs.global_to_free[2 * node + axis];
      return fd >= 0 ? u(fd) : 0.0;
    };
    const int ia = p.node_index(el.start), ib = p.node_index(el.end);
    const double dx = (nb.x + disp(ib, 0)) - (na.x + disp(ia, 0));
    const double dy = (nb.y + disp(ib, 1)) - (na.y + disp(ia, 1));
    const double L0 = p.element_length(e);
    const double ratio = (dx * dx + dy * dy) / (L0 * L0);
    res.gl_strains[e] = 0.5 * (ratio - 1.0);
    res.stresses[e] = E * res.gl_strains[e];
  }
  return res;
}

}  // namespace qtruss
