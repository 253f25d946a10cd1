#include "qtruss/truss.hpp"

#include <cmath>
#include <set>

namespace qtruss {

int TrussProblem::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return int(i);
  return -1;
}

double TrussProblem::element_length(std::size_t e) const {
  const Element& el = elements.at(e);
  const Node& a = nodes[node_index(el.start)];
  const Node& b = nodes[node_index(el.end)];
  return std::hypot(b.x - a.x, b.y - a.y);
}

void validate(const TrussProblem& p) {
  if (p.nodes.empty()) throw ValidationError(p.name + ": no nodes");
  if (p.elements.empty()) throw ValidationError(p.name + ": no elements");
  std::set<std::string> node_ids;
  for (const Node& n : p.nodes)
    if (!node_ids.insert(n.id).second) throw ValidationError("duplicate node id " + n.id);
  std::set<std::string> element_ids;
  std::size_t choices = p.elements[0].choices.size();
  for (const Element& e : p.elements) {
    if (!element_ids.insert(e.id).second) throw ValidationError("duplicate element id " + e.id);
    if (p.node_index(e.start) < 0 || p.node_index(e.end) < 0)
      throw ValidationError("element " + e.id + " references a missing node");
    if (e.start == e.end) throw ValidationError("element " + e.id + " connects a node to itself");
    if (e.choices.empty()) throw ValidationError("element " + e.id + " has no area choices");
    if (e.choices.size() != choices)
      throw ValidationError("element " + e.id + ": all elements must offer the same number of choices");
    for (std::size_t c = 0; c < e.choices.size(); ++c) {
      if (!(e.choices[c] > 0.0)) throw ValidationError("element " + e.id + " has a non-positive area choice");
      if (c > 0 && !(e.choices[c] > e.choices[c - 1]))
        throw ValidationError("element " + e.id + " choices are not strictly increasing");
    }
  }
  for (std::size_t e = 0; e < p.elements.size(); ++e)
    if (!(p.element_length(e) > 0.0))
      throw ValidationError("element " + p.elements[e].id + " has zero length");
  if (!(p.material.youngs_modulus > 0.0) || !(p.material.sigma_limit > 0.0))
    throw ValidationError("material constants must be positive");
  for (const Load& l : p.loads)
    if (p.node_index(l.node) < 0) throw ValidationError("load references missing node " + l.node);
  for (const Support& s : p.supports)
    if (p.node_index(s.node) < 0) throw ValidationError("support references missing node " + s.node);
  if (make_dof_map(p).num_free() == 0) throw ValidationError(p.name + ": no free degree of freedom");
}

namespace {

TrussProblem make_two_truss() {
  TrussProblem p;
  p.name = "two_truss";
  p.nodes = {{"N1", 0, 0}, {"N2", 1000, -1000}, {"N3", 0, -1000}};
  p.elements = {{"E1", "N1", "N2", {800, 900, 1000}}, {"E2", "N2", "N3", {1400, 1500, 1600}}};
  p.material = {200000.0, 100.0};
  p.loads = {{"N2", 0.0, -70000.0}};
  p.supports = {{"N1", true, true}, {"N3", true, true}};
  return p;
}

TrussProblem make_three_truss() {
  TrussProblem p;
  p.name = "three_truss";
  p.nodes = {{"N1", -500, 500}, {"N2", -500, -500}, {"N3", 500, 100}, {"N4", 0, 0}};
  p.elements = {{"E1", "N1", "N4", {400, 500, 600}},
                {"E2", "N2", "N4", {950, 1050, 1150}},
                {"E3", "N3", "N4", {700, 800, 900}}};
  p.material = {200000.0, 100.0};
  p.loads = {{"N4", 0.0, -100000.0}};
  p.supports = {{"N1", true, true}, {"N2", true, true}, {"N3", true, true}};
  return p;
}

TrussProblem make_four_truss() {
  TrussProblem p;
  p.name = "four_truss";
  p.nodes = {{"N1", 0, 500}, {"N2", 0, -500}, {"N3", 500, 0}, {"N4", 1000, 0}};
  p.elements = {{"E1", "N1", "N3", {2400, 2500, 2600}},
                {"E2", "N2", "N3", {2400, 2500, 2600}},
                {"E3", "N1", "N4", {1900, 2000, 2100}},
                {"E4", "N3", "N4", {2400, 2500, 2600}}};
  p.material = {200000.0, 100.0};
  p.loads = {{"N4", 0.0, -100000.0}};
  p.supports = {{"N1", true, true}, {"N2", true, true}};
  return p;
}

}  // namespace

const std::vector<std::string>& builtin_problem_names() {
  static const std::vector<std::string> names = {"two_truss", "three_truss", "four_truss"};
  return names;
}

TrussProblem builtin_problem(const std::string& name) {
  TrussProblem p;
  if (name == "two_truss")
    p = make_two_truss();
  else if (name == "three_truss")
    p = make_three_truss();
  else if (name == "four_truss")
    p = make_four_truss();
  else
    throw UnknownProblemError("unknown builtin problem: " + name);
  validate(p);
  return p;
}

std::vector<double> areas_from_assignment(const TrussProblem& p, const Assignment& a) {
  if (a.size() != p.num_vars())
    throw LengthMismatchError("assignment length " + std::to_string(a.size()) +
                              ", expected " + std::to_string(p.num_vars()));
  const std::size_t C = p.num_choices();
  std::vector<double> areas(p.num_elements(), 0.0);
  for (std::size_t n = 0; n < p.num_elements(); ++n)
    for (std::size_t c = 0; c < C; ++c)
      if (a[n * C + c]) areas[n] += p.elements[n].choices[c];
  return areas;
}

bool is_valid(const Assignment& a, std::size_t num_elements, std::size_t num_choices) {
  if (a.size() != num_elements * num_choices)
    throw LengthMismatchError("assignment length " + std::to_string(a.size()) +
                              ", expected " + std::to_string(num_elements * num_choices));
  for (std::size_t n = 0; n < num_elements; ++n) {
    int weight = 0;
    for (std::size_t c = 0; c < num_choices; ++c) weight += a[n * num_choices + c] ? 1 : 0;
    if (weight != 1) return false;
  }
  return true;
}

std::uint64_t solution_index(const Assignment& a, std::size_t num_elements,
                             std::size_t num_choices) {
  if (!is_valid(a, num_elements, num_choices))
    throw InvalidAssignmentError("solution_index of an invalid assignment");
  std::uint64_t index = 0;
  for (std::size_t n = 0; n < num_elements; ++n) {
    std::size_t choice = 0;
    for (std::size_t c = 0; c < num_choices; ++c)
      if (a[n * num_choices + c]) choice = c;
    index = index * num_choices + choice;
  }
  return index + 1;
}

Assignment index_to_solution(std::uint64_t index, std::size_t num_elements,
                             std::size_t num_choices) {
  std::uint64_t count = 1;
  for (std::size_t n = 0; n < num_elements; ++n) count *= num_choices;
  if (index < 1 || index > count)
    throw InvalidAssignmentError("solution index " + std::to_string(index) + " out of range");
  Assignment a(num_elements * num_choices, 0);
  std::uint64_t rest = index - 1;
  for (std::size_t n = num_elements; n-- > 0;) {
    a[n * num_choices + rest % num_choices] = 1;
    rest /= num_choices;
  }
  return a;
}

DofMap make_dof_map(const TrussProblem& p) {
  DofMap dofs;
  dofs.global_to_free.assign(2 * p.nodes.size(), 0);
  for (const Support& s : p.supports) {
    int ni = p.node_index(s.node);
    if (s.fix_x) dofs.global_to_free[2 * ni] = -1;
    if (s.fix_y) dofs.global_to_free[2 * ni + 1] = -1;
  }
  for (std::size_t g = 0; g < dofs.global_to_free.size(); ++g) {
    if (dofs.global_to_free[g] == 0) {
      dofs.global_to_free[g] = int(dofs.free_to_global.size());
      dofs.free_to_global.push_back(int(g));
    }
  }
  return dofs;
}

std::vector<double> load_vector(const TrussProblem& p, const DofMap& dofs) {
  std::vector<double> f(dofs.num_free(), 0.0);
  for (const Load& l : p.loads) {
    int ni = p.node_index(l.node);
    int fx = dofs.global_to_free[2 * ni];
    int fy = dofs.global_to_free[2 * ni + 1];
    if (fx >= 0) f[fx] += l.fx;
    if (fy >= 0) f[fy] += l.fy;
  }
  return f;
}

}  // namespace qtruss
