#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtruss/boolpoly.hpp"
#include "qtruss/errors.hpp"

namespace qtruss {

// Unit convention throughout: N-mm-MPa. Young's modulus and stresses in MPa
// (= N/mm^2), coordinates and displacements in mm, forces in N, areas in mm^2.

struct Node {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Node&, const Node&) = default;
};

struct Element {
  std::string id;
  std::string start;
  std::string end;
  std::vector<double> choices;  // cross-section areas, strictly increasing
  friend bool operator==(const Element&, const Element&) = default;
};

struct Material {
  double youngs_modulus = 0.0;  // MPa
  double sigma_limit = 0.0;     // MPa
  friend bool operator==(const Material&, const Material&) = default;
};

struct Load {
  std::string node;
  double fx = 0.0;  // N
  double fy = 0.0;  // N
  friend bool operator==(const Load&, const Load&) = default;
};

struct Support {
  std::string node;
  bool fix_x = false;
  bool fix_y = false;
  friend bool operator==(const Support&, const Support&) = default;
};

/// A 2D truss sizing problem: geometry, boundary conditions, loads, material
/// and the per-element discrete area choices. Immutable after construction.
struct TrussProblem {
  std::string name;
  std::vector<Node> nodes;
  std::vector<Element> elements;
  Material material;
  std::vector<Load> loads;
  std::vector<Support> supports;

  std::size_t num_elements() const { return elements.size(); }
  /// Choices per element; uniform across elements (validated on load).
  std::size_t num_choices() const { return elements.empty() ? 0 : elements[0].choices.size(); }
  /// One boolean variable per (element, choice), element-major choice-minor.
  std::size_t num_vars() const { return num_elements() * num_choices(); }

  int node_index(const std::string& id) const;  // -1 if unknown
  double element_length(std::size_t e) const;

  friend bool operator==(const TrussProblem&, const TrussProblem&) = default;
};

/// Throws ValidationError if the problem breaks a structural invariant
/// (dangling node refs, duplicate ids, non-increasing choices, zero-length
/// element, no free DoF, non-positive material constants, ...).
void validate(const TrussProblem& p);

/// The built-in benchmark problems: "two_truss", "three_truss", "four_truss".
TrussProblem builtin_problem(const std::string& name);
const std::vector<std::string>& builtin_problem_names();

// --- Solution vectors -------------------------------------------------------

/// bits has length N*C, element-major, choice-minor (smallest area first).
using Assignment = Bits;

/// Areas selected by an assignment: A_n = sum_c bits[n*C+c] * choices[n][c].
/// Invalid assignments yield 0 or multi-choice sums.
std::vector<double> areas_from_assignment(const TrussProblem& p, const Assignment& a);

/// True iff every element block selects exactly one choice.
bool is_valid(const Assignment& a, std::size_t num_elements, std::size_t num_choices);

/// 1-based element-major mixed-radix numbering of valid assignments,
/// smallest choice first: index = 1 + sum_n (choice_n - 1) * C^(N-n).
/// InvalidAssignmentError if the assignment is not one-hot per element.
std::uint64_t solution_index(const Assignment& a, std::size_t num_elements,
                             std::size_t num_choices);
Assignment index_to_solution(std::uint64_t index, std::size_t num_elements,
                             std::size_t num_choices);

// --- Degree-of-freedom bookkeeping ------------------------------------------

/// Mapping between global DoFs (2 per node: x then y) and the reduced system
/// that remains after support elimination.
struct DofMap {
  std::vector<int> global_to_free;  // -1 where fixed
  std::vector<int> free_to_global;
  std::size_t num_free() const { return free_to_global.size(); }
};

DofMap make_dof_map(const TrussProblem& p);
/// Load vector on the free DoFs.
std::vector<double> load_vector(const TrussProblem& p, const DofMap& dofs);

// --- Numeric FEM oracle ------------------------------------------------------

struct FemResult {
  std::vector<double> displacements;  // per free DoF, mm
  std::vector<double> gl_strains;     // per element, Green-Lagrange
  std::vector<double> stresses;       // per element, MPa
};

/// Solves K u = f with standard 2D bar elements for fixed numeric areas.
/// Strain is the Green-Lagrange measure on the deformed coordinates,
/// eps = ((L_disp/L0)^2 - 1)/2, and stress is E*eps. Pure and reentrant.
/// SingularStiffnessError on non-positive areas or a mechanism.
FemResult numeric_fem_solve(const TrussProblem& p, const std::vector<double>& areas);

}  // namespace qtruss
