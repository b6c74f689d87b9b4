#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chtn/field.hpp"
#include "chtn/network.hpp"

namespace chtn {

// -2 eta(n+1) + 6 eta(n) - 4 eta(n-1). Templated so integer inputs are
// evaluated exactly.
template <class T>
constexpr T radial_stencil(T eta_prev, T eta_here, T eta_next) {
  return T(-2) * eta_next + T(6) * eta_here - T(4) * eta_prev;
}

// True where the species/phase pair selects the (-1, 4, -1) row; otherwise
// the row is (-2, 2, -2).
constexpr bool is_strong_row(Species species, int phase) {
  return (phase == 0) == (species == Species::UD);
}

template <class T>
constexpr T horizontal_stencil(Species species, int phase, T g_left, T g_here, T g_right) {
  if (is_strong_row(species, phase)) return -g_right + T(4) * g_here - g_left;
  return T(-2) * g_right + T(2) * g_here - T(2) * g_left;
}

struct Entry {
  std::size_t col;
  double coeff;
};

// Ghost degree of freedom: a (site, species) pair outside the network whose
// value is prescribed at apply time.
using GhostDof = DofIndex;

// Sparse operator over (site, species) degrees of freedom, stored row-wise.
// Columns of `ghost_row` index into ghosts().
class OperatorMatrix {
 public:
  class Builder;

  std::size_t dimension() const { return row_ptr_.size() - 1; }
  std::span<const Entry> row(std::size_t r) const;
  std::span<const Entry> ghost_row(std::size_t r) const;
  const std::vector<GhostDof>& ghosts() const { return ghosts_; }
  bool has_ghosts() const { return !ghosts_.empty(); }
  const std::vector<Site>& sites() const { return sites_; }
  DofIndex dof(std::size_t d) const { return {sites_[site_of_dof(d)], species_of_dof(d)}; }

  double coeff(std::size_t r, std::size_t c) const;
  // max_r sum |coefficients| over network and ghost columns.
  double max_abs_row_sum() const;

 private:
  std::vector<Site> sites_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Entry> entries_;
  std::vector<std::size_t> ghost_ptr_{0};
  std::vector<Entry> ghost_entries_;
  std::vector<GhostDof> ghosts_;
};

// Accumulates rows in order; duplicate columns within a row are merged and
// exact zeros dropped.
class OperatorMatrix::Builder {
 public:
  explicit Builder(std::vector<Site> sites);

  void add(std::size_t col, double coeff);
  void add_ghost(GhostDof ghost, double coeff);
  void finish_row();
  OperatorMatrix build();

 private:
  OperatorMatrix op_;
  std::vector<Entry> pending_;
  std::vector<std::pair<std::size_t, double>> pending_ghost_;
};

enum class StencilParts : unsigned { Radial = 1, Horizontal = 2, All = 3 };

// Stencil-defined operator. Boundary rows follow the network's boundary
// policies: Dirichlet policies reference ghost dofs, truncation drops terms.
// Tree mode is experimental: the parent carries -2 and each child -2.
OperatorMatrix assemble_operator(const Network& net, StencilParts parts = StencilParts::All);

// Horizontal stencils of a single periodic layer of the given width, with
// phase j mod 2. Sites are (j, 0).
OperatorMatrix assemble_horizontal_layer(int width);

// Exact sparse product. `ghosts` must match op.ghosts() in size; pass an
// empty span only when the operator has no ghost dofs.
std::vector<double> apply(const OperatorMatrix& op, std::span<const double> values,
                          std::span<const double> ghosts = {});
DistributionField apply(const OperatorMatrix& op, const DistributionField& field,
                        std::span<const double> ghosts = {});

struct KernelBasis {
  std::vector<DistributionField> basis;  // orthonormal
  std::vector<double> singular_values;   // descending
  double op_norm = 0.0;                  // largest singular value
  double tol = 0.0;
};

// Numerical null space of the homogeneous operator (ghost columns ignored)
// by dense SVD. Throws DomainError if tol <= 0.
KernelBasis kernel_basis(const OperatorMatrix& op, double tol);

// Dense copy of the network block, row-major; used by kernel_basis and tests.
std::vector<double> to_dense(const OperatorMatrix& op);

// Plain-text triplets "row col coeff"; ghost columns are numbered from
// dimension() upward and listed in the header.
void export_triplets(const OperatorMatrix& op, std::ostream& out);

// --- Incidence construction ------------------------------------------------

// Oriented edge between two dofs of the same species; weight counts parallel
// edges.
struct OrientedEdge {
  std::size_t tail;
  std::size_t head;
  double weight;
};

struct EdgeMultisetSpec {
  // Radial link (n, n+1) carries radial_base * radial_growth^(depth-2-n)
  // parallel edges per species. growth 2 folds the binary tree onto a chain.
  int radial_base = 2;
  int radial_growth = 1;
  // Parallel edges of the horizontal link (j, j+1), indexed by
  // [species][phase of the left endpoint].
  std::array<std::array<int, 2>, 2> horizontal{{{1, 1}, {1, 1}}};
};

// Canonical orientation: tail at the lower j (or lower n).
std::vector<OrientedEdge> edge_multiset(const Network& net, const EdgeMultisetSpec& spec);

// Q_e followed by Q_v^t, each row divided by the number of edges at the dof.
// Throws ConfigError for negative multiplicities, self-loops, or a dof with
// no edges.
OperatorMatrix incidence_assemble(const Network& net, std::span<const OrientedEdge> edges);
OperatorMatrix incidence_assemble(const Network& net, const EdgeMultisetSpec& spec);

struct RowReconciliation {
  std::size_t row;
  DofIndex dof;
  bool reconciled;
  double scale;  // incidence = scale * stencil when reconciled
  std::string reason;
};

struct ReconciliationReport {
  std::size_t rows_total = 0;
  std::size_t rows_reconciled = 0;
  std::vector<RowReconciliation> rows;  // one per row

  std::vector<RowReconciliation> differing() const;
};

// Row-by-row check that each incidence row is a positive multiple of the
// stencil row. Stencil rows with ghost terms are reported as differing.
ReconciliationReport reconcile(const OperatorMatrix& stencil, const OperatorMatrix& incidence,
                               double rel_tol = 1e-12);

}  // namespace chtn
