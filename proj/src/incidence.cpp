// Incidence-based construction of the graph Laplacian and its row-by-row
// reconciliation against the stencil operator.

#include <algorithm>
#include <cmath>
#include <map>

#include "chtn/errors.hpp"
#include "chtn/laplacian.hpp"

namespace chtn {

namespace {

long long ipow(long long base, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::vector<OrientedEdge> edge_multiset(const Network& net, const EdgeMultisetSpec& spec) {
  if (spec.radial_base < 0) throw ConfigError("edge multiset: radial_base must be >= 0");
  if (spec.radial_growth < 1) throw ConfigError("edge multiset: radial_growth must be >= 1");
  for (const auto& per_species : spec.horizontal) {
    for (int m : per_species) {
      if (m < 0) throw ConfigError("edge multiset: horizontal multiplicity must be >= 0");
    }
  }

  const int depth = net.depth();
  const bool tree = net.config().mode == Mode::Tree;
  std::vector<OrientedEdge> edges;
  for (Site s : net.sites()) {
    const std::size_t here = net.index_of(s);
    const int phase = net.species_phase_at(s);
    const Site right = net.right_of(s);
    for (Species sp : kAllSpecies) {
      const std::size_t tail = dof_index(here, sp);
      const int hm = spec.horizontal[static_cast<int>(sp)][phase];
      if (hm > 0 && net.contains(right) && right != s) {
        edges.push_back({tail, dof_index(net.index_of(right), sp), static_cast<double>(hm)});
      }
      if (s.n + 1 < depth) {
        const long long rm = spec.radial_base * ipow(spec.radial_growth, depth - 2 - s.n);
        const Site up = tree ? Site{s.j / 2, s.n + 1} : Site{s.j, s.n + 1};
        if (rm > 0) {
          edges.push_back({tail, dof_index(net.index_of(up), sp), static_cast<double>(rm)});
        }
      }
    }
  }
  return edges;
}

OperatorMatrix incidence_assemble(const Network& net, std::span<const OrientedEdge> edges) {
  const std::size_t dim = 2 * net.site_count();
  for (const OrientedEdge& e : edges) {
    if (e.tail >= dim || e.head >= dim) throw ConfigError("incidence: edge dof out of range");
    if (e.tail == e.head) throw ConfigError("incidence: self-loop edge");
    if (species_of_dof(e.tail) != species_of_dof(e.head)) {
      throw ConfigError("incidence: edge joins different species");
    }
    if (!(e.weight > 0.0)) throw ConfigError("incidence: edge weight must be positive");
  }

  // Q_e (f, e) = f(head) - f(tail) and Q_v^t (incoming minus outgoing) carry
  // the same incidence sign, so flipping an edge negates both factors.
  auto sign = [](const OrientedEdge& e, std::size_t v) {
    return v == e.head ? 1.0 : (v == e.tail ? -1.0 : 0.0);
  };

  std::vector<std::map<std::size_t, double>> rows(dim);
  std::vector<double> n_edges(dim, 0.0);
  for (const OrientedEdge& e : edges) {
    for (std::size_t v : {e.tail, e.head}) {
      n_edges[v] += e.weight;
      for (std::size_t u : {e.tail, e.head}) {
        rows[v][u] += sign(e, v) * e.weight * sign(e, u);
      }
    }
  }

  OperatorMatrix::Builder b(std::vector<Site>(net.sites().begin(), net.sites().end()));
  for (std::size_t v = 0; v < dim; ++v) {
    if (n_edges[v] == 0.0) {
      throw ConfigError("incidence: dof " + std::to_string(v) + " has no edges");
    }
    for (const auto& [u, c] : rows[v]) b.add(u, c / n_edges[v]);
    b.finish_row();
  }
  return b.build();
}

OperatorMatrix incidence_assemble(const Network& net, const EdgeMultisetSpec& spec) {
  const std::vector<OrientedEdge> edges = edge_multiset(net, spec);
  return incidence_assemble(net, edges);
}

std::vector<RowReconciliation> ReconciliationReport::differing() const {
  std::vector<RowReconciliation> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
               [](const RowReconciliation& r) { return !r.reconciled; });
  return out;
}

ReconciliationReport reconcile(const OperatorMatrix& stencil, const OperatorMatrix& incidence,
                               double rel_tol) {
  if (stencil.dimension() != incidence.dimension()) {
    throw ShapeError("reconcile: operator dimensions differ");
  }
  ReconciliationReport report;
  report.rows_total = stencil.dimension();
  for (std::size_t r = 0; r < stencil.dimension(); ++r) {
    RowReconciliation row{r, stencil.dof(r), false, 0.0, ""};
    const auto s = stencil.row(r);
    const auto in = incidence.row(r);
    if (!stencil.ghost_row(r).empty()) {
      row.reason = "stencil row references ghost dofs";
    } else if (s.size() != in.size() ||
               !std::equal(s.begin(), s.end(), in.begin(),
                           [](const Entry& a, const Entry& b) { return a.col == b.col; })) {
      row.reason = "support mismatch";
    } else {
      const double sd = stencil.coeff(r, r);
      const double id = incidence.coeff(r, r);
      const double scale = sd != 0.0 ? id / sd : 0.0;
      double worst = 0.0;
      double mag = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        worst = std::max(worst, std::abs(in[k].coeff - scale * s[k].coeff));
        mag = std::max(mag, std::abs(in[k].coeff));
      }
      if (!(scale > 0.0)) {
        row.reason = "non-positive scale";
      } else if (worst > rel_tol * mag) {
        row.reason = "coefficients not proportional";
      } else {
        row.reconciled = true;
        row.scale = scale;
      }
    }
    if (row.reconciled) ++report.rows_reconciled;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace chtn
