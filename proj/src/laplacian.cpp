#include "chtn/laplacian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "chtn/errors.hpp"

namespace chtn {

namespace {

template <class P>
std::vector<Entry> merge_row(std::vector<P> items) {
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Entry> out;
  for (const auto& [col, c] : items) {
    if (!out.empty() && out.back().col == col) {
      out.back().coeff += c;
    } else {
      out.push_back({col, c});
    }
  }
  std::erase_if(out, [](const Entry& e) { return e.coeff == 0.0; });
  return out;
}

bool has_part(StencilParts parts, StencilParts p) {
  return (static_cast<unsigned>(parts) & static_cast<unsigned>(p)) != 0;
}

}  // namespace

std::span<const Entry> OperatorMatrix::row(std::size_t r) const {
  return {entries_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
}

std::span<const Entry> OperatorMatrix::ghost_row(std::size_t r) const {
  return {ghost_entries_.data() + ghost_ptr_[r], ghost_ptr_[r + 1] - ghost_ptr_[r]};
}

double OperatorMatrix::coeff(std::size_t r, std::size_t c) const {
  for (const Entry& e : row(r)) {
    if (e.col == c) return e.coeff;
  }
  return 0.0;
}

double OperatorMatrix::max_abs_row_sum() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dimension(); ++r) {
    double s = 0.0;
    for (const Entry& e : row(r)) s += std::abs(e.coeff);
    for (const Entry& e : ghost_row(r)) s += std::abs(e.coeff);
    best = std::max(best, s);
  }
  return best;
}

OperatorMatrix::Builder::Builder(std::vector<Site> sites) { op_.sites_ = std::move(sites); }

void OperatorMatrix::Builder::add(std::size_t col, double coeff) {
  if (col >= 2 * op_.sites_.size()) throw IndexError("operator column out of range");
  pending_.push_back({col, coeff});
}

void OperatorMatrix::Builder::add_ghost(GhostDof ghost, double coeff) {
  auto it = std::find(op_.ghosts_.begin(), op_.ghosts_.end(), ghost);
  std::size_t idx = static_cast<std::size_t>(it - op_.ghosts_.begin());
  if (it == op_.ghosts_.end()) op_.ghosts_.push_back(ghost);
  pending_ghost_.push_back({idx, coeff});
}

void OperatorMatrix::Builder::finish_row() {
  std::vector<std::pair<std::size_t, double>> items;
  items.reserve(pending_.size());
  for (const Entry& e : pending_) items.push_back({e.col, e.coeff});
  for (const Entry& e : merge_row(std::move(items))) op_.entries_.push_back(e);
  op_.row_ptr_.push_back(op_.entries_.size());
  for (const Entry& e : merge_row(std::move(pending_ghost_))) op_.ghost_entries_.push_back(e);
  op_.ghost_ptr_.push_back(op_.ghost_entries_.size());
  pending_.clear();
  pending_ghost_.clear();
}

OperatorMatrix OperatorMatrix::Builder::build() {
  if (op_.row_ptr_.size() - 1 != 2 * op_.sites_.size()) {
    throw ShapeError("operator builder: row count does not match 2 * site count");
  }
  return std::move(op_);
}

OperatorMatrix assemble_operator(const Network& net, StencilParts parts) {
  const NetworkConfig& cfg = net.config();
  OperatorMatrix::Builder b(std::vector<Site>(net.sites().begin(), net.sites().end()));

  auto couple = [&](Site s, Species sp, double coeff, bool ghost_allowed) {
    if (net.contains(s)) {
      b.add(dof_index(net.index_of(s), sp), coeff);
    } else if (ghost_allowed) {
      b.add_ghost({s, sp}, coeff);
    }
  };
  const bool radial_ghosts = cfg.radial_bc == RadialBc::DirichletGhost;

  for (Site s : net.sites()) {
    const int phase = net.species_phase_at(s);
    for (Species sp : kAllSpecies) {
      const std::size_t self = dof_index(net.index_of(s), sp);
      if (has_part(parts, StencilParts::Radial)) {
        b.add(self, 6.0);
        if (cfg.mode == Mode::Rectangular) {
          couple({s.j, s.n + 1}, sp, -2.0, radial_ghosts);
          couple({s.j, s.n - 1}, sp, -4.0, radial_ghosts);
        } else {
          couple({s.j / 2, s.n + 1}, sp, -2.0, radial_ghosts);
          couple({2 * s.j, s.n - 1}, sp, -2.0, radial_ghosts);
          couple({2 * s.j + 1, s.n - 1}, sp, -2.0, radial_ghosts);
        }
      }
      if (has_part(parts, StencilParts::Horizontal)) {
        const bool strong = is_strong_row(sp, phase);
        b.add(self, strong ? 4.0 : 2.0);
        const double off = strong ? -1.0 : -2.0;
        couple(net.left_of(s), sp, off, true);
        couple(net.right_of(s), sp, off, true);
      }
      b.finish_row();
    }
  }
  return b.build();
}

OperatorMatrix assemble_horizontal_layer(int width) {
  if (width < 2 || width % 2 != 0) throw ConfigError("width must be even");
  std::vector<Site> sites;
  for (int j = 0; j < width; ++j) sites.push_back({j, 0});
  OperatorMatrix::Builder b(sites);
  for (int j = 0; j < width; ++j) {
    const int phase = j % 2;
    const std::size_t left = static_cast<std::size_t>((j + width - 1) % width);
    const std::size_t right = static_cast<std::size_t>((j + 1) % width);
    for (Species sp : kAllSpecies) {
      const bool strong = is_strong_row(sp, phase);
      const double off = strong ? -1.0 : -2.0;
      b.add(dof_index(static_cast<std::size_t>(j), sp), strong ? 4.0 : 2.0);
      b.add(dof_index(left, sp), off);
      b.add(dof_index(right, sp), off);
      b.finish_row();
    }
  }
  return b.build();
}

std::vector<double> apply(const OperatorMatrix& op, std::span<const double> values,
                          std::span<const double> ghosts) {
  if (values.size() != op.dimension()) {
    throw ShapeError("apply: field has " + std::to_string(values.size()) +
                     " entries, operator dimension is " + std::to_string(op.dimension()));
  }
  if (ghosts.size() != op.ghosts().size()) {
    throw ConfigError(op.has_ghosts() ? "apply: ghost values missing or incomplete"
                                      : "apply: ghost values given for an operator without ghosts");
  }
  std::vector<double> out(op.dimension(), 0.0);
  for (std::size_t r = 0; r < op.dimension(); ++r) {
    double acc = 0.0;
    for (const Entry& e : op.row(r)) acc += e.coeff * values[e.col];
    for (const Entry& e : op.ghost_row(r)) acc += e.coeff * ghosts[e.col];
    out[r] = acc;
  }
  return out;
}

DistributionField apply(const OperatorMatrix& op, const DistributionField& field,
                        std::span<const double> ghosts) {
  return {apply(op, std::span<const double>(field.values), ghosts), field.tick};
}

std::vector<double> to_dense(const OperatorMatrix& op) {
  const std::size_t n = op.dimension();
  std::vector<double> dense(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (const Entry& e : op.row(r)) dense[r * n + e.col] = e.coeff;
  }
  return dense;
}

KernelBasis kernel_basis(const OperatorMatrix& op, double tol) {
  if (!(tol > 0.0)) throw DomainError("kernel_basis: tol must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(op.dimension());
  const std::vector<double> dense = to_dense(op);
  const Eigen::MatrixXd a =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          dense.data(), n, n);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();

  KernelBasis out;
  out.tol = tol;
  out.op_norm = n > 0 ? sv(0) : 0.0;
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cutoff = tol * out.op_norm;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (sv(k) <= cutoff) {
      const Eigen::VectorXd v = svd.matrixV().col(k);
      out.basis.push_back({std::vector<double>(v.data(), v.data() + v.size()), 0});
    }
  }
  return out;
}

void export_triplets(const OperatorMatrix& op, std::ostream& out) {
  const std::size_t n = op.dimension();
  out << "# dimension " << n << "\n";
  out << "# ghost_columns " << op.ghosts().size() << "\n";
  for (std::size_t g = 0; g < op.ghosts().size(); ++g) {
    const GhostDof& gd = op.ghosts()[g];
    out << "# ghost " << n + g << " j=" << gd.site.j << " n=" << gd.site.n
        << " species=" << to_string(gd.species) << "\n";
  }
  out << "row col coeff\n";
  for (std::size_t r = 0; r < n; ++r) {
    for (const Entry& e : op.row(r)) out << r << ' ' << e.col << ' ' << e.coeff << '\n';
    for (const Entry& e : op.ghost_row(r)) out << r << ' ' << n + e.col << ' ' << e.coeff << '\n';
  }
}

}  // namespace chtn
