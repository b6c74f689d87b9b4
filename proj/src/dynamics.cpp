#include "chtn/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chtn/errors.hpp"
#include "chtn/lcg.hpp"

namespace chtn {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

int stable_substeps(const OperatorMatrix& op, double kappa) {
  const double m = std::ceil(kappa * op.max_abs_row_sum() / 1.5);
  return std::max(1, static_cast<int>(m));
}

DistributionField step(const DistributionField& field, const OperatorMatrix& op, double kappa,
                       int substeps, std::span<const double> ghosts) {
  if (!(kappa > 0.0)) throw DomainError("step: kappa must be positive");
  if (substeps < 1) throw DomainError("step: substeps must be >= 1");
  if (field.size() != op.dimension()) throw ShapeError("step: field/operator dimension mismatch");

  const double h = kappa / substeps;
  DistributionField out = field;
  for (int k = 0; k < substeps; ++k) {
    const std::vector<double> lap = apply(op, std::span<const double>(out.values), ghosts);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= h * lap[i];
  }
  out.tick = field.tick + 1;
  return out;
}

double residual(const OperatorMatrix& op, const DistributionField& field,
                std::span<const double> ghosts) {
  const std::vector<double> lap = apply(op, std::span<const double>(field.values), ghosts);
  return max_abs(lap) / std::max(max_abs(field.values), 1e-300);
}

namespace {

struct ResidualPair {
  double relative;
  double absolute;
};

ResidualPair residual_pair(const OperatorMatrix& op, const DistributionField& field,
                           std::span<const double> ghosts) {
  const std::vector<double> lap = apply(op, std::span<const double>(field.values), ghosts);
  const double a = max_abs(lap);
  return {a / std::max(max_abs(field.values), 1e-300), a};
}

}  // namespace

std::pair<DistributionField, SteadyReport> evolve_to_steady(DistributionField field,
                                                            const OperatorMatrix& op,
                                                            std::span<const double> ghosts,
                                                            const RelaxOptions& options,
                                                            const TickObserver& observer) {
  if (!(options.tol > 0.0)) throw DomainError("evolve_to_steady: tol must be positive");
  if (options.max_ticks < 0) throw DomainError("evolve_to_steady: max_ticks must be >= 0");

  SteadyReport report;
  report.kappa = options.kappa;
  report.substeps = options.substeps > 0 ? options.substeps : stable_substeps(op, options.kappa);

  auto track_min = [&report](const DistributionField& f) {
    for (double v : f.values) report.min_value = std::min(report.min_value, v);
  };
  report.min_value = std::numeric_limits<double>::infinity();
  track_min(field);

  // A zero field of a homogeneous problem is already steady.
  if (!op.has_ghosts() && all_zero(field.values)) {
    report.residual_history.push_back(0.0);
    report.converged = true;
    if (observer) observer(field, 0.0);
    return {std::move(field), std::move(report)};
  }

  // Divergence is judged on the absolute residual: once a mode blows up the
  // relative residual saturates at the spectral radius.
  ResidualPair rp = residual_pair(op, field, ghosts);
  double r = rp.relative;
  double abs_min = rp.absolute;
  report.residual_history.push_back(r);
  if (observer) observer(field, r);

  while (r > options.tol && report.iterations < options.max_ticks) {
    field = step(field, op, options.kappa, report.substeps, ghosts);
    ++report.iterations;
    rp = residual_pair(op, field, ghosts);
    r = rp.relative;
    report.residual_history.push_back(r);
    track_min(field);
    if (observer) observer(field, r);
    if (!std::isfinite(rp.absolute) || rp.absolute > 10.0 * abs_min) {
      throw InstabilityError("relaxation diverged at tick " + std::to_string(field.tick) +
                             " (residual " + std::to_string(rp.absolute) + ", substeps " +
                             std::to_string(report.substeps) + "); increase substeps");
    }
    abs_min = std::min(abs_min, rp.absolute);
  }
  report.final_residual = r;
  report.converged = r <= options.tol;
  return {std::move(field), std::move(report)};
}

double closed_form_value(DofIndex dof, double base, SignOrder order, ParityOffset parity) {
  const int phase = staggering_phase(dof.site.j, dof.site.n, parity);
  // UDUp: UD is 2 on odd-phase sites, DU on even-phase sites.
  const bool ud_high = (phase == 1) == (order == SignOrder::UDUp);
  const bool high = dof.species == Species::UD ? ud_high : !ud_high;
  return base * std::ldexp(high ? 2.0 : 1.0, dof.site.n);
}

DistributionField closed_form_steady(const Network& net, double base, SignOrder order) {
  if (net.config().mode != Mode::Rectangular) {
    throw UnsupportedModeError("closed_form_steady requires rectangular mode");
  }
  if (!(base > 0.0)) throw DomainError("closed_form_steady: base must be positive");
  DistributionField f = zero_field(net);
  for (std::size_t i = 0; i < net.site_count(); ++i) {
    for (Species sp : kAllSpecies) {
      f.values[dof_index(i, sp)] =
          closed_form_value({net.sites()[i], sp}, base, order, net.config().parity_offset);
    }
  }
  return f;
}

std::vector<double> closed_form_ghosts(const Network& net, const OperatorMatrix& op, double base,
                                       SignOrder order) {
  if (net.config().mode != Mode::Rectangular) {
    throw UnsupportedModeError("closed-form ghost values require rectangular mode");
  }
  std::vector<double> g;
  g.reserve(op.ghosts().size());
  for (const GhostDof& gd : op.ghosts()) {
    g.push_back(closed_form_value(gd, base, order, net.config().parity_offset));
  }
  return g;
}

DistributionField solve_steady(const OperatorMatrix& op, std::span<const double> ghosts) {
  const Eigen::Index n = static_cast<Eigen::Index>(op.dimension());
  const std::vector<double> dense = to_dense(op);
  const Eigen::MatrixXd a =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          dense.data(), n, n);
  // Right-hand side: minus the ghost contribution of each row.
  const std::vector<double> zeros(op.dimension(), 0.0);
  const std::vector<double> ghost_part = apply(op, zeros, ghosts);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = -ghost_part[static_cast<std::size_t>(i)];

  const Eigen::VectorXd x = a.completeOrthogonalDecomposition().solve(rhs);
  return {std::vector<double>(x.data(), x.data() + x.size()), 0};
}

DistributionField random_field(const Network& net, std::uint64_t seed) {
  Lcg64 rng(seed);
  DistributionField f = zero_field(net);
  for (double& v : f.values) v = 0.5 + rng.uniform();
  return f;
}

}  // namespace chtn
