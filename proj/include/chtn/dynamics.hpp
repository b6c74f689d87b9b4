#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "chtn/constants.hpp"
#include "chtn/field.hpp"
#include "chtn/laplacian.hpp"
#include "chtn/network.hpp"

namespace chtn {

// Which species rises by a factor 2 across odd-phase sites.
enum class SignOrder { UDUp, UDDown };

struct SteadyReport {
  std::vector<double> residual_history;  // entry k is the residual after k ticks
  double final_residual = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
  int substeps = 1;
  double kappa = 0.0;
  double min_value = 0.0;  // positivity monitor, not enforced
};

// Substep count from the Gershgorin bound:
// ceil(kappa * max_row sum |coefficients| / 1.5), at least 1.
int stable_substeps(const OperatorMatrix& op, double kappa);

// One tick of the master equation, split into `substeps` explicit updates
// f <- f - (kappa / substeps) * Laplacian f. Advances tick by one.
DistributionField step(const DistributionField& field, const OperatorMatrix& op, double kappa,
                       int substeps, std::span<const double> ghosts = {});

// ||Laplacian f||_inf / max(||f||_inf, 1e-300).
double residual(const OperatorMatrix& op, const DistributionField& field,
                std::span<const double> ghosts = {});

struct RelaxOptions {
  double tol = 1e-10;
  std::int64_t max_ticks = 50000;
  int substeps = 0;  // 0 selects stable_substeps()
  double kappa = diffusion_coefficient(PhysicalConstants{});
};

using TickObserver = std::function<void(const DistributionField&, double residual)>;

// Steps until residual <= tol or max_ticks. The observer, if set, sees the
// initial field and every subsequent tick. Throws InstabilityError when the
// absolute residual ||Laplacian f||_inf exceeds ten times its running minimum.
std::pair<DistributionField, SteadyReport> evolve_to_steady(DistributionField field,
                                                            const OperatorMatrix& op,
                                                            std::span<const double> ghosts,
                                                            const RelaxOptions& options,
                                                            const TickObserver& observer = {});

// base * 2^n * gamma, with gamma in {1, 2} following the staggering phase.
// Valid for any integer (j, n), so it also supplies ghost values.
double closed_form_value(DofIndex dof, double base, SignOrder order, ParityOffset parity);

// Separable steady state. Throws UnsupportedModeError in tree mode and
// DomainError for base <= 0.
DistributionField closed_form_steady(const Network& net, double base,
                                     SignOrder order = SignOrder::UDUp);

// Closed-form values at every ghost dof of `op`.
std::vector<double> closed_form_ghosts(const Network& net, const OperatorMatrix& op, double base,
                                       SignOrder order = SignOrder::UDUp);

// Direct dense solve of Laplacian f = 0 with ghosts folded into the
// right-hand side (minimum-norm solution if the operator is singular).
DistributionField solve_steady(const OperatorMatrix& op, std::span<const double> ghosts = {});

// Strictly positive field with entries 0.5 + U[0, 1) drawn from Lcg64(seed)
// in dof order.
DistributionField random_field(const Network& net, std::uint64_t seed);

}  // namespace chtn
