#pragma once

#include <span>
#include <vector>

#include "chtn/field.hpp"
#include "chtn/network.hpp"

namespace chtn {

// Induced metric in lattice coordinates (j, n) at one site.
struct MetricComponents {
  Site site;
  double g_jj;
  double g_nn;
  double g_jn;
};

// Same metric in half-plane coordinates x = j eps, r = 2^n eps.
struct PoincareComponents {
  Site site;
  double x;
  double r;
  double g_xx;
  double g_rr;
  double g_xr;
};

// g_ab = 1/2 sum_alpha (D_a log2 f_alpha / dv_a)(D_b log2 f_alpha / dv_b) with
// forward differences and cell sizes dv_j = 2^n, dv_n = 1. Evaluated at every
// site that has both a right and an upper neighbour. Rectangular mode only.
// Throws DomainError naming the first non-positive value it needs.
std::vector<MetricComponents> induced_metric(const DistributionField& field, const Network& net);

// Discrete cells dx = 2^n eps and dr = (2^(n+1) - 2^n) eps = r.
PoincareComponents to_poincare(const MetricComponents& g, double epsilon_L);
std::vector<PoincareComponents> to_poincare(std::span<const MetricComponents> g,
                                            double epsilon_L);

struct LayerDeviation {
  int n;
  std::size_t sites;
  double max_xx;  // max |g_xx r^2 - 1|
  double max_rr;  // max |g_rr r^2 - 1|
  double max_xr;  // max |g_xr|
};

struct Ads2Deviation {
  double max_xx = 0.0;
  double max_rr = 0.0;
  double max_xr = 0.0;
  std::vector<LayerDeviation> layers;

  double worst() const;
};

// Deviation of each site from the unit-radius AdS2 Poincare metric.
Ads2Deviation compare_ads2(std::span<const PoincareComponents> poincare);

}  // namespace chtn
