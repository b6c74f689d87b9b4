#include "chtn/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "chtn/errors.hpp"

namespace chtn {

namespace {

double log2_at(const DistributionField& field, const Network& net, Site s, Species sp) {
  const double v = field.values[dof_index(net.index_of(s), sp)];
  if (!(v > 0.0)) {
    throw DomainError("induced_metric: non-positive value " + std::to_string(v) + " at site (" +
                      std::to_string(s.j) + ", " + std::to_string(s.n) + ") species " +
                      std::string(to_string(sp)));
  }
  return std::log2(v);
}

// NaN would be ignored by std::max.
double finite_or_inf(double x) {
  return std::isnan(x) ? std::numeric_limits<double>::infinity() : x;
}

}  // namespace

std::vector<MetricComponents> induced_metric(const DistributionField& field, const Network& net) {
  if (net.config().mode != Mode::Rectangular) {
    throw UnsupportedModeError("induced_metric requires rectangular mode");
  }
  if (field.size() != 2 * net.site_count()) {
    throw ShapeError("induced_metric: field does not match network");
  }
  std::vector<MetricComponents> out;
  for (Site s : net.sites()) {
    const Site right = net.right_of(s);
    const Site up{s.j, s.n + 1};
    if (!net.contains(right) || !net.contains(up)) continue;

    const double dv_j = std::ldexp(1.0, s.n);
    MetricComponents g{s, 0.0, 0.0, 0.0};
    for (Species sp : kAllSpecies) {
      const double here = log2_at(field, net, s, sp);
      const double dj = (log2_at(field, net, right, sp) - here) / dv_j;
      const double dn = log2_at(field, net, up, sp) - here;
      g.g_jj += 0.5 * dj * dj;
      g.g_nn += 0.5 * dn * dn;
      g.g_jn += 0.5 * dj * dn;
    }
    out.push_back(g);
  }
  return out;
}

PoincareComponents to_poincare(const MetricComponents& g, double epsilon_L) {
  if (!(epsilon_L > 0.0)) throw DomainError("to_poincare: epsilon_L must be positive");
  const double dv_j = std::ldexp(1.0, g.site.n);
  const double r = dv_j * epsilon_L;
  const double dx = dv_j * epsilon_L;
  const double dr = r;
  const double sx = dv_j / dx;
  const double sr = 1.0 / dr;
  return {g.site, g.site.j * epsilon_L, r, g.g_jj * sx * sx, g.g_nn * sr * sr, g.g_jn * sx * sr};
}

std::vector<PoincareComponents> to_poincare(std::span<const MetricComponents> g,
                                            double epsilon_L) {
  std::vector<PoincareComponents> out;
  out.reserve(g.size());
  for (const MetricComponents& m : g) out.push_back(to_poincare(m, epsilon_L));
  return out;
}

double Ads2Deviation::worst() const { return std::max({max_xx, max_rr, max_xr}); }

Ads2Deviation compare_ads2(std::span<const PoincareComponents> poincare) {
  Ads2Deviation dev;
  std::map<int, LayerDeviation> layers;
  for (const PoincareComponents& p : poincare) {
    const double r2 = p.r * p.r;
    const double dxx = finite_or_inf(std::abs(p.g_xx * r2 - 1.0));
    const double drr = finite_or_inf(std::abs(p.g_rr * r2 - 1.0));
    const double dxr = finite_or_inf(std::abs(p.g_xr));
    auto [it, inserted] = layers.try_emplace(p.site.n, LayerDeviation{p.site.n, 0, 0.0, 0.0, 0.0});
    LayerDeviation& l = it->second;
    ++l.sites;
    l.max_xx = std::max(l.max_xx, dxx);
    l.max_rr = std::max(l.max_rr, drr);
    l.max_xr = std::max(l.max_xr, dxr);
    dev.max_xx = std::max(dev.max_xx, dxx);
    dev.max_rr = std::max(dev.max_rr, drr);
    dev.max_xr = std::max(dev.max_xr, dxr);
  }
  for (auto& [n, l] : layers) dev.layers.push_back(l);
  return dev;
}

}  // namespace chtn
