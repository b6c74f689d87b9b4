#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "chtn/dynamics.hpp"
#include "chtn/field.hpp"
#include "chtn/laplacian.hpp"
#include "chtn/metric.hpp"
#include "chtn/network.hpp"

namespace chtn::io {

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

// Header: j,n,species,value,tick
void write_field_csv(std::ostream& out, const Network& net, const DistributionField& field);
// Every (site, species) of `net` must appear exactly once. Throws
// ConfigError on malformed input.
DistributionField read_field_csv(std::istream& in, const Network& net);

// Header: tick,residual. Row k has tick first_tick + k.
void write_residual_csv(std::ostream& out, std::span<const double> history,
                        std::int64_t first_tick = 0);

// Header: j,n,g_jj,g_nn,g_jn,g_xx,g_rr,g_xr
void write_metric_csv(std::ostream& out, std::span<const MetricComponents> metric,
                      std::span<const PoincareComponents> poincare);

nlohmann::json network_to_json(const Network& net);
nlohmann::json field_to_json(const Network& net, const DistributionField& field);
nlohmann::json metric_to_json(std::span<const MetricComponents> metric,
                              std::span<const PoincareComponents> poincare);
nlohmann::json steady_report_to_json(const SteadyReport& report);
nlohmann::json deviation_to_json(const Ads2Deviation& dev);
nlohmann::json reconciliation_to_json(const ReconciliationReport& report);

// Two-space indented JSON with a trailing newline.
void write_json(std::ostream& out, const nlohmann::json& doc);

}  // namespace chtn::io
