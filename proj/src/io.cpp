#include "chtn/io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "chtn/errors.hpp"

namespace chtn::io {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

template <class T>
T parse_number(const std::string& s, std::size_t line_no) {
  T v{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("field CSV line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
  }
  return v;
}

json site_json(Site s) { return json::array({s.j, s.n}); }

json spins_json(const std::array<Spin, 2>& pair) {
  json a = json::array();
  for (Spin s : pair) a.push_back(s == Spin::Up ? "up" : "down");
  return a;
}

json sites_json(const std::vector<Site>& sites) {
  json a = json::array();
  for (Site s : sites) a.push_back(site_json(s));
  return a;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

void write_field_csv(std::ostream& out, const Network& net, const DistributionField& field) {
  if (field.size() != 2 * net.site_count()) throw ShapeError("field does not match network");
  out << "j,n,species,value,tick\n";
  for (std::size_t i = 0; i < net.site_count(); ++i) {
    const Site s = net.sites()[i];
    for (Species sp : kAllSpecies) {
      out << s.j << ',' << s.n << ',' << to_string(sp) << ','
          << format_double(field.values[dof_index(i, sp)]) << ',' << field.tick << '\n';
    }
  }
}

DistributionField read_field_csv(std::istream& in, const Network& net) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("field CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "j,n,species,value,tick") {
    throw ConfigError("field CSV header must be 'j,n,species,value,tick'");
  }
  DistributionField f = zero_field(net);
  std::vector<bool> seen(f.size(), false);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 5) {
      throw ConfigError("field CSV line " + std::to_string(line_no) + ": expected 5 columns");
    }
    const Site s{parse_number<int>(cols[0], line_no), parse_number<int>(cols[1], line_no)};
    Species sp;
    if (cols[2] == "UD") {
      sp = Species::UD;
    } else if (cols[2] == "DU") {
      sp = Species::DU;
    } else {
      throw ConfigError("field CSV line " + std::to_string(line_no) + ": unknown species '" +
                        cols[2] + "'");
    }
    if (!net.contains(s)) {
      throw ConfigError("field CSV line " + std::to_string(line_no) +
                        ": site is not in the configured network");
    }
    const std::size_t d = dof_index(net.index_of(s), sp);
    if (seen[d]) throw ConfigError("field CSV line " + std::to_string(line_no) + ": duplicate entry");
    seen[d] = true;
    f.values[d] = parse_number<double>(cols[3], line_no);
    f.tick = parse_number<std::int64_t>(cols[4], line_no);
  }
  for (std::size_t d = 0; d < seen.size(); ++d) {
    if (!seen[d]) {
      const Site s = net.sites()[site_of_dof(d)];
      throw ConfigError("field CSV is missing site (" + std::to_string(s.j) + ", " +
                        std::to_string(s.n) + ") species " +
                        std::string(to_string(species_of_dof(d))));
    }
  }
  return f;
}

void write_residual_csv(std::ostream& out, std::span<const double> history,
                        std::int64_t first_tick) {
  out << "tick,residual\n";
  for (std::size_t k = 0; k < history.size(); ++k) {
    out << first_tick + static_cast<std::int64_t>(k) << ',' << format_double(history[k]) << '\n';
  }
}

void write_metric_csv(std::ostream& out, std::span<const MetricComponents> metric,
                      std::span<const PoincareComponents> poincare) {
  if (metric.size() != poincare.size()) throw ShapeError("metric/poincare tables differ in size");
  out << "j,n,g_jj,g_nn,g_jn,g_xx,g_rr,g_xr\n";
  for (std::size_t i = 0; i < metric.size(); ++i) {
    const auto& g = metric[i];
    const auto& p = poincare[i];
    out << g.site.j << ',' << g.site.n << ',' << format_double(g.g_jj) << ','
        << format_double(g.g_nn) << ',' << format_double(g.g_jn) << ',' << format_double(p.g_xx)
        << ',' << format_double(p.g_rr) << ',' << format_double(p.g_xr) << '\n';
  }
}

json network_to_json(const Network& net) {
  const NetworkConfig& c = net.config();
  json doc;
  doc["config"] = {{"width", c.width},
                   {"depth", c.depth},
                   {"mode", to_string(c.mode)},
                   {"horizontal_bc", to_string(c.horizontal_bc)},
                   {"radial_bc", to_string(c.radial_bc)},
                   {"parity_offset", to_string(c.parity_offset)},
                   {"lattice_constant", c.lattice_constant}};
  doc["pixel_area"] = net.pixel_area();
  json sites = json::array();
  for (Site s : net.sites()) {
    const SiteState& st = net.state_at(s);
    const Neighbors& nb = net.neighbors(s);
    sites.push_back({{"j", s.j},
                     {"n", s.n},
                     {"species_phase", st.species_phase},
                     {"earlier", spins_json(st.earlier)},
                     {"later", spins_json(st.later)},
                     {"horizontal", sites_json(nb.horizontal)},
                     {"radial_up", sites_json(nb.radial_up)},
                     {"radial_down", sites_json(nb.radial_down)}});
  }
  doc["sites"] = std::move(sites);
  return doc;
}

json field_to_json(const Network& net, const DistributionField& field) {
  json rows = json::array();
  for (std::size_t i = 0; i < net.site_count(); ++i) {
    const Site s = net.sites()[i];
    rows.push_back({{"j", s.j},
                    {"n", s.n},
                    {"UD", field.values[dof_index(i, Species::UD)]},
                    {"DU", field.values[dof_index(i, Species::DU)]}});
  }
  return {{"tick", field.tick}, {"values", std::move(rows)}};
}

json metric_to_json(std::span<const MetricComponents> metric,
                    std::span<const PoincareComponents> poincare) {
  if (metric.size() != poincare.size()) throw ShapeError("metric/poincare tables differ in size");
  json rows = json::array();
  for (std::size_t i = 0; i < metric.size(); ++i) {
    const auto& g = metric[i];
    const auto& p = poincare[i];
    rows.push_back({{"j", g.site.j},
                    {"n", g.site.n},
                    {"g_jj", g.g_jj},
                    {"g_nn", g.g_nn},
                    {"g_jn", g.g_jn},
                    {"x", p.x},
                    {"r", p.r},
                    {"g_xx", p.g_xx},
                    {"g_rr", p.g_rr},
                    {"g_xr", p.g_xr}});
  }
  return rows;
}

json steady_report_to_json(const SteadyReport& report) {
  return {{"converged", report.converged},
          {"iterations", report.iterations},
          {"final_residual", report.final_residual},
          {"substeps", report.substeps},
          {"kappa", report.kappa},
          {"min_value", report.min_value},
          {"residual_history_length", report.residual_history.size()}};
}

json deviation_to_json(const Ads2Deviation& dev) {
  json layers = json::array();
  for (const LayerDeviation& l : dev.layers) {
    layers.push_back({{"n", l.n},
                      {"sites", l.sites},
                      {"max_abs_g_xx_r2_minus_1", l.max_xx},
                      {"max_abs_g_rr_r2_minus_1", l.max_rr},
                      {"max_abs_g_xr", l.max_xr}});
  }
  return {{"max_abs_g_xx_r2_minus_1", dev.max_xx},
          {"max_abs_g_rr_r2_minus_1", dev.max_rr},
          {"max_abs_g_xr", dev.max_xr},
          {"layers", std::move(layers)}};
}

json reconciliation_to_json(const ReconciliationReport& report) {
  json differing = json::array();
  json reconciled = json::array();
  for (const RowReconciliation& r : report.rows) {
    json row = {{"row", r.row},
                {"j", r.dof.site.j},
                {"n", r.dof.site.n},
                {"species", to_string(r.dof.species)}};
    if (r.reconciled) {
      row["scale"] = r.scale;
      reconciled.push_back(std::move(row));
    } else {
      row["reason"] = r.reason;
      differing.push_back(std::move(row));
    }
  }
  return {{"rows_total", report.rows_total},
          {"rows_reconciled", report.rows_reconciled},
          {"reconciled", std::move(reconciled)},
          {"differing", std::move(differing)}};
}

void write_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

}  // namespace chtn::io
