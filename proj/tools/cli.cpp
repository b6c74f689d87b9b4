#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <vector>

#include "chtn/constants.hpp"
#include "chtn/errors.hpp"
#include "chtn/io.hpp"
#include "chtn/laplacian.hpp"
#include "chtn/lcg.hpp"
#include "chtn/metric.hpp"

namespace chtn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

template <class T>
T parse_num(const std::string& key, const std::string& v) {
  std::istringstream ss(v);
  T out{};
  ss >> out;
  if (ss.fail() || !ss.eof()) throw ConfigError(key + ": cannot parse '" + v + "'");
  return out;
}

template <class E>
E parse_enum(const std::string& key, const std::string& v,
             std::initializer_list<std::pair<const char*, E>> options) {
  std::string allowed;
  for (const auto& [name, value] : options) {
    if (v == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(key + " must be one of {" + allowed + "}, got '" + v + "'");
}

std::string route_name(Route r) {
  switch (r) {
    case Route::ClosedForm: return "closed-form";
    case Route::Relax: return "relax";
    case Route::Kernel: return "kernel";
  }
  return "";
}

std::string sign_order_name(SignOrder s) { return s == SignOrder::UDUp ? "UD_up" : "UD_down"; }

PhysicalConstants constants_of(const RunConfig& cfg) {
  try {
    return PhysicalConstants(cfg.c, cfg.hbar, cfg.ell_P, cfg.R_AdS);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

double kappa_of(const RunConfig& cfg) {
  return cfg.kappa > 0.0 ? cfg.kappa : diffusion_coefficient(constants_of(cfg));
}

RelaxOptions relax_options(const RunConfig& cfg) {
  RelaxOptions o;
  o.tol = cfg.tol;
  o.max_ticks = cfg.max_ticks;
  o.substeps = cfg.substeps;
  o.kappa = kappa_of(cfg);
  return o;
}

json config_json(const RunConfig& cfg) {
  const NetworkConfig& n = cfg.network;
  return {{"width", n.width},
          {"depth", n.depth},
          {"mode", to_string(n.mode)},
          {"horizontal_bc", to_string(n.horizontal_bc)},
          {"radial_bc", to_string(n.radial_bc)},
          {"parity", to_string(n.parity_offset)},
          {"epsilon_l", n.lattice_constant},
          {"c", cfg.c},
          {"hbar", cfg.hbar},
          {"ell_p", cfg.ell_P},
          {"r_ads", cfg.R_AdS},
          {"tol", cfg.tol},
          {"max_ticks", cfg.max_ticks},
          {"substeps", cfg.substeps == 0 ? json("auto") : json(cfg.substeps)},
          {"kappa", kappa_of(cfg)},
          {"base", cfg.base},
          {"sign_order", sign_order_name(cfg.sign_order)},
          {"seed", cfg.seed},
          {"route", route_name(cfg.route)}};
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + path.string());
  return f;
}

void write_json_file(const fs::path& path, const json& doc) {
  auto f = open_out(path);
  io::write_json(f, doc);
}

void write_field(const RunConfig& cfg, const Network& net, const DistributionField& field,
                 const fs::path& stem) {
  if (cfg.write_csv) {
    auto f = open_out(fs::path(stem).replace_extension(".csv"));
    io::write_field_csv(f, net, field);
  }
  if (cfg.write_json) {
    write_json_file(fs::path(stem).replace_extension(".json"), io::field_to_json(net, field));
  }
}

std::vector<double> ghosts_for(const RunConfig& cfg, const Network& net, const OperatorMatrix& op) {
  if (!op.has_ghosts()) return {};
  return closed_form_ghosts(net, op, cfg.base, cfg.sign_order);
}

// Field scaled per species so that its value at site (0, 1) is 1.
DistributionField normalized_at_01(const Network& net, DistributionField f) {
  const std::size_t anchor = net.index_of({0, 1});
  for (Species sp : kAllSpecies) {
    const double a = f.values[dof_index(anchor, sp)];
    for (std::size_t i = 0; i < net.site_count(); ++i) f.values[dof_index(i, sp)] /= a;
  }
  return f;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300);
    worst = std::isnan(d) ? INFINITY : std::max(worst, d);
  }
  return worst;
}

// Relative distance from v to the span of an orthonormal basis.
double distance_to_span(const std::vector<DistributionField>& basis, const std::vector<double>& v) {
  std::vector<double> r = v;
  for (const DistributionField& b : basis) {
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += b.values[i] * v[i];
    for (std::size_t i = 0; i < v.size(); ++i) r[i] -= dot * b.values[i];
  }
  double nr = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    nr += r[i] * r[i];
    nv += v[i] * v[i];
  }
  return std::sqrt(nr / nv);
}

struct Criterion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

json criterion_json(const Criterion& c) {
  return {{"name", c.name},
          {"passed", c.passed},
          {"value", c.value},
          {"threshold", c.threshold},
          {"detail", c.detail}};
}

// Runs `body`; any exception marks the criterion failed with its message.
Criterion guarded(const std::string& name, double threshold,
                  const std::function<void(Criterion&)>& body) {
  Criterion c{name, false, 0.0, threshold, ""};
  try {
    body(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.value = INFINITY;
    c.detail = std::string("error: ") + e.what();
  }
  return c;
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

RunConfig make_run_config(const KeyValues& kv) {
  RunConfig cfg;
  NetworkConfig& net = cfg.network;
  for (const auto& [raw_key, v] : kv) {
    const std::string key = normalize_key(raw_key);
    if (key == "width") {
      net.width = parse_num<int>(key, v);
    } else if (key == "depth") {
      net.depth = parse_num<int>(key, v);
    } else if (key == "mode") {
      net.mode = parse_enum<Mode>(key, v, {{"rectangular", Mode::Rectangular}, {"tree", Mode::Tree}});
    } else if (key == "horizontal_bc") {
      net.horizontal_bc = parse_enum<HorizontalBc>(
          key, v, {{"periodic", HorizontalBc::Periodic}, {"dirichlet", HorizontalBc::Dirichlet}});
    } else if (key == "radial_bc") {
      net.radial_bc = parse_enum<RadialBc>(
          key, v, {{"dirichlet_ghost", RadialBc::DirichletGhost}, {"truncated", RadialBc::Truncated}});
    } else if (key == "parity") {
      net.parity_offset = parse_enum<ParityOffset>(
          key, v,
          {{"fixed_zero", ParityOffset::FixedZero},
           {"per_layer_alternating", ParityOffset::PerLayerAlternating}});
    } else if (key == "epsilon_l") {
      net.lattice_constant = parse_num<double>(key, v);
    } else if (key == "c") {
      cfg.c = parse_num<double>(key, v);
    } else if (key == "hbar") {
      cfg.hbar = parse_num<double>(key, v);
    } else if (key == "ell_p") {
      cfg.ell_P = parse_num<double>(key, v);
    } else if (key == "r_ads") {
      cfg.R_AdS = parse_num<double>(key, v);
    } else if (key == "tol") {
      cfg.tol = parse_num<double>(key, v);
    } else if (key == "max_ticks") {
      cfg.max_ticks = parse_num<std::int64_t>(key, v);
    } else if (key == "substeps") {
      cfg.substeps = v == "auto" ? 0 : parse_num<int>(key, v);
      if (v != "auto" && cfg.substeps < 1) throw ConfigError("substeps must be 'auto' or >= 1");
    } else if (key == "kappa") {
      cfg.kappa = v == "auto" ? 0.0 : parse_num<double>(key, v);
      if (v != "auto" && !(cfg.kappa > 0.0)) throw ConfigError("kappa must be 'auto' or > 0");
    } else if (key == "base") {
      cfg.base = parse_num<double>(key, v);
    } else if (key == "sign_order") {
      cfg.sign_order = parse_enum<SignOrder>(
          key, v, {{"UD_up", SignOrder::UDUp}, {"UD_down", SignOrder::UDDown}});
    } else if (key == "seed") {
      cfg.seed = parse_num<std::uint64_t>(key, v);
    } else if (key == "route") {
      cfg.route = parse_enum<Route>(
          key, v,
          {{"closed-form", Route::ClosedForm}, {"relax", Route::Relax}, {"kernel", Route::Kernel}});
    } else if (key == "snapshot_every") {
      cfg.snapshot_every = parse_num<std::int64_t>(key, v);
    } else if (key == "formats") {
      cfg.write_csv = v.find("csv") != std::string::npos;
      cfg.write_json = v.find("json") != std::string::npos;
      if (!cfg.write_csv && !cfg.write_json) throw ConfigError("formats must name csv and/or json");
    } else if (key == "out") {
      cfg.out_dir = v;
    } else if (key == "input") {
      cfg.input = v;
    } else {
      throw ConfigError("unknown config key '" + raw_key + "'");
    }
  }

  validate(net);
  constants_of(cfg);
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg.max_ticks < 0) throw ConfigError("max_ticks must be >= 0");
  if (!(cfg.base > 0.0)) throw ConfigError("base must be positive");
  if (cfg.snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
  return cfg;
}

int cmd_build(const RunConfig& cfg, std::ostream& log) {
  const Network net = build_network(cfg.network);
  const PhysicalConstants pc = constants_of(cfg);
  const DerivedScales scales = derive_scales(pc);
  const double area = static_cast<double>(net.pixel_area());
  const double action = chtn_action(area, pc);

  write_json_file(cfg.out_dir / "network.json", io::network_to_json(net));

  const OperatorMatrix op = assemble_operator(net);
  {
    auto f = open_out(cfg.out_dir / "operator_triplets.txt");
    export_triplets(op, f);
  }
  write_json_file(cfg.out_dir / "reconciliation.json",
                  io::reconciliation_to_json(reconcile(op, incidence_assemble(net, EdgeMultisetSpec{}))));

  const json summary = {{"pixel_area", net.pixel_area()},
                        {"action", action},
                        {"epsilon_E", scales.epsilon_E},
                        {"tension", scales.tension},
                        {"t_ML", scales.t_ML},
                        {"kappa", scales.kappa},
                        {"dimension", op.dimension()},
                        {"ghost_dofs", op.ghosts().size()},
                        {"mode", to_string(net.config().mode)}};
  write_json_file(cfg.out_dir / "build_summary.json", summary);
  log << "sites " << net.site_count() << "  pixel_area " << net.pixel_area() << "  action "
      << io::format_double(action) << "  kappa " << io::format_double(scales.kappa) << "\n";
  return kOk;
}

int cmd_steady(const RunConfig& cfg, std::ostream& log) {
  const Network net = build_network(cfg.network);
  const OperatorMatrix op = assemble_operator(net);
  const std::vector<double> ghosts = ghosts_for(cfg, net, op);

  json summary;
  summary["route"] = route_name(cfg.route);
  DistributionField field;
  SteadyReport report;
  report.kappa = kappa_of(cfg);

  switch (cfg.route) {
    case Route::ClosedForm: {
      field = closed_form_steady(net, cfg.base, cfg.sign_order);
      const double r = residual(op, field, ghosts);
      report.residual_history = {r};
      report.final_residual = r;
      report.converged = r <= cfg.tol;
      report.substeps = stable_substeps(op, report.kappa);
      report.min_value = *std::min_element(field.values.begin(), field.values.end());
      break;
    }
    case Route::Relax: {
      std::tie(field, report) =
          evolve_to_steady(random_field(net, cfg.seed), op, ghosts, relax_options(cfg));
      auto f = open_out(cfg.out_dir / "residual_history.csv");
      io::write_residual_csv(f, report.residual_history);
      break;
    }
    case Route::Kernel: {
      const KernelBasis kb = kernel_basis(op, cfg.tol);
      summary["kernel_dimension"] = kb.basis.size();
      summary["smallest_singular_value"] = kb.singular_values.back();
      if (!op.has_ghosts() && !kb.basis.empty()) {
        field = kb.basis.front();
        double sum = 0.0;
        for (double v : field.values) sum += v;
        if (sum < 0.0) {
          for (double& v : field.values) v = -v;
        }
      } else {
        field = solve_steady(op, ghosts);
      }
      const double r = residual(op, field, ghosts);
      report.residual_history = {r};
      report.final_residual = r;
      report.converged = r <= cfg.tol;
      report.substeps = stable_substeps(op, report.kappa);
      report.min_value = *std::min_element(field.values.begin(), field.values.end());
      break;
    }
  }

  write_field(cfg, net, field, cfg.out_dir / "field");
  json rep = io::steady_report_to_json(report);
  rep.update(summary);
  write_json_file(cfg.out_dir / "steady_report.json", rep);
  log << "route " << route_name(cfg.route) << "  converged " << (report.converged ? "true" : "false")
      << "  iterations " << report.iterations << "  residual "
      << io::format_double(report.final_residual) << "\n";
  return kOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& log) {
  const Network net = build_network(cfg.network);
  const OperatorMatrix op = assemble_operator(net);
  const std::vector<double> ghosts = ghosts_for(cfg, net, op);
  const RelaxOptions opts = relax_options(cfg);

  auto snapshot = [&](const DistributionField& f) {
    std::ostringstream name;
    name << "field_tick_" << std::setw(6) << std::setfill('0') << f.tick;
    write_field(cfg, net, f, cfg.out_dir / "snapshots" / name.str());
  };
  std::int64_t last_snapshot = -1;
  std::vector<double> history;
  DistributionField last;
  auto observer = [&](const DistributionField& f, double r) {
    history.push_back(r);
    last = f;
    if (f.tick % cfg.snapshot_every == 0) {
      snapshot(f);
      last_snapshot = f.tick;
    }
  };

  auto flush_history = [&] {
    auto f = open_out(cfg.out_dir / "residual_history.csv");
    io::write_residual_csv(f, history);
  };

  SteadyReport report;
  try {
    DistributionField final_field;
    std::tie(final_field, report) =
        evolve_to_steady(random_field(net, cfg.seed), op, ghosts, opts, observer);
  } catch (const InstabilityError&) {
    flush_history();
    throw;
  }
  if (last_snapshot != last.tick) snapshot(last);
  flush_history();
  write_json_file(cfg.out_dir / "evolve_report.json", io::steady_report_to_json(report));
  log << "ticks " << report.iterations << "  converged " << (report.converged ? "true" : "false")
      << "  residual " << io::format_double(report.final_residual) << "  substeps "
      << report.substeps << "\n";
  return kOk;
}

int cmd_metric(const RunConfig& cfg, std::ostream& log) {
  const Network net = build_network(cfg.network);
  const fs::path input = cfg.input.empty() ? cfg.out_dir / "field.csv" : cfg.input;
  std::ifstream in(input);
  if (!in) throw ConfigError("cannot open field CSV " + input.string());
  const DistributionField field = io::read_field_csv(in, net);

  const auto metric = induced_metric(field, net);
  const auto poincare = to_poincare(metric, cfg.network.lattice_constant);
  const Ads2Deviation dev = compare_ads2(poincare);

  if (cfg.write_csv) {
    auto f = open_out(cfg.out_dir / "metric.csv");
    io::write_metric_csv(f, metric, poincare);
  }
  if (cfg.write_json) write_json_file(cfg.out_dir / "metric.json", io::metric_to_json(metric, poincare));
  write_json_file(cfg.out_dir / "metric_summary.json",
                  {{"sites", metric.size()},
                   {"epsilon_l", cfg.network.lattice_constant},
                   {"deviation", io::deviation_to_json(dev)}});
  log << "metric sites " << metric.size() << "  max deviation " << io::format_double(dev.worst())
      << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  std::vector<Criterion> criteria;

  criteria.push_back(guarded("coefficient_derivation", 1e-12, [&](Criterion& c) {
    Lcg64 rng(cfg.seed);
    double worst = std::abs(diffusion_coefficient(constants_of(cfg)) * kPi * kPi - 1.0);
    for (int k = 0; k < 100; ++k) {
      auto draw = [&rng] { return std::exp(20.0 * (rng.uniform() - 0.5)); };
      const PhysicalConstants pc(draw(), draw(), draw(), draw());
      worst = std::max(worst, std::abs(diffusion_coefficient(pc) * kPi * kPi - 1.0));
    }
    c.value = worst;
    c.passed = worst <= c.threshold;
    c.detail = "max relative deviation of kappa from 1/pi^2 over 101 constant sets";
  }));

  criteria.push_back(guarded("radial_recurrence", 0.0, [&](Criterion& c) {
    long long worst = 0;
    for (int n = 1; n < 15; ++n) {
      worst = std::max(worst, std::llabs(radial_stencil<long long>(1LL << (n - 1), 1LL << n,
                                                                   1LL << (n + 1))));
    }
    c.value = static_cast<double>(worst);
    c.passed = worst == 0;
    c.detail = "eta(n) = 2^n in integer arithmetic on a depth-16 chain";
  }));

  criteria.push_back(guarded("horizontal_kernel", 1e-10, [&](Criterion& c) {
    const int w = std::min(cfg.network.width, 60);
    const OperatorMatrix layer = assemble_horizontal_layer(w);
    const KernelBasis kb = kernel_basis(layer, 1e-10);
    std::vector<double> ud(layer.dimension(), 0.0), du(layer.dimension(), 0.0),
        mono(layer.dimension(), 0.0);
    for (int j = 0; j < w; ++j) {
      ud[dof_index(j, Species::UD)] = j % 2 == 0 ? 1.0 : 2.0;
      du[dof_index(j, Species::DU)] = j % 2 == 0 ? 2.0 : 1.0;
      mono[dof_index(j, Species::UD)] = std::ldexp(1.0, j);
    }
    const double d = std::max(distance_to_span(kb.basis, ud), distance_to_span(kb.basis, du));
    const auto r = chtn::apply(layer, std::span<const double>(mono));
    double min_ratio = INFINITY;
    for (int j = 1; j + 1 < w; ++j) {
      const std::size_t k = dof_index(j, Species::UD);
      min_ratio = std::min(min_ratio, std::abs(r[k]) / mono[k]);
    }
    c.value = d;
    c.passed = d <= c.threshold && min_ratio >= 1.4;
    c.detail = "kernel dimension " + std::to_string(kb.basis.size()) +
               ", min |residual|/gamma for 2^j = " + io::format_double(min_ratio);
  }));

  // Shared fields for the steady-state and metric criteria.
  const Network net = build_network(cfg.network);
  const OperatorMatrix op = assemble_operator(net);
  std::vector<double> ghosts;
  DistributionField closed;
  DistributionField relaxed;
  bool relaxed_ok = false;

  criteria.push_back(guarded("closed_form_annihilation", 0.0, [&](Criterion& c) {
    ghosts = ghosts_for(cfg, net, op);
    closed = closed_form_steady(net, cfg.base, cfg.sign_order);
    c.value = residual(op, closed, ghosts);
    c.passed = c.value == 0.0;
    c.detail = "relative max-norm residual of the closed-form field";
  }));

  criteria.push_back(guarded("relax_converges", cfg.tol, [&](Criterion& c) {
    if (closed.values.empty()) throw UnsupportedModeError("closed form unavailable");
    SteadyReport rep;
    std::tie(relaxed, rep) = evolve_to_steady(random_field(net, cfg.seed), op, ghosts, relax_options(cfg));
    relaxed_ok = rep.converged;
    c.value = rep.final_residual;
    c.passed = rep.converged;
    c.detail = "ticks " + std::to_string(rep.iterations) + ", substeps " + std::to_string(rep.substeps);
  }));

  criteria.push_back(guarded("three_route_agreement", 1e-8, [&](Criterion& c) {
    if (!relaxed_ok) throw InstabilityError("relaxation did not converge");
    const DistributionField solved = solve_steady(op, ghosts);
    const auto ref = normalized_at_01(net, closed).values;
    c.value = std::max(max_rel_diff(normalized_at_01(net, relaxed).values, ref),
                       max_rel_diff(normalized_at_01(net, solved).values, ref));
    c.passed = c.value <= c.threshold;
    c.detail = "relax and dense solve vs closed form, normalized at site (0, 1)";
  }));

  criteria.push_back(guarded("metric_exactness", 1e-12, [&](Criterion& c) {
    if (closed.values.empty()) throw UnsupportedModeError("closed form unavailable");
    const auto metric = induced_metric(closed, net);
    double worst = 0.0;
    for (const MetricComponents& g : metric) {
      worst = std::max({worst, std::abs(g.g_jj - std::ldexp(1.0, -2 * g.site.n)),
                        std::abs(g.g_nn - 1.0), std::abs(g.g_jn)});
    }
    for (double eps : {1.0, 0.5, 3.0, cfg.network.lattice_constant}) {
      worst = std::max(worst, compare_ads2(to_poincare(metric, eps)).worst());
    }
    c.value = std::isnan(worst) ? INFINITY : worst;
    c.passed = !metric.empty() && c.value <= c.threshold;
    c.detail = std::to_string(metric.size()) + " sites; lattice and Poincare components";
  }));

  criteria.push_back(guarded("relaxed_metric", 1e-6, [&](Criterion& c) {
    if (!relaxed_ok) throw InstabilityError("relaxation did not converge");
    const auto metric = induced_metric(relaxed, net);
    c.value = compare_ads2(to_poincare(metric, cfg.network.lattice_constant)).worst();
    c.passed = !metric.empty() && c.value <= c.threshold;
    c.detail = "AdS2 deviation of the relaxed steady field";
  }));

  bool all = true;
  json list = json::array();
  for (const Criterion& c : criteria) {
    all = all && c.passed;
    list.push_back(criterion_json(c));
    log << (c.passed ? "PASS " : "FAIL ") << c.name << "  value " << io::format_double(c.value)
        << "  threshold " << io::format_double(c.threshold) << "\n";
  }
  write_json_file(cfg.out_dir / "verify.json",
                  {{"config", config_json(cfg)}, {"criteria", std::move(list)}, {"all_passed", all}});
  return all ? kOk : kVerifyFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bipartite-spin random walk on a classicalized holographic tensor network"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key=value configuration file");
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--out", "output directory (CHTN_OUT overrides)"},
      {"--route", "steady route: closed-form | relax | kernel"},
      {"--width", "sites per layer"},
      {"--depth", "number of RG layers"},
      {"--mode", "rectangular | tree"},
      {"--horizontal-bc", "periodic | dirichlet"},
      {"--radial-bc", "dirichlet_ghost | truncated"},
      {"--parity", "fixed_zero | per_layer_alternating"},
      {"--tol", "relative residual tolerance"},
      {"--max-ticks", "tick budget for relaxation"},
      {"--substeps", "auto | explicit substeps per tick"},
      {"--kappa", "auto | override of the master-equation coefficient"},
      {"--seed", "seed of the random initial field"},
      {"--sign-order", "UD_up | UD_down"},
      {"--base", "overall scale of the closed-form field"},
      {"--epsilon-l", "lattice constant"},
      {"--snapshot-every", "snapshot interval in ticks (evolve)"},
      {"--formats", "csv | json | csv,json"},
      {"--input", "field CSV read by `metric`"},
  };
  std::map<std::string, std::string> flag_values;
  for (const auto& [name, help] : flags) app.add_option(name, flag_values[name], help);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"build", "assemble the network and operator, report area and derived scales"},
      {"steady", "steady state by the selected route"},
      {"evolve", "relax from a random field, writing snapshots"},
      {"metric", "induced metric of a field CSV"},
      {"verify", "run every acceptance check and write verify.json"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    KeyValues kv;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config file " + config_path);
      kv = parse_key_values(f);
    }
    for (const auto& [name, help] : flags) {
      if (app.count(name) > 0) kv[normalize_key(name.substr(2))] = flag_values[name];
    }
    if (const char* env = std::getenv("CHTN_OUT"); env != nullptr && *env != '\0') kv["out"] = env;
    const RunConfig cfg = make_run_config(kv);

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "build") return cmd_build(cfg, out);
    if (cmd == "steady") return cmd_steady(cfg, out);
    if (cmd == "evolve") return cmd_evolve(cfg, out);
    if (cmd == "metric") return cmd_metric(cfg, out);
    return cmd_verify(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnsupportedModeError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InstabilityError& e) {
    err << "instability: " << e.what() << "\n";
    return kInstability;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace chtn::cli
