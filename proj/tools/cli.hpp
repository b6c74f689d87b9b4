#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "chtn/dynamics.hpp"
#include "chtn/network.hpp"

namespace chtn::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kConfigError = 2,
  kInstability = 3,
  kDomainError = 4,
};

enum class Route { ClosedForm, Relax, Kernel };

struct RunConfig {
  NetworkConfig network;
  double c = 1.0;
  double hbar = 1.0;
  double ell_P = 1.0;
  double R_AdS = 1.0;

  double tol = 1e-10;
  std::int64_t max_ticks = 50000;
  int substeps = 0;    // 0 = auto (Gershgorin rule)
  double kappa = 0.0;  // 0 = derived from the constants
  double base = 1.0;
  SignOrder sign_order = SignOrder::UDUp;
  std::uint64_t seed = 42;
  Route route = Route::ClosedForm;
  std::int64_t snapshot_every = 100;
  bool write_csv = true;
  bool write_json = false;
  std::filesystem::path out_dir = "chtn_out";
  std::filesystem::path input;  // field CSV for `metric`; empty = <out>/field.csv
};

using KeyValues = std::map<std::string, std::string>;

// Flat "key = value" lines; '#' starts a comment. Dashes in keys are read as
// underscores. Throws ConfigError on a malformed line.
KeyValues parse_key_values(std::istream& in);

// Applies key/value overrides on top of the defaults and validates the result.
// Throws ConfigError for unknown keys or invalid values.
RunConfig make_run_config(const KeyValues& kv);

int cmd_build(const RunConfig& cfg, std::ostream& log);
int cmd_steady(const RunConfig& cfg, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, std::ostream& log);
int cmd_metric(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);

// Full command line entry point; maps exceptions onto exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chtn::cli
