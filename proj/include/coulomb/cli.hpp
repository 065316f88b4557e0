#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coulomb/error.hpp"

namespace cgas {

enum class Command { Sample, Verify, Report };
enum class EnsembleKind { Coulomb, Ginibre, Spherical, Truncated, Product, Hermite };
enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Bad configuration value; the message names the offending field.
class ConfigError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

struct RunConfig {
  Command command = Command::Sample;
  EnsembleKind ensemble = EnsembleKind::Ginibre;
  long n = 16;
  double beta = 2.0;
  std::uint64_t seed = 1;
  std::size_t chains = 1;
  std::size_t samples = 100;
  std::size_t burn_in = 10000;
  std::size_t thin = 10;
  int dim = 2;
  /// Truncated: unitary size (0 means 2n). Product: number of factors.
  long m = 0;
  std::string output_path;  ///< empty means stdout
  Format format = Format::Csv;
  int threads = 0;          ///< 0 keeps the OpenMP default
  std::string suite = "default";
  bool self_test = false;   ///< verify with a deliberately corrupted oracle
  std::vector<std::string> inputs;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

std::string to_string(EnsembleKind e);
EnsembleKind parse_ensemble(const std::string& s);

/// One row of a verification report.
struct CheckRow {
  std::string check_id;
  double statistic = 0.0;
  double p_value_or_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

inline constexpr std::size_t kDefaultSuiteSize = 12;
inline constexpr std::size_t kQuickSuiteSize = 6;
std::vector<std::string> suite_check_ids(const std::string& suite);
std::vector<CheckRow> run_verify_suite(const RunConfig& cfg);

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full front end: parses argv, dispatches, maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string version_string();

}  // namespace cgas
