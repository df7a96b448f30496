#ifndef SEE_CLI_HPP
#define SEE_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "see/model.hpp"
#include "see/outage.hpp"

namespace see::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// exit codes shared by the library-level runner and the executable
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitNumerical = 3;

enum class Kind { optimize, outage, mc, sweep };

struct Sweep {
    std::string axis;
    std::vector<double> values;
};

struct ExperimentConfig {
    Kind kind = Kind::outage;
    std::optional<SystemConfig> system;
    std::optional<OutageScenario> scenario;
    std::optional<Sweep> sweep;
    std::uint64_t seed = 0;
    long long trials = 1000000;
    std::string output_path = "out.csv";
    // channel source for optimize runs: explicit gains win over the seed
    std::optional<std::uint64_t> channel_seed;
    std::optional<Mat> gains_bob;
    std::optional<Mat> gains_eve;
};

// Parses the JSON config schema documented in the README. Unknown keys,
// missing required keys, wrong types and unit conflicts (a key given both
// in watts and as *_dbm) are reported as std::invalid_argument.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig load_config_from_string(const std::string& json_text);

// Runs the experiment and writes the CSV to config.output_path.
// Returns one of the kExit* codes.
int run(const ExperimentConfig& config);

struct VerifyReport {
    bool pass = false;
    double max_dev_stderr_units = 0.0;
    double max_abs_dev = 0.0;
    std::string worst_point;
    bool stderr_dominates_tolerance = false;
    std::vector<std::string> lines; // human-readable per-point results
};

// Closed-form-vs-Monte-Carlo comparison over the config's grid.
// `alpha_corruption` is a test hook scaling Bob's noise in the closed-form
// path only; 1.0 in normal operation.
VerifyReport verify(const ExperimentConfig& config, double alpha_corruption = 1.0);

} // namespace see::cli

#endif
