// Serializable description of one CLI run. Every output file embeds its
// config header so the run can be reproduced exactly.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace openrabi {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RunConfig {
    std::string subcommand;

    double nu_c = 1.0;
    double nu_q = 0.8;
    double kappa_c2 = 1.0 / 40.0;

    double g_start = 0.0;
    double g_stop = 2.0;
    int g_steps = 201;  // number of grid points

    int cutoff = -1;  // n_max; -1 selects the subcommand default
    int levels = 6;   // tracked labels per parity (spectrum, jc)

    int init_n = 2;
    char init_qubit = 'g';

    double t_max = 40.0;  // units of T_c/2 = pi/(2 nu_c)
    int t_steps = 200;

    std::string out_path;         // empty = stdout
    std::string format = "csv";   // csv | json
    std::string parity = "both";  // + | - | both
    int threads = 0;              // 0 = hardware concurrency; env OPENRABI_THREADS caps
    bool convergence_check = true;

    void validate() const;                 // throws ConfigError
    int effective_cutoff() const;          // resolves -1 to the subcommand default
    std::vector<double> g_grid() const;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

// Parses the "n,g" / "n,e" initial-state spec.
void parse_init_spec(const std::string& spec, RunConfig& cfg);

}  // namespace openrabi
