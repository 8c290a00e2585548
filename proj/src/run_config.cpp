#include "openrabi/run_config.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <nlohmann/json.hpp>

namespace openrabi {

namespace {
constexpr std::array<const char*, 6> kSubcommands = {"spectrum", "dynamics", "steady", "modemap", "jc", "fullcmp"};
}

void RunConfig::validate() const {
    const bool known = std::any_of(kSubcommands.begin(), kSubcommands.end(),
                                   [&](const char* s) { return subcommand == s; });
    if (!known) throw ConfigError("unknown subcommand '" + subcommand + "'");
    if (!(nu_c > 0.0)) throw ConfigError("--nu-c must be positive");
    if (kappa_c2 < 0.0) throw ConfigError("--kappa2 must be nonnegative");
    if (g_start < 0.0 || g_stop < g_start) throw ConfigError("invalid g grid: need 0 <= g-start <= g-stop");
    if (g_steps < 1) throw ConfigError("--g-steps must be >= 1");
    if (g_steps == 1 && g_stop != g_start) throw ConfigError("--g-steps 1 requires g-start == g-stop");
    if (cutoff != -1 && cutoff < 2) throw ConfigError("--cutoff must be >= 2");
    if (levels < 1) throw ConfigError("--levels must be >= 1");
    if (levels > effective_cutoff() + 1) throw ConfigError("--levels exceeds the block dimension");
    if (init_n < 0 || init_n > effective_cutoff()) throw ConfigError("--init photon number outside the cutoff");
    if (init_qubit != 'g' && init_qubit != 'e') throw ConfigError("--init qubit letter must be g or e");
    if (t_max <= 0.0 || t_steps < 1) throw ConfigError("invalid time grid");
    if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
    if (parity != "+" && parity != "-" && parity != "both") throw ConfigError("--parity must be +, - or both");
    if (threads < 0) throw ConfigError("--threads must be nonnegative");
    if ((subcommand == "spectrum" || subcommand == "jc") && g_start != 0.0)
        throw ConfigError(subcommand + " requires g-start = 0 (branch labels are anchored at g = 0)");
}

int RunConfig::effective_cutoff() const {
    if (cutoff != -1) return cutoff;
    if (subcommand == "spectrum" || subcommand == "jc") return 40;
    if (subcommand == "fullcmp") return 4;
    return 9;  // dynamics, steady, modemap
}

std::vector<double> RunConfig::g_grid() const {
    std::vector<double> grid(g_steps);
    if (g_steps == 1) {
        grid[0] = g_start;
        return grid;
    }
    const double step = (g_stop - g_start) / (g_steps - 1);
    for (int i = 0; i < g_steps; ++i) grid[i] = g_start + i * step;
    grid.back() = g_stop;
    return grid;
}

nlohmann::json to_json(const RunConfig& cfg) {
    return nlohmann::json{{"subcommand", cfg.subcommand},
                          {"nu_c", cfg.nu_c},
                          {"nu_q", cfg.nu_q},
                          {"kappa_c2", cfg.kappa_c2},
                          {"g_start", cfg.g_start},
                          {"g_stop", cfg.g_stop},
                          {"g_steps", cfg.g_steps},
                          {"cutoff", cfg.cutoff},
                          {"levels", cfg.levels},
                          {"init_n", cfg.init_n},
                          {"init_qubit", std::string(1, cfg.init_qubit)},
                          {"t_max", cfg.t_max},
                          {"t_steps", cfg.t_steps},
                          {"format", cfg.format},
                          {"parity", cfg.parity},
                          {"threads", cfg.threads},
                          {"convergence_check", cfg.convergence_check}};
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.subcommand = j.at("subcommand").get<std::string>();
    cfg.nu_c = j.at("nu_c").get<double>();
    cfg.nu_q = j.at("nu_q").get<double>();
    cfg.kappa_c2 = j.at("kappa_c2").get<double>();
    cfg.g_start = j.at("g_start").get<double>();
    cfg.g_stop = j.at("g_stop").get<double>();
    cfg.g_steps = j.at("g_steps").get<int>();
    cfg.cutoff = j.at("cutoff").get<int>();
    cfg.levels = j.at("levels").get<int>();
    cfg.init_n = j.at("init_n").get<int>();
    cfg.init_qubit = j.at("init_qubit").get<std::string>().at(0);
    cfg.t_max = j.at("t_max").get<double>();
    cfg.t_steps = j.at("t_steps").get<int>();
    cfg.format = j.at("format").get<std::string>();
    cfg.parity = j.at("parity").get<std::string>();
    cfg.threads = j.at("threads").get<int>();
    cfg.convergence_check = j.value("convergence_check", true);
    return cfg;
}

void parse_init_spec(const std::string& spec, RunConfig& cfg) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 2 != spec.size())
        throw ConfigError("--init expects \"n,g\" or \"n,e\"");
    for (std::size_t i = 0; i < comma; ++i)
        if (!std::isdigit(static_cast<unsigned char>(spec[i]))) throw ConfigError("--init photon number must be an integer");
    cfg.init_n = std::stoi(spec.substr(0, comma));
    cfg.init_qubit = spec[comma + 1];
    if (cfg.init_qubit != 'g' && cfg.init_qubit != 'e') throw ConfigError("--init qubit letter must be g or e");
}

}  // namespace openrabi
