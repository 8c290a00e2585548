#include "openrabi/commands.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "openrabi/assignment.hpp"
#include "openrabi/jc.hpp"
#include "openrabi/lindblad.hpp"
#include "openrabi/parallel.hpp"
#include "openrabi/spectrum.hpp"
#include "openrabi/vectorized.hpp"

namespace openrabi {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Uniform table emitter. CSV carries the config as '#' header comments;
// JSON nests it next to the payload. Cell values are either numeric strings
// from fmt() or plain tokens (parity signs, labels).
class TableWriter {
public:
    TableWriter(const RunConfig& cfg, std::vector<std::string> columns)
        : cfg_(cfg), columns_(std::move(columns)) {}

    void warn(const std::string& msg) { warnings_.push_back(msg); }
    void row(std::vector<std::string> cells) {
        if (cells.size() != columns_.size()) throw std::logic_error("TableWriter: column count mismatch");
        rows_.push_back(std::move(cells));
    }

    void emit(std::ostream& out) const {
        if (cfg_.format == "json") {
            nlohmann::json doc;
            doc["tool"] = "openrabi";
            doc["version"] = kVersion;
            doc["config"] = to_json(cfg_);
            doc["warnings"] = warnings_;
            doc["columns"] = columns_;
            doc["rows"] = rows_;
            out << doc.dump(2) << "\n";
            return;
        }
        out << "# openrabi " << kVersion << "\n";
        out << "# config: " << to_json(cfg_).dump() << "\n";
        for (const auto& w : warnings_) out << "# warning: " << w << "\n";
        for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
        out << "\n";
        for (const auto& r : rows_) {
            for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
            out << "\n";
        }
    }

private:
    RunConfig cfg_;
    std::vector<std::string> columns_;
    std::vector<std::string> warnings_;
    std::vector<std::vector<std::string>> rows_;
};

ModelParams params_at(const RunConfig& cfg, double g, double kappa) {
    ModelParams p;
    p.nu_c = cfg.nu_c;
    p.nu_q = cfg.nu_q;
    p.g = g;
    p.kappa_c2 = kappa;
    return p;
}

std::vector<Parity> requested_parities(const RunConfig& cfg) {
    if (cfg.parity == "+") return {Parity::even};
    if (cfg.parity == "-") return {Parity::odd};
    return {Parity::even, Parity::odd};
}

std::string parity_token(Parity p) { return p == Parity::even ? "+1" : "-1"; }

BareState init_state(const RunConfig& cfg) {
    return BareState{cfg.init_n, cfg.init_qubit == 'g' ? QubitState::ground : QubitState::excited};
}

// Overlap-tracked sweep of one parity block with the per-g eigensolves
// dispatched to the worker pool.
SweepResult tracked_sweep(const RunConfig& cfg, Parity p, double kappa, const Truncation& t, int n_track) {
    const std::vector<double> grid = cfg.g_grid();
    std::vector<BlockEigensystem> systems(grid.size());
    parallel_for(static_cast<int>(grid.size()), resolve_thread_count(cfg.threads), [&](int i) {
        systems[i] = solve_phenomenological_block(params_at(cfg, grid[i], kappa), p, t);
    });
    return track_levels_from_eigensystems(grid, systems, p, n_track);
}

}  // namespace

void cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    const Truncation t(cfg.effective_cutoff());
    const std::vector<double> grid = cfg.g_grid();

    TableWriter table(cfg, {"g", "n_g", "p", "re_omega_rel", "re_omega_abs", "im_omega",
                            "re_closed_rel", "re_closed_abs"});

    // The + sector is always tracked: the |0_g,+> branch is the frequency
    // reference of every row.
    std::map<Parity, SweepResult> open_sweeps, closed_sweeps;
    for (Parity p : {Parity::even, Parity::odd}) {
        open_sweeps[p] = tracked_sweep(cfg, p, cfg.kappa_c2, t, cfg.levels);
        closed_sweeps[p] = tracked_sweep(cfg, p, 0.0, t, cfg.levels);
        for (const auto& w : open_sweeps[p].warnings) table.warn(w);
    }
    const std::vector<Complex>& open_ref = open_sweeps[Parity::even].branches[0].omega;
    const std::vector<Complex>& closed_ref = closed_sweeps[Parity::even].branches[0].omega;

    for (Parity p : requested_parities(cfg)) {
        for (int label = 0; label < cfg.levels; ++label) {
            const Branch& open = open_sweeps[p].branches[label];
            const Branch& closed = closed_sweeps[p].branches[label];
            for (std::size_t k = 0; k < grid.size(); ++k) {
                table.row({fmt(grid[k]), std::to_string(label), parity_token(p),
                           fmt(open.omega[k].real() - open_ref[k].real()), fmt(open.omega[k].real()),
                           fmt(open.omega[k].imag()), fmt(closed.omega[k].real() - closed_ref[k].real()),
                           fmt(closed.omega[k].real())});
            }
        }
    }
    table.emit(out);
}

void cmd_dynamics(const RunConfig& cfg, std::ostream& out) {
    const Truncation t(cfg.effective_cutoff());
    const std::vector<double> grid = cfg.g_grid();
    const std::vector<double> times = half_roundtrip_time_grid(cfg.t_max, cfg.t_steps, cfg.nu_c);
    const double unit = M_PI / (2.0 * cfg.nu_c);
    const Eigen::MatrixXcd rho0 = bare_state_density(init_state(cfg), t);

    std::vector<ObservableSeries> runs(grid.size());
    std::vector<double> drifts(grid.size(), 0.0);
    parallel_for(static_cast<int>(grid.size()), resolve_thread_count(cfg.threads), [&](int i) {
        const ModelParams params = params_at(cfg, grid[i], cfg.kappa_c2);
        runs[i] = evolve(rho0, params, t, times);
        if (cfg.convergence_check) {
            const Truncation t_hi = t.raised_by(3);
            const ObservableSeries check = evolve(bare_state_density(init_state(cfg), t_hi), params, t_hi, times);
            double drift = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                drift = std::max(drift, std::abs(check.samples[k].photon - runs[i].samples[k].photon));
                drift = std::max(drift,
                                 std::abs(check.samples[k].qubit_excitation - runs[i].samples[k].qubit_excitation));
            }
            drifts[i] = drift;
        }
    });

    TableWriter table(cfg, {"g", "t_half_tc", "photon", "qubit_excitation", "parity", "trace"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (cfg.convergence_check && drifts[i] > 1e-4) {
            std::ostringstream os;
            os.precision(3);
            os << "observables at g=" << grid[i] << " drift by " << drifts[i]
               << " when the cutoff is raised by 3; raise --cutoff";
            table.warn(os.str());
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
            const Observables& obs = runs[i].samples[k];
            table.row({fmt(grid[i]), fmt(times[k] / unit), fmt(obs.photon), fmt(obs.qubit_excitation),
                       fmt(obs.parity), fmt(obs.trace_real)});
        }
    }
    table.emit(out);
}

void cmd_steady(const RunConfig& cfg, std::ostream& out) {
    const Truncation t(cfg.effective_cutoff());
    const std::vector<double> grid = cfg.g_grid();
    const Eigen::MatrixXcd rho0 = bare_state_density(init_state(cfg), t);

    std::vector<VerifiedSteadyState> results(grid.size());
    parallel_for(static_cast<int>(grid.size()), resolve_thread_count(cfg.threads), [&](int i) {
        results[i] = steady_state_verified(rho0, params_at(cfg, grid[i], cfg.kappa_c2), t);
    });

    TableWriter table(cfg, {"g", "photon", "qubit_excitation", "parity", "kernel_dim", "null_magnitude",
                            "fixed_point_residual", "verifier_agreement"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = results[i];
        table.row({fmt(grid[i]), fmt(r.nullspace_observables.photon),
                   fmt(r.nullspace_observables.qubit_excitation), fmt(r.nullspace_observables.parity),
                   std::to_string(r.nullspace.kernel_dimension), fmt(r.nullspace.null_eigenvalue_magnitude),
                   fmt(r.nullspace.fixed_point_residual), fmt(r.observable_agreement)});
    }
    table.emit(out);
}

void cmd_modemap(const RunConfig& cfg, std::ostream& out) {
    const Truncation t(cfg.effective_cutoff());
    const std::vector<double> grid = cfg.g_grid();
    const BareState init = init_state(cfg);
    const Parity sector = parity_of(init);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(t.dim());
    psi0(block_index(init)) = 1.0;

    std::vector<EigenmodeWeights> maps(grid.size());
    parallel_for(static_cast<int>(grid.size()), resolve_thread_count(cfg.threads), [&](int i) {
        maps[i] = project_onto_eigenmodes(psi0, params_at(cfg, grid[i], cfg.kappa_c2), sector, t);
    });

    TableWriter table(cfg, {"g", "n_g", "p", "weight", "re_omega", "im_omega"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t n = 0; n < maps[i].weights.size(); ++n) {
            table.row({fmt(grid[i]), std::to_string(maps[i].labels[n]), parity_token(sector),
                       fmt(maps[i].weights[n]), fmt(maps[i].omegas[n].real()), fmt(maps[i].omegas[n].imag())});
        }
        for (int flagged : maps[i].near_defective) {
            std::ostringstream os;
            os << "near-defective eigenmode pair (label " << flagged << ") at g=" << fmt(grid[i]);
            table.warn(os.str());
        }
    }
    table.emit(out);
}

void cmd_jc(const RunConfig& cfg, std::ostream& out) {
    const Truncation t(cfg.effective_cutoff());
    const JcRabiComparison cmp = jc_vs_rabi_comparison(params_at(cfg, 0.0, cfg.kappa_c2), cfg.g_grid(), t,
                                                       cfg.levels - 1);
    const std::vector<Parity> wanted = requested_parities(cfg);

    TableWriter table(cfg, {"g", "bare_m", "p", "re_jc", "im_jc", "re_rabi", "im_rabi"});
    for (const JcRabiBranch& branch : cmp.branches) {
        if (std::find(wanted.begin(), wanted.end(), branch.parity) == wanted.end()) continue;
        for (std::size_t k = 0; k < cmp.g_grid.size(); ++k) {
            table.row({fmt(cmp.g_grid[k]), std::to_string(branch.bare_m), parity_token(branch.parity),
                       fmt(branch.jc[k].real()), fmt(branch.jc[k].imag()), fmt(branch.rabi[k].real()),
                       fmt(branch.rabi[k].imag())});
        }
    }
    table.emit(out);
}

void cmd_fullcmp(const RunConfig& cfg, std::ostream& out) {
    const Truncation t(cfg.effective_cutoff());
    const std::vector<double> grid = cfg.g_grid();

    struct PointResult {
        std::array<SubspaceSpectrum, 4> full, phen;
        std::array<std::vector<int>, 4> pairing;
    };
    std::vector<PointResult> results(grid.size());
    parallel_for(static_cast<int>(grid.size()), resolve_thread_count(cfg.threads), [&](int i) {
        const ModelParams params = params_at(cfg, grid[i], cfg.kappa_c2);
        results[i].full = full_spectrum_by_parity(params, t, /*include_collapse=*/true);
        results[i].phen = full_spectrum_by_parity(params, t, /*include_collapse=*/false);
        for (int blk = 0; blk < 4; ++blk)
            results[i].pairing[blk] = matched_distance(results[i].full[blk].omegas,
                                                       results[i].phen[blk].omegas).assignment;
    });

    TableWriter table(cfg, {"g", "p_s", "p_a", "idx", "re_full", "im_full", "re_phen", "im_phen", "abs_diff"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int blk = 0; blk < 4; ++blk) {
            const SubspaceSpectrum& full = results[i].full[blk];
            const SubspaceSpectrum& phen = results[i].phen[blk];
            for (std::size_t idx = 0; idx < full.omegas.size(); ++idx) {
                const Complex f = full.omegas[idx];
                const Complex q = phen.omegas[results[i].pairing[blk][idx]];
                table.row({fmt(grid[i]), parity_token(full.ps), parity_token(full.pa),
                           std::to_string(idx), fmt(f.real()), fmt(f.imag()), fmt(q.real()), fmt(q.imag()),
                           fmt(std::abs(f - q))});
            }
        }
    }
    table.emit(out);
}

void run_command(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    if (cfg.subcommand == "spectrum") return cmd_spectrum(cfg, out);
    if (cfg.subcommand == "dynamics") return cmd_dynamics(cfg, out);
    if (cfg.subcommand == "steady") return cmd_steady(cfg, out);
    if (cfg.subcommand == "modemap") return cmd_modemap(cfg, out);
    if (cfg.subcommand == "jc") return cmd_jc(cfg, out);
    if (cfg.subcommand == "fullcmp") return cmd_fullcmp(cfg, out);
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
}

RunConfig config_from_output(const std::string& file_contents) {
    if (!file_contents.empty() && file_contents.front() == '{') {
        const nlohmann::json doc = nlohmann::json::parse(file_contents);
        return config_from_json(doc.at("config"));
    }
    std::istringstream in(file_contents);
    std::string line;
    const std::string prefix = "# config: ";
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0)
            return config_from_json(nlohmann::json::parse(line.substr(prefix.size())));
        if (!line.empty() && line.front() != '#') break;
    }
    throw ConfigError("no embedded config found in output");
}

}  // namespace openrabi
