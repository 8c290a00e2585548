#include "openrabi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace openrabi {

namespace {

constexpr double kRescaleThreshold = 1e100;

double window_width(double lo, double hi) { return hi - lo; }

std::string format_warning(const char* what, double value) {
    std::ostringstream os;
    os.precision(12);
    os << what << " at omega=" << value;
    return os.str();
}

}  // namespace

Complex RecursionCoefficients::alpha(const ModelParams& params, Parity p, Complex omega, int m) {
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    return omega - static_cast<double>(m) * params.nu_c + 0.5 * parity_sign(p) * sgn * params.nu_q +
           kImag * (static_cast<double>(m) * (m - 1) * params.kappa_c2);
}

double RecursionCoefficients::beta(const ModelParams& params, int m) {
    return -std::sqrt(static_cast<double>(m + 1)) * params.g;
}

double RecursionCoefficients::gamma(const ModelParams& params, int m) {
    return -std::sqrt(static_cast<double>(m)) * params.g;
}

DeterminantSequence determinant_sequence(const ModelParams& params, Parity p, Complex omega, int m_max) {
    if (m_max < 1) throw std::invalid_argument("determinant_sequence: m_max >= 1 required");
    DeterminantSequence seq;
    seq.scaled.resize(m_max + 1);
    seq.log_scale.resize(m_max + 1);

    // G_{-1} = 1, G_{-2} = 0 reproduce the stated initial conditions.
    Complex g_prev2{0.0, 0.0};
    Complex g_prev{1.0, 0.0};
    double log_scale = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        const Complex alpha = RecursionCoefficients::alpha(params, p, omega, m);
        const double offdiag = (m >= 1)
                                   ? RecursionCoefficients::beta(params, m - 1) * RecursionCoefficients::gamma(params, m)
                                   : 0.0;
        Complex g_cur = alpha * g_prev - offdiag * g_prev2;
        const double mag = std::abs(g_cur);
        if (mag > kRescaleThreshold) {
            g_cur /= mag;
            g_prev /= mag;
            log_scale += std::log(mag);
        }
        seq.scaled[m] = g_cur;
        seq.log_scale[m] = log_scale;
        g_prev2 = g_prev;
        g_prev = g_cur;
    }
    return seq;
}

ScaledValue determinant_tip(const ModelParams& params, Parity p, Complex omega, int m_max) {
    const DeterminantSequence seq = determinant_sequence(params, p, omega, m_max);
    return {seq.scaled.back(), seq.log_scale.back()};
}

namespace {

// Newton residual |G/G'| at omega: first-order estimate of the distance to
// the nearest root of G_{p,m_max}, evaluated with a common rescaling.
double newton_residual(const ModelParams& params, Parity p, Complex omega, int m_max, double step) {
    const ScaledValue v0 = determinant_tip(params, p, omega, m_max);
    const ScaledValue vp = determinant_tip(params, p, omega + step, m_max);
    const ScaledValue vm = determinant_tip(params, p, omega - step, m_max);
    const double base = std::max({v0.log_scale, vp.log_scale, vm.log_scale});
    const Complex f0 = v0.mantissa * std::exp(v0.log_scale - base);
    const Complex fp = vp.mantissa * std::exp(vp.log_scale - base);
    const Complex fm = vm.mantissa * std::exp(vm.log_scale - base);
    const Complex deriv = (fp - fm) / (2.0 * step);
    if (deriv == Complex{0.0, 0.0}) return std::numeric_limits<double>::infinity();
    return std::abs(f0 / deriv);
}

double real_determinant(const ModelParams& params, Parity p, double omega, int m_max) {
    return determinant_tip(params, p, Complex{omega, 0.0}, m_max).mantissa.real();
}

struct ScanOutcome {
    std::vector<double> roots;
    bool adjacent_sign_changes = false;
};

ScanOutcome scan_for_roots(const ModelParams& params, Parity p, int m_max, double lo, double hi,
                           int grid_points, double bisection_tol) {
    ScanOutcome out;
    const double step = (hi - lo) / grid_points;
    double x_prev = lo;
    double f_prev = real_determinant(params, p, x_prev, m_max);
    int last_change_cell = -2;
    for (int i = 1; i <= grid_points; ++i) {
        const double x = lo + i * step;
        const double f = real_determinant(params, p, x, m_max);
        if (f_prev == 0.0) {
            out.roots.push_back(x_prev);
        } else if (f_prev * f < 0.0) {
            if (i - 1 == last_change_cell + 1) out.adjacent_sign_changes = true;
            last_change_cell = i - 1;
            double a = x_prev, b = x, fa = f_prev;
            while (b - a > bisection_tol * params.nu_c) {
                const double mid = 0.5 * (a + b);
                const double fmid = real_determinant(params, p, mid, m_max);
                if (fmid == 0.0) {
                    a = b = mid;
                    break;
                }
                if (fa * fmid < 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fmid;
                }
            }
            out.roots.push_back(0.5 * (a + b));
        }
        x_prev = x;
        f_prev = f;
    }
    return out;
}

}  // namespace

Spectrum find_closed_eigenfrequencies(const ModelParams& params, Parity p, const Truncation& t,
                                      double lo, double hi, const RootScanOptions& opts) {
    params.validate();
    if (params.kappa_c2 != 0.0)
        throw std::invalid_argument("find_closed_eigenfrequencies: kappa_c2 must be 0 (use find_open_eigenfrequencies)");
    if (!(hi > lo)) throw std::invalid_argument("find_closed_eigenfrequencies: empty window");

    ScanOutcome scan = scan_for_roots(params, p, t.n_max, lo, hi, opts.grid_points, opts.bisection_tol);
    Spectrum result;
    result.g_value = params.g;
    result.n_max = t.n_max;
    result.parity = p;
    if (scan.adjacent_sign_changes) {
        result.warnings.push_back("scan grid refined 10x: adjacent sign changes detected");
        scan = scan_for_roots(params, p, t.n_max, lo, hi, opts.grid_points * 10, opts.bisection_tol);
        if (scan.adjacent_sign_changes)
            throw std::runtime_error("find_closed_eigenfrequencies: grid too coarse to separate adjacent roots after refinement");
    }

    // Cutoff-convergence gate: keep a root only if the raised-cutoff scan has
    // a root within convergence_tol of it.
    const ScanOutcome refscan = scan_for_roots(params, p, t.n_max + opts.convergence_extra, lo, hi,
                                               opts.grid_points, opts.bisection_tol);
    const double margin = opts.edge_warning_fraction * window_width(lo, hi);
    int label = 0;
    for (double root : scan.roots) {
        double best = std::numeric_limits<double>::infinity();
        for (double ref : refscan.roots) best = std::min(best, std::abs(ref - root));
        if (best >= opts.convergence_tol * params.nu_c) continue;
        SpectrumEntry entry;
        entry.label = label++;
        entry.parity = p;
        entry.omega = Complex{root, 0.0};
        entry.cutoff_converged = true;
        entry.determinant_residual = best;
        result.entries.push_back(entry);
        if (root - lo < margin || hi - root < margin)
            result.warnings.push_back(format_warning("root within 10% of window edge", root));
    }
    return result;
}

Spectrum find_open_eigenfrequencies(const ModelParams& params, Parity p, const Truncation& t,
                                    const OpenSpectrumOptions& opts) {
    params.validate();
    const Eigen::MatrixXcd h = phenomenological_hamiltonian(params, p, t);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("find_open_eigenfrequencies: eigensolver failed");

    std::vector<Complex> values(solver.eigenvalues().data(), solver.eigenvalues().data() + t.dim());
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) { return a.real() < b.real(); });

    std::vector<Complex> raised;
    if (opts.check_cutoff_convergence) {
        const Truncation t_hi = t.raised_by(opts.convergence_extra);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> hi_solver(phenomenological_hamiltonian(params, p, t_hi), false);
        raised.assign(hi_solver.eigenvalues().data(), hi_solver.eigenvalues().data() + t_hi.dim());
    }

    Spectrum result;
    result.g_value = params.g;
    result.n_max = t.n_max;
    result.parity = p;
    const double newton_step = 1e-7 * params.nu_c;
    for (int i = 0; i < static_cast<int>(values.size()); ++i) {
        SpectrumEntry entry;
        entry.label = i;
        entry.parity = p;
        entry.omega = values[i];
        entry.determinant_residual = newton_residual(params, p, values[i], t.n_max, newton_step);
        entry.determinant_residual_ok = entry.determinant_residual < opts.determinant_residual_tol * params.nu_c;
        if (!entry.determinant_residual_ok)
            result.warnings.push_back(format_warning("determinant residual check failed", values[i].real()));
        if (opts.check_cutoff_convergence) {
            double best = std::numeric_limits<double>::infinity();
            for (Complex ref : raised) best = std::min(best, std::abs(ref - values[i]));
            entry.cutoff_converged = best < opts.convergence_tol * params.nu_c;
        }
        result.entries.push_back(entry);
    }
    return result;
}

Eigenmode eigenmode_coefficients(const ModelParams& params, Parity p, Complex omega, const Truncation& t) {
    params.validate();
    const int dim = t.dim();
    Eigenmode mode;

    if (params.g == 0.0) {
        // Recursion degenerates (beta = gamma = 0); the eigenmode is the bare
        // number state whose alpha vanishes at this omega.
        int best_m = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int m = 0; m < dim; ++m) {
            const double a = std::abs(RecursionCoefficients::alpha(params, p, omega, m));
            if (a < best) {
                best = a;
                best_m = m;
            }
        }
        mode.coefficients = Eigen::VectorXcd::Zero(dim);
        mode.coefficients(best_m) = 1.0;
        mode.recursion_residual = 0.0;
        mode.boundary_residual = best;
        return mode;
    }

    Eigen::VectorXcd c(dim);
    c(0) = 1.0;
    c(1) = -RecursionCoefficients::alpha(params, p, omega, 0) / RecursionCoefficients::beta(params, 0);
    bool overflowed = false;
    for (int m = 1; m + 1 < dim; ++m) {
        c(m + 1) = -(RecursionCoefficients::alpha(params, p, omega, m) * c(m) +
                     RecursionCoefficients::gamma(params, m) * c(m - 1)) /
                   RecursionCoefficients::beta(params, m);
        if (std::abs(c(m + 1)) > 1e100) {
            overflowed = true;
            break;
        }
    }

    const int tail_ref = std::max(0, dim - 6);
    const bool tail_grows = overflowed || std::abs(c(dim - 1)) > std::abs(c(tail_ref));
    if (tail_grows) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(phenomenological_hamiltonian(params, p, t));
        int best_i = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < dim; ++i) {
            const double d = std::abs(solver.eigenvalues()(i) - omega);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        c = solver.eigenvectors().col(best_i);
        mode.used_dense_fallback = true;
    }

    c.normalize();
    // Deterministic phase: largest-magnitude coefficient real and positive.
    int peak = 0;
    for (int m = 1; m < dim; ++m)
        if (std::abs(c(m)) > std::abs(c(peak))) peak = m;
    if (std::abs(c(peak)) > 0.0) c *= std::conj(c(peak)) / std::abs(c(peak));

    double interior = 0.0;
    for (int m = 1; m + 1 < dim; ++m) {
        const Complex r = RecursionCoefficients::alpha(params, p, omega, m) * c(m) +
                          RecursionCoefficients::beta(params, m) * c(m + 1) +
                          RecursionCoefficients::gamma(params, m) * c(m - 1);
        interior = std::max(interior, std::abs(r));
    }
    mode.recursion_residual = interior;
    mode.boundary_residual = std::abs(RecursionCoefficients::alpha(params, p, omega, dim - 1) * c(dim - 1) +
                                      RecursionCoefficients::gamma(params, dim - 1) * c(dim - 2));
    mode.coefficients = std::move(c);
    return mode;
}

BlockEigensystem solve_phenomenological_block(const ModelParams& params, Parity p, const Truncation& t) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(phenomenological_hamiltonian(params, p, t));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_phenomenological_block: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

SweepResult track_levels_from_eigensystems(const std::vector<double>& g_grid,
                                           const std::vector<BlockEigensystem>& systems, Parity p,
                                           int n_track) {
    if (g_grid.empty() || g_grid.front() != 0.0)
        throw std::invalid_argument("track_levels: g_grid must start at g = 0 (label anchor)");
    if (!std::is_sorted(g_grid.begin(), g_grid.end()))
        throw std::invalid_argument("track_levels: g_grid must be ascending");
    if (systems.size() != g_grid.size())
        throw std::invalid_argument("track_levels: one eigensystem per grid point required");
    const int dim = static_cast<int>(systems.front().values.size());
    if (n_track < 1 || n_track > dim)
        throw std::invalid_argument("track_levels: n_track outside block dimension");

    SweepResult result;
    result.branches.resize(n_track);
    for (int i = 0; i < n_track; ++i) {
        result.branches[i].label = i;
        result.branches[i].parity = p;
    }

    Eigen::MatrixXcd tracked_vectors(dim, n_track);
    for (std::size_t k = 0; k < g_grid.size(); ++k) {
        const auto& values = systems[k].values;
        const auto& vectors = systems[k].vectors;

        std::vector<int> assignment(n_track, -1);
        if (k == 0) {
            // Anchor: ascending real part equals the bare ordering at g = 0.
            std::vector<int> order(dim);
            for (int i = 0; i < dim; ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return values(a).real() < values(b).real(); });
            for (int i = 0; i < n_track; ++i) assignment[i] = order[i];
        } else {
            std::vector<bool> taken(dim, false);
            // Branches with the strongest best-overlap claim their column first.
            std::vector<std::pair<double, int>> priority(n_track);
            Eigen::MatrixXd overlap(n_track, dim);
            for (int i = 0; i < n_track; ++i)
                for (int j = 0; j < dim; ++j)
                    overlap(i, j) = std::abs(tracked_vectors.col(i).dot(vectors.col(j)));
            for (int i = 0; i < n_track; ++i) priority[i] = {overlap.row(i).maxCoeff(), i};
            std::sort(priority.rbegin(), priority.rend());
            for (const auto& [unused, i] : priority) {
                int best_j = -1, second_j = -1;
                for (int j = 0; j < dim; ++j) {
                    if (taken[j]) continue;
                    if (best_j < 0 || overlap(i, j) > overlap(i, best_j)) {
                        second_j = best_j;
                        best_j = j;
                    } else if (second_j < 0 || overlap(i, j) > overlap(i, second_j)) {
                        second_j = j;
                    }
                }
                assignment[i] = best_j;
                taken[best_j] = true;
                if (second_j >= 0 && overlap(i, best_j) > 0.0 &&
                    (overlap(i, best_j) - overlap(i, second_j)) < 0.05 * overlap(i, best_j)) {
                    std::ostringstream os;
                    os.precision(6);
                    os << "ambiguous branch assignment (overlaps within 5%) for label " << result.branches[i].label
                       << " at g=" << g_grid[k] << "; consider refining the g grid";
                    result.warnings.push_back(os.str());
                }
            }
        }

        for (int i = 0; i < n_track; ++i) {
            result.branches[i].g.push_back(g_grid[k]);
            result.branches[i].omega.push_back(values(assignment[i]));
            tracked_vectors.col(i) = vectors.col(assignment[i]);
        }
    }
    return result;
}

SweepResult track_levels_over_sweep(const ModelParams& params_template, Parity p,
                                    const std::vector<double>& g_grid, const Truncation& t,
                                    int n_track) {
    std::vector<BlockEigensystem> systems;
    systems.reserve(g_grid.size());
    for (double g : g_grid) {
        ModelParams params = params_template;
        params.g = g;
        params.validate();
        systems.push_back(solve_phenomenological_block(params, p, t));
    }
    return track_levels_from_eigensystems(g_grid, systems, p, n_track);
}

double cutoff_drift(const ModelParams& params, Parity p, const Truncation& t, int n_check, int extra) {
    OpenSpectrumOptions opts;
    opts.check_cutoff_convergence = false;
    const Spectrum base = find_open_eigenfrequencies(params, p, t, opts);
    const Spectrum high = find_open_eigenfrequencies(params, p, t.raised_by(extra), opts);
    double worst = 0.0;
    for (int i = 0; i < n_check; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : high.entries) best = std::min(best, std::abs(e.omega - base.entries[i].omega));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace openrabi
