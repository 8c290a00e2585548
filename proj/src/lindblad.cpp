#include "openrabi/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace openrabi {

namespace {

// b^2 on one parity block: <m-2|b^2|m> = sqrt(m(m-1)).
Eigen::MatrixXd block_b2(int dim) {
    const Eigen::MatrixXd b = boson_annihilation(dim);
    return b * b;
}

Eigen::MatrixXcd block_lindblad_rhs(const Eigen::MatrixXcd& h_row, const Eigen::MatrixXcd& h_col,
                                    const Eigen::MatrixXd& b2, double kappa, const Eigen::MatrixXcd& rho) {
    return -kImag * (h_row * rho - rho * h_col.adjoint()) + 2.0 * kappa * (b2 * rho * b2.transpose());
}

}  // namespace

LindbladGenerator::LindbladGenerator(const ModelParams& params, const Truncation& t)
    : params_(params), trunc_(t), h_ef_(full_effective_hamiltonian(params, t)), b2_(full_boson_annihilation(t)) {
    b2_ = b2_ * b2_;
}

Eigen::MatrixXcd LindbladGenerator::apply(const Eigen::MatrixXcd& rho) const {
    const int n = full_dim(trunc_);
    if (rho.rows() != n || rho.cols() != n)
        throw std::invalid_argument("LindbladGenerator::apply: dimension mismatch");
    return -kImag * (h_ef_ * rho - rho * h_ef_.adjoint()) + 2.0 * params_.kappa_c2 * (b2_ * rho * b2_.transpose());
}

Eigen::MatrixXcd LindbladGenerator::superoperator() const {
    const int n = full_dim(trunc_);
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
    // Row-major vectorization: vec(A rho B) = (A (x) B^T) vec(rho).
    return -kImag * (Eigen::kroneckerProduct(h_ef_, eye) - Eigen::kroneckerProduct(eye, h_ef_.conjugate())) +
           Complex{2.0 * params_.kappa_c2, 0.0} * Eigen::kroneckerProduct(b2_, b2_).cast<Complex>();
}

Eigen::MatrixXcd LindbladGenerator::sector_superoperator(Parity p) const {
    const int d = trunc_.dim();
    const Eigen::MatrixXcd h = phenomenological_hamiltonian(params_, p, trunc_);
    const Eigen::MatrixXd b2 = block_b2(d);
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(d, d);
    return -kImag * (Eigen::kroneckerProduct(h, eye) - Eigen::kroneckerProduct(eye, h.conjugate())) +
           Complex{2.0 * params_.kappa_c2, 0.0} * Eigen::kroneckerProduct(b2, b2).cast<Complex>();
}

Observables measure(const Eigen::MatrixXcd& rho, const ModelParams& params, const Truncation& t) {
    const int d = t.dim();
    const Eigen::VectorXd number = number_diagonal(t);
    const Eigen::VectorXd sigma_z = sigma_z_diagonal(t);

    Observables obs;
    Complex trace{0.0, 0.0};
    double n_expect = 0.0;
    double z_expect = 0.0;
    for (int i = 0; i < 2 * d; ++i) {
        trace += rho(i, i);
        n_expect += number(i) * rho(i, i).real();
        z_expect += sigma_z(i) * rho(i, i).real();
    }
    obs.photon = n_expect;
    obs.qubit_excitation = 0.5 * (1.0 + z_expect);
    obs.parity = rho.topLeftCorner(d, d).trace().real() - rho.bottomRightCorner(d, d).trace().real();
    obs.energy = (full_closed_hamiltonian(params, t).cast<Complex>() * rho).trace().real();
    obs.trace_real = trace.real();
    obs.trace_deviation = std::abs(trace - Complex{1.0, 0.0});
    obs.hermiticity_deviation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    obs.purity = (rho * rho).trace().real();

    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    obs.min_eigenvalue = es.eigenvalues().minCoeff();
    return obs;
}

ObservableSeries evolve(const Eigen::MatrixXcd& rho0, const ModelParams& params, const Truncation& t,
                        const std::vector<double>& t_grid, const EvolveOptions& opts) {
    params.validate();
    const int d = t.dim();
    const int n = 2 * d;
    if (rho0.rows() != n || rho0.cols() != n) throw std::invalid_argument("evolve: rho0 dimension mismatch");
    if (t_grid.empty() || t_grid.front() < 0.0 || !std::is_sorted(t_grid.begin(), t_grid.end()))
        throw std::invalid_argument("evolve: t_grid must be ascending and nonnegative");

    const Eigen::MatrixXcd h_even = phenomenological_hamiltonian(params, Parity::even, t);
    const Eigen::MatrixXcd h_odd = phenomenological_hamiltonian(params, Parity::odd, t);
    const Eigen::MatrixXd b2 = block_b2(d);

    // Each (s, s') block of rho evolves autonomously; blocks that start at
    // exactly zero stay zero and are skipped.
    bool active[2][2];
    for (int s = 0; s < 2; ++s)
        for (int c = 0; c < 2; ++c)
            active[s][c] = rho0.block(s * d, c * d, d, d).cwiseAbs().maxCoeff() > 0.0;
    const bool single_sector = (active[0][0] != active[1][1]) && !active[0][1] && !active[1][0];
    const int home = active[0][0] ? 0 : 1;

    auto rhs = [&](double, const Eigen::MatrixXcd& y) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
        for (int s = 0; s < 2; ++s) {
            for (int c = 0; c < 2; ++c) {
                if (!active[s][c]) continue;
                const Eigen::MatrixXcd& h_row = (s == 0) ? h_even : h_odd;
                const Eigen::MatrixXcd& h_col = (c == 0) ? h_even : h_odd;
                out.block(s * d, c * d, d, d) =
                    block_lindblad_rhs(h_row, h_col, b2, params.kappa_c2, y.block(s * d, c * d, d, d));
            }
        }
        return out;
    };

    ObservableSeries series;
    series.min_eigenvalue = 1.0;
    Eigen::MatrixXcd rho = rho0;
    OdeOptions ode_opts;
    ode_opts.rel_tol = opts.rel_tol;
    ode_opts.abs_tol = opts.abs_tol;

    double t_prev = 0.0;
    for (double t_sample : t_grid) {
        if (t_sample > t_prev) {
            integrate_adaptive(rhs, rho, t_prev, t_sample, ode_opts);
            t_prev = t_sample;
        }
        Observables obs = measure(rho, params, t);
        series.t.push_back(t_sample);
        series.max_trace_deviation = std::max(series.max_trace_deviation, obs.trace_deviation);
        series.max_hermiticity_deviation = std::max(series.max_hermiticity_deviation, obs.hermiticity_deviation);
        series.min_eigenvalue = std::min(series.min_eigenvalue, obs.min_eigenvalue);
        if (single_sector) {
            const int away = 1 - home;
            double leak = std::abs(rho.block(away * d, away * d, d, d).trace());
            leak += rho.block(0, d, d, d).cwiseAbs().maxCoeff();
            leak += rho.block(d, 0, d, d).cwiseAbs().maxCoeff();
            series.max_sector_leakage = std::max(series.max_sector_leakage, leak);
        }
        series.samples.push_back(obs);
        if (opts.store_trajectory) series.trajectory.push_back(rho);

        if (opts.enforce_invariants) {
            std::ostringstream os;
            os.precision(6);
            if (obs.trace_deviation > 10.0 * opts.trace_tol)
                os << "trace deviation " << obs.trace_deviation;
            else if (obs.hermiticity_deviation > 10.0 * opts.hermiticity_tol)
                os << "hermiticity deviation " << obs.hermiticity_deviation;
            else if (obs.min_eigenvalue < -10.0 * opts.positivity_tol)
                os << "negative eigenvalue " << obs.min_eigenvalue;
            else if (single_sector && series.max_sector_leakage > 10.0 * opts.leakage_tol)
                os << "parity-sector leakage " << series.max_sector_leakage;
            if (os.str().size() > 0) {
                os << " at t=" << t_sample << " exceeds 10x tolerance";
                throw InvariantViolation("evolve: " + os.str());
            }
        }
    }
    series.final_rho = std::move(rho);
    return series;
}

namespace {

Eigen::MatrixXcd unvec_rowmajor(const Eigen::VectorXcd& v, int d) {
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = v(i * d + j);
    return m;
}

Eigen::VectorXcd vec_rowmajor(const Eigen::MatrixXcd& m) {
    const int d = static_cast<int>(m.rows());
    Eigen::VectorXcd v(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v(i * d + j) = m(i, j);
    return v;
}

// Rotate the global phase so the trace is real positive, then hermitize.
Eigen::MatrixXcd fix_density_phase(const Eigen::MatrixXcd& raw) {
    const Complex tr = raw.trace();
    Eigen::MatrixXcd m = raw;
    if (std::abs(tr) > 1e-12) m *= std::conj(tr) / std::abs(tr);
    m = 0.5 * (m + m.adjoint()).eval();
    const double tr2 = m.trace().real();
    if (std::abs(tr2) > 1e-12) m /= tr2;
    return m;
}

}  // namespace

SteadyState steady_state(const ModelParams& params, const Truncation& t, Parity sector,
                         const Eigen::MatrixXcd* rho0_block, double kernel_tol) {
    params.validate();
    const int d = t.dim();
    const LindbladGenerator gen(params, t);
    const Eigen::MatrixXcd liouvillian = gen.sector_superoperator(sector);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(liouvillian);
    if (solver.info() != Eigen::Success) throw std::runtime_error("steady_state: eigensolver failed");

    SteadyState result;
    result.sector = sector;
    std::vector<int> kernel;
    double smallest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < liouvillian.rows(); ++i) {
        const double mag = std::abs(solver.eigenvalues()(i));
        smallest = std::min(smallest, mag);
        if (mag < kernel_tol) kernel.push_back(i);
    }
    result.kernel_dimension = static_cast<int>(kernel.size());
    result.null_eigenvalue_magnitude = smallest;
    if (kernel.empty()) {
        std::ostringstream os;
        os << "steady_state: no eigenvalue below kernel tolerance; smallest |lambda| = " << smallest;
        throw std::runtime_error(os.str());
    }

    std::vector<Eigen::MatrixXcd> right_basis;
    for (int idx : kernel) right_basis.push_back(unvec_rowmajor(solver.eigenvectors().col(idx), d));

    if (result.kernel_dimension == 1) {
        result.rho = fix_density_phase(right_basis[0]);
        result.kernel_basis = {*result.rho};
    } else {
        for (const auto& m : right_basis) result.kernel_basis.push_back(fix_density_phase(m));
        if (rho0_block != nullptr) {
            // Project rho0 onto the kernel through the conserved quantities
            // (left kernel), biorthogonally paired with the right basis.
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> left_solver(liouvillian.adjoint());
            std::vector<Eigen::VectorXcd> left_basis;
            for (int i = 0; i < liouvillian.rows(); ++i)
                if (std::abs(left_solver.eigenvalues()(i)) < kernel_tol)
                    left_basis.push_back(left_solver.eigenvectors().col(i));
            if (static_cast<int>(left_basis.size()) != result.kernel_dimension)
                throw std::runtime_error("steady_state: left/right kernel dimension mismatch");

            const int k = result.kernel_dimension;
            Eigen::MatrixXcd pairing(k, k);
            Eigen::VectorXcd moments(k);
            const Eigen::VectorXcd v0 = vec_rowmajor(*rho0_block);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) pairing(i, j) = left_basis[i].dot(vec_rowmajor(right_basis[j]));
                moments(i) = left_basis[i].dot(v0);
            }
            const Eigen::VectorXcd coeff = pairing.fullPivLu().solve(moments);
            Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
            for (int j = 0; j < k; ++j) rho += coeff(j) * right_basis[j];
            result.rho = fix_density_phase(rho);
        }
    }

    if (result.rho) {
        const Eigen::VectorXcd residual = liouvillian * vec_rowmajor(*result.rho);
        result.fixed_point_residual = residual.cwiseAbs().maxCoeff();
    }
    return result;
}

VerifiedSteadyState steady_state_verified(const Eigen::MatrixXcd& rho0, const ModelParams& params,
                                          const Truncation& t, double drift_tol, double max_time) {
    const int d = t.dim();
    const double pop_even = rho0.topLeftCorner(d, d).trace().real();
    const double pop_odd = rho0.bottomRightCorner(d, d).trace().real();
    if (std::min(pop_even, pop_odd) > 1e-12)
        throw std::invalid_argument("steady_state_verified: rho0 must live in a single parity sector");
    const Parity sector = pop_even >= pop_odd ? Parity::even : Parity::odd;
    const Eigen::MatrixXcd rho0_block = (sector == Parity::even) ? rho0.topLeftCorner(d, d).eval()
                                                                 : rho0.bottomRightCorner(d, d).eval();

    VerifiedSteadyState out;
    out.nullspace = steady_state(params, t, sector, &rho0_block);

    const int off = block_offset(sector, t);
    Eigen::MatrixXcd rho_full = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    rho_full.block(off, off, d, d) = *out.nullspace.rho;
    out.nullspace_observables = measure(rho_full, params, t);

    // Long-time verifier: exact propagation under exp(L t) with period
    // doubling, so slow modes (rates far below kappa_c2) still settle.
    const LindbladGenerator gen(params, t);
    const Eigen::MatrixXcd liouvillian = gen.sector_superoperator(sector);
    double chunk = 1.0 / params.nu_c;
    Eigen::MatrixXcd propagator = (chunk * liouvillian).exp();

    auto block_observables = [&](const Eigen::MatrixXcd& block) {
        Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
        full.block(off, off, d, d) = block;
        return measure(full, params, t);
    };

    Eigen::VectorXcd state = vec_rowmajor(rho0_block);
    Observables prev = block_observables(rho0_block);
    double elapsed = 0.0;
    double drift = std::numeric_limits<double>::infinity();
    while (elapsed < max_time) {
        state = propagator * state;
        elapsed += chunk;
        const Observables cur = block_observables(unvec_rowmajor(state, d));
        drift = std::max({std::abs(cur.photon - prev.photon),
                          std::abs(cur.qubit_excitation - prev.qubit_excitation),
                          std::abs(cur.parity - prev.parity)}) /
                chunk;
        prev = cur;
        if (drift < drift_tol) break;
        propagator = propagator * propagator;
        chunk *= 2.0;
    }
    out.long_time_observables = prev;
    out.final_drift_per_unit_time = drift;
    out.integrated_time = elapsed;
    out.observable_agreement =
        std::max({std::abs(out.nullspace_observables.photon - prev.photon),
                  std::abs(out.nullspace_observables.qubit_excitation - prev.qubit_excitation),
                  std::abs(out.nullspace_observables.parity - prev.parity)});
    return out;
}

EigenmodeWeights project_onto_eigenmodes(const Eigen::VectorXcd& psi0_block, const ModelParams& params,
                                         Parity p, const Truncation& t) {
    params.validate();
    const int d = t.dim();
    if (psi0_block.size() != d) throw std::invalid_argument("project_onto_eigenmodes: psi0 dimension mismatch");

    const Eigen::MatrixXcd h = phenomenological_hamiltonian(params, p, t);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> right(h);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> left(h.adjoint());
    if (right.info() != Eigen::Success || left.info() != Eigen::Success)
        throw std::runtime_error("project_onto_eigenmodes: eigensolver failed");

    // Left eigenvectors satisfy H^dag L_n = conj(omega_n) L_n; pair them to
    // the right eigenvalues by proximity.
    std::vector<int> left_of(d, -1);
    std::vector<bool> taken(d, false);
    for (int i = 0; i < d; ++i) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int j = 0; j < d; ++j) {
            if (taken[j]) continue;
            const double dist = std::abs(std::conj(left.eigenvalues()(j)) - right.eigenvalues()(i));
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        left_of[i] = best;
        taken[best] = true;
    }

    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return right.eigenvalues()(a).real() < right.eigenvalues()(b).real();
    });

    EigenmodeWeights result;
    std::vector<double> raw(d);
    double total = 0.0;
    for (int rank = 0; rank < d; ++rank) {
        const int i = order[rank];
        const Eigen::VectorXcd& r_vec = right.eigenvectors().col(i);
        const Eigen::VectorXcd& l_vec = left.eigenvectors().col(left_of[i]);
        const Complex s = l_vec.dot(r_vec);
        if (std::abs(s) < 1e-6) result.near_defective.push_back(rank);
        const double w = std::abs(l_vec.dot(psi0_block)) * std::abs(psi0_block.dot(r_vec)) /
                         std::max(std::abs(s), 1e-300);
        raw[rank] = w;
        total += w;
        result.labels.push_back(rank);
        result.omegas.push_back(right.eigenvalues()(i));
    }
    result.weights.resize(d);
    for (int rank = 0; rank < d; ++rank) result.weights[rank] = raw[rank] / total;
    return result;
}

Eigen::MatrixXcd bare_state_density(const BareState& s, const Truncation& t) {
    const int n = full_dim(t);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    const int idx = full_index(s, t);
    rho(idx, idx) = 1.0;
    return rho;
}

std::vector<double> half_roundtrip_time_grid(double t_max_half_tc, int steps, double nu_c) {
    if (steps < 1 || t_max_half_tc <= 0.0) throw std::invalid_argument("half_roundtrip_time_grid: bad grid spec");
    const double unit = M_PI / (2.0 * nu_c);
    std::vector<double> grid(steps + 1);
    for (int k = 0; k <= steps; ++k) grid[k] = (t_max_half_tc * k / steps) * unit;
    return grid;
}

}  // namespace openrabi
