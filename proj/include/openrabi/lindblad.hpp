// Lindblad master equation of the Rabi model with two-photon relaxation in
// the number-parity basis: time evolution, observables, steady states, and
// the mapping of initial states onto open-Rabi eigenmodes.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "openrabi/model.hpp"
#include "openrabi/ode.hpp"

namespace openrabi {

class InvariantViolation : public std::runtime_error {
public:
    explicit InvariantViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// rho_dot = -i(H_ef rho - rho H_ef^dag) + 2*kappa_c2 * b^2 rho (b^dag)^2
// over the full (p=+1 (+) p=-1) space. The generator never couples parity
// sectors: each (p, p') block of rho evolves autonomously.
class LindbladGenerator {
public:
    LindbladGenerator(const ModelParams& params, const Truncation& t);

    const ModelParams& params() const { return params_; }
    const Truncation& truncation() const { return trunc_; }
    const Eigen::MatrixXcd& effective_hamiltonian() const { return h_ef_; }

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

    // Dense superoperator over row-major-vectorized rho (full space).
    Eigen::MatrixXcd superoperator() const;
    // Superoperator restricted to the (p, p) sector, dim d^2 x d^2.
    Eigen::MatrixXcd sector_superoperator(Parity p) const;

private:
    ModelParams params_;
    Truncation trunc_;
    Eigen::MatrixXcd h_ef_;
    Eigen::MatrixXd b2_;
};

struct Observables {
    double photon = 0.0;            // <b^dag b>
    double qubit_excitation = 0.0;  // <sigma^+ sigma^->
    double parity = 0.0;            // <P>
    double energy = 0.0;            // <H_s> (closed Hamiltonian)
    double trace_real = 1.0;
    double trace_deviation = 0.0;      // |Tr rho - 1|
    double hermiticity_deviation = 0.0;  // max |rho - rho^dag|
    double min_eigenvalue = 0.0;
    double purity = 1.0;  // Tr rho^2
};

Observables measure(const Eigen::MatrixXcd& rho, const ModelParams& params, const Truncation& t);

struct EvolveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    bool store_trajectory = false;
    bool enforce_invariants = true;  // abort beyond 10x the invariant tolerances
    double trace_tol = 1e-8;
    double hermiticity_tol = 1e-10;
    double positivity_tol = 1e-8;
    double leakage_tol = 1e-12;
};

struct ObservableSeries {
    std::vector<double> t;  // raw time, units of 1/nu_c
    std::vector<Observables> samples;
    std::vector<Eigen::MatrixXcd> trajectory;  // filled when requested
    Eigen::MatrixXcd final_rho;
    // Aggregates over the sampled points.
    double max_trace_deviation = 0.0;
    double max_hermiticity_deviation = 0.0;
    double min_eigenvalue = 0.0;
    double max_sector_leakage = 0.0;  // population + coherence outside the initial sector
};

// Integrates the master equation with the adaptive Dormand-Prince scheme,
// sampling observables on t_grid (ascending, starting at >= 0). Blocks of
// rho that start at exactly zero are skipped: they stay zero under the
// parity-conserving generator.
ObservableSeries evolve(const Eigen::MatrixXcd& rho0, const ModelParams& params, const Truncation& t,
                        const std::vector<double>& t_grid, const EvolveOptions& opts = {});

struct SteadyState {
    Parity sector = Parity::even;
    std::optional<Eigen::MatrixXcd> rho;  // sector-block matrix, trace 1; empty when degenerate without rho0
    int kernel_dimension = 0;
    double null_eigenvalue_magnitude = 0.0;
    double fixed_point_residual = 0.0;  // max |L(rho)| of the reported state
    std::vector<Eigen::MatrixXcd> kernel_basis;  // right kernel, reported when degenerate
};

// Null-space steady state of one parity sector. With a degenerate kernel the
// physical steady state depends on the initial condition; pass the initial
// sector block to project onto the kernel via the conserved quantities
// (left kernel), or receive the full kernel basis instead.
SteadyState steady_state(const ModelParams& params, const Truncation& t, Parity sector,
                         const Eigen::MatrixXcd* rho0_block = nullptr, double kernel_tol = 1e-10);

struct VerifiedSteadyState {
    SteadyState nullspace;
    Observables nullspace_observables;
    Observables long_time_observables;
    double observable_agreement = 0.0;  // max |difference| over (photon, qubit, parity)
    double final_drift_per_unit_time = 0.0;
    double integrated_time = 0.0;
};

// Runs the null-space method and cross-checks it against long-time
// integration from rho0 (full-space, single parity sector) until the
// observable drift falls below drift_tol per unit time.
VerifiedSteadyState steady_state_verified(const Eigen::MatrixXcd& rho0, const ModelParams& params,
                                          const Truncation& t, double drift_tol = 1e-8,
                                          double max_time = 1e9);

struct EigenmodeWeights {
    std::vector<int> labels;          // rank by ascending Re(omega) within the block
    std::vector<Complex> omegas;
    std::vector<double> weights;      // biorthogonal weights, sum to 1
    std::vector<int> near_defective;  // labels with |<L|R>| < 1e-6 before normalization
};

// Biorthogonal weights w_n = |<L_n|psi0><psi0|R_n>| (normalized to sum 1)
// of a pure block state on the open-Rabi eigenmodes of that parity sector.
// Reduces to |<v_n|psi0>|^2 in the Hermitian (kappa_c2 = 0) limit.
EigenmodeWeights project_onto_eigenmodes(const Eigen::VectorXcd& psi0_block, const ModelParams& params,
                                         Parity p, const Truncation& t);

// Bare-state density matrix |n,q><n,q| embedded in the full space.
Eigen::MatrixXcd bare_state_density(const BareState& s, const Truncation& t);

// Time grid in units of half the cavity round-trip time, T_c/2 = pi/(2 nu_c).
std::vector<double> half_roundtrip_time_grid(double t_max_half_tc, int steps, double nu_c);

}  // namespace openrabi
