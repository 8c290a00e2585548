// Eigenfrequencies and eigenmodes of the (closed or two-photon-dissipative)
// Rabi model from the three-term recursion of the number-parity basis,
// cross-checked against dense eigensolves of the truncated tridiagonal block.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "openrabi/model.hpp"

namespace openrabi {

// Coefficients of the three-term recursion at trial frequency omega:
//   alpha_m = omega - m*nu_c + (p/2)*(-1)^m*nu_q + i*m*(m-1)*kappa_c2
//   beta_m  = -sqrt(m+1)*g,   gamma_m = -sqrt(m)*g
// (the kappa_c2 term is the open-case modification of the diagonal).
struct RecursionCoefficients {
    static Complex alpha(const ModelParams& params, Parity p, Complex omega, int m);
    static double beta(const ModelParams& params, int m);
    static double gamma(const ModelParams& params, int m);
};

// Determinants G_{p,m} of the leading (m+1)x(m+1) truncations of
// M_p = omega*I - H_p, generated by
//   G_m = alpha_m*G_{m-1} - beta_{m-1}*gamma_m*G_{m-2}.
// G_m grows factorially with m, so the running pair is rescaled whenever it
// exceeds a magnitude threshold; the removed factor is accumulated as
// log_scale. The true value is scaled[m] * exp(log_scale[m]).
struct DeterminantSequence {
    std::vector<Complex> scaled;
    std::vector<double> log_scale;

    Complex value(int m) const { return scaled[m] * std::exp(log_scale[m]); }
    int m_max() const { return static_cast<int>(scaled.size()) - 1; }
};

DeterminantSequence determinant_sequence(const ModelParams& params, Parity p, Complex omega, int m_max);

// Scaled value of G_{p,m_max}(omega) alone (mantissa and log magnitude).
struct ScaledValue {
    Complex mantissa;
    double log_scale;
};
ScaledValue determinant_tip(const ModelParams& params, Parity p, Complex omega, int m_max);

struct SpectrumEntry {
    int label = 0;                        // ascending rank by Re(omega); anchored to g = 0 order in sweeps
    Parity parity = Parity::even;
    Complex omega{0.0, 0.0};              // omega = nu - i*kappa
    bool determinant_residual_ok = true;  // recursion-determinant Newton residual below tolerance
    bool cutoff_converged = true;         // stable against raising n_max by 10
    double determinant_residual = 0.0;    // |G/G'| at omega
};

struct Spectrum {
    std::vector<SpectrumEntry> entries;
    double g_value = 0.0;
    int n_max = 0;
    Parity parity = Parity::even;
    std::vector<std::string> warnings;
};

struct RootScanOptions {
    int grid_points = 4000;
    double bisection_tol = 1e-12;        // in units of nu_c
    double convergence_tol = 1e-8;       // |omega(n_max) - omega(n_max+10)|
    int convergence_extra = 10;
    double edge_warning_fraction = 0.1;
};

// Roots of G_{p,n_max}(omega) inside [lo, hi] for the closed model
// (kappa_c2 must be 0), by sign-change scan plus bisection. Only roots
// converged with respect to the cutoff are reported. Adjacent sign changes
// in neighboring grid cells trigger one adaptive refinement; if they persist
// the scan aborts.
Spectrum find_closed_eigenfrequencies(const ModelParams& params, Parity p, const Truncation& t,
                                      double lo, double hi, const RootScanOptions& opts = {});

struct OpenSpectrumOptions {
    double determinant_residual_tol = 1e-6;  // |G/G'| acceptance per eigenvalue
    bool check_cutoff_convergence = true;
    double convergence_tol = 1e-8;
    int convergence_extra = 10;
};

// Complex eigenvalues of the truncated phenomenological block (dense
// non-Hermitian eigensolve), each cross-checked against the determinant
// recursion via the Newton residual |G/G'|. Entries failing the residual
// check are flagged, not dropped. Sorted by ascending Re(omega).
Spectrum find_open_eigenfrequencies(const ModelParams& params, Parity p, const Truncation& t,
                                    const OpenSpectrumOptions& opts = {});

struct Eigenmode {
    Eigen::VectorXcd coefficients;     // normalized to sum |c_m|^2 = 1
    double recursion_residual = 0.0;   // max over interior rows m = 1..n_max-1
    double boundary_residual = 0.0;    // last row (vanishes only at a true root)
    bool used_dense_fallback = false;  // forward recursion tail grew; dense eigenvector returned
};

// Expansion coefficients of the eigenmode at a converged eigenfrequency,
// by forward recursion from c_0 = 1 (or the dense eigenvector when the
// recursion tail is unstable, or the bare unit vector at g = 0).
Eigenmode eigenmode_coefficients(const ModelParams& params, Parity p, Complex omega, const Truncation& t);

struct Branch {
    int label = 0;   // rank of the branch at g = 0 within its parity block
    Parity parity = Parity::even;
    std::vector<double> g;
    std::vector<Complex> omega;
};

struct SweepResult {
    std::vector<Branch> branches;
    std::vector<std::string> warnings;
};

struct BlockEigensystem {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
};

// Dense eigensystem of the phenomenological block at one parameter point.
BlockEigensystem solve_phenomenological_block(const ModelParams& params, Parity p, const Truncation& t);

// Sequential tracking pass over per-g eigensystems (one per grid point, grid
// ascending from g = 0). Step-to-step identification maximizes eigenvector
// overlap; assignments whose two best overlaps differ by < 5% are flagged.
SweepResult track_levels_from_eigensystems(const std::vector<double>& g_grid,
                                           const std::vector<BlockEigensystem>& systems, Parity p,
                                           int n_track);

// Follows the lowest n_track open-model levels of one parity block across an
// ascending g grid starting at g = 0 (solve + track in one call).
SweepResult track_levels_over_sweep(const ModelParams& params_template, Parity p,
                                    const std::vector<double>& g_grid, const Truncation& t,
                                    int n_track);

// Drift of the lowest n_check eigenvalues when n_max is raised by `extra`.
double cutoff_drift(const ModelParams& params, Parity p, const Truncation& t, int n_check, int extra = 10);

}  // namespace openrabi
