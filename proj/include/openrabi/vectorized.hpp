// Full effective Hamiltonian of the vectorized Lindblad equation over the
// doubled (system (x) auxiliary) space, its four parity subspaces, the
// analytic dissipative-TLS solution, and the spectral (tensor rank)
// decomposition check.

#pragma once

#include <array>
#include <vector>

#include "openrabi/model.hpp"

namespace openrabi {

// Row-major reshape between a density matrix and the full wavefunction
// |Psi_rho> = sum rho_{ns,na} |ns>|na>; lossless round trip.
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v);

// H_u = H_s,ef (x) 1 - 1 (x) H_a,ef + 2i*kappa_c2 * b^2 (x) B^2 over the
// doubled space (index = i_s * dim + i_a), assembled through the adjoint
// matrix-element relations <na'|H_a|na> = <ns|H_s,ef^dag|ns'> and
// <na'|B^2|na> = <ns|(b^dag)^2|ns'>. Evolution of vectorize(rho) under
// -i*H_u reproduces the Lindblad generator exactly. Without the collapse
// term this is the phenomenological doubled operator H_s,ef(x)1 - 1(x)H_a,ef.
Eigen::MatrixXcd full_effective_operator(const ModelParams& params, const Truncation& t,
                                         bool include_collapse = true);

// One (p_s, p_a) parity subspace, dim (n_max+1)^2.
Eigen::MatrixXcd parity_subspace_operator(const ModelParams& params, const Truncation& t, Parity ps, Parity pa,
                                          bool include_collapse = true);

struct SubspaceSpectrum {
    Parity ps = Parity::even;
    Parity pa = Parity::even;
    std::vector<Complex> omegas;  // sorted by (Re, Im); (n_max+1)^2 entries
};

std::array<SubspaceSpectrum, 4> full_spectrum_by_parity(const ModelParams& params, const Truncation& t,
                                                        bool include_collapse = true);

// Dissipative two-level system, rho_dot = -i[nu_q s+s-, rho] + 2 gamma_q D[s-] rho.
// Closed-form solution of the matrix elements.
Eigen::Matrix2cd tls_analytic_solution(double nu_q, double gamma_q, const Eigen::Matrix2cd& rho0, double t);

// 4x4 full effective TLS Hamiltonian in the basis (ee, eg, ge, gg).
Eigen::Matrix4cd tls_full_effective_hamiltonian(double nu_q, double gamma_q, bool include_collapse = true);

// U(t) = exp(-i H_u t) of the TLS operator above.
Eigen::Matrix4cd tls_propagator(double nu_q, double gamma_q, double t);

struct TlsCollapseDemo {
    Eigen::Vector4cd eigenvalues_with;      // sorted by (Re, Im)
    Eigen::Vector4cd eigenvalues_without;
    Eigen::Matrix4cd eigenvectors_with;     // columns follow the sorted eigenvalues
    Eigen::Matrix4cd eigenvectors_without;
    Eigen::Vector4cd stationary_with;       // eigenvector of the zero eigenvalue
    Eigen::Vector4cd stationary_without;
};

// Eigenstructure of the 4x4 TLS operator with and without the collapse
// entry: the eigenvalues coincide, the eigenvectors do not.
TlsCollapseDemo tls_collapse_effect_demo(double nu_q, double gamma_q);

struct DecompositionResidual {
    double max_mismatch = 0.0;
    double mean_mismatch = 0.0;
    double real_offset_applied = 0.0;
};

// Residual of the spectral decomposition {omega_u} =? {omega_m - omega_n*}:
// builds all N^2 predicted values from the N reduced candidates, removes the
// global real translation freedom by aligning the mean real parts, and
// matches optimally against the full spectrum.
DecompositionResidual tensor_decomposition_residual(const std::vector<Complex>& full_spectrum,
                                                    const std::vector<Complex>& reduced_spectrum);

}  // namespace openrabi
