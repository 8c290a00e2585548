// Shared test oracles, independent of the library code paths they check.

#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "openrabi/model.hpp"
#include "openrabi/spectrum.hpp"

namespace test_support {

using openrabi::Complex;

// Dense recursion matrix M_p = omega*I - H_p assembled straight from the
// coefficient definitions (not from the Hamiltonian builders).
inline Eigen::MatrixXcd dense_recursion_matrix(const openrabi::ModelParams& params, openrabi::Parity p,
                                               Complex omega, int m_max) {
    const int dim = m_max + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int r = 0; r < dim; ++r) {
        m(r, r) = openrabi::RecursionCoefficients::alpha(params, p, omega, r);
        if (r + 1 < dim) m(r, r + 1) = openrabi::RecursionCoefficients::beta(params, r);
        if (r >= 1) m(r, r - 1) = openrabi::RecursionCoefficients::gamma(params, r);
    }
    return m;
}

// Determinant by LU row reduction: the independent oracle for the
// determinant recursion.
inline Complex dense_determinant(const Eigen::MatrixXcd& m) {
    return Eigen::FullPivLU<Eigen::MatrixXcd>(m).determinant();
}

inline Eigen::MatrixXcd random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex{normal(rng), normal(rng)};
    return 0.5 * (a + a.adjoint()).eval();
}

inline Eigen::MatrixXcd random_density_matrix(int dim, std::mt19937& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex{normal(rng), normal(rng)};
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

// Second-order perturbation estimate of the lowest + sector level:
// omega_0 ~ -nu_q/2 - g^2/(nu_c + nu_q), evaluated independently of the
// recursion machinery.
inline double perturbative_ground_estimate(const openrabi::ModelParams& params) {
    return -0.5 * params.nu_q - params.g * params.g / (params.nu_c + params.nu_q);
}

// Full effective operator of a damped harmonic oscillator
// (H = nu a^dag a, dissipator 2*gamma*D[a]), built directly from the
// doubled-space formula. Its reduced spectrum is omega_m = m*(nu - i*gamma)
// exactly: the quadratic positive control for the decomposition check.
inline Eigen::MatrixXcd damped_oscillator_full_operator(double nu, double gamma, int levels) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(levels, levels);
    for (int m = 1; m < levels; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
    Eigen::MatrixXcd h_ef = Eigen::MatrixXcd::Zero(levels, levels);
    for (int m = 0; m < levels; ++m) h_ef(m, m) = Complex{nu * m, -gamma * m};
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(levels, levels);
    return Eigen::kroneckerProduct(h_ef, eye) - Eigen::kroneckerProduct(eye, h_ef.conjugate()) +
           Complex{0.0, 2.0 * gamma} * Eigen::kroneckerProduct(a, a.conjugate());
}

inline std::vector<Complex> damped_oscillator_reduced_spectrum(double nu, double gamma, int levels) {
    std::vector<Complex> omegas;
    for (int m = 0; m < levels; ++m) omegas.push_back(Complex{nu * m, -gamma * m});
    return omegas;
}

}  // namespace test_support
