#include "openrabi/vectorized.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "openrabi/assignment.hpp"

namespace openrabi {

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("vectorize: square matrix required");
    const int d = static_cast<int>(rho.rows());
    Eigen::VectorXcd v(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v(i * d + j) = rho(i, j);
    return v;
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v) {
    const int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (static_cast<long long>(d) * d != v.size())
        throw std::invalid_argument("unvectorize: length is not a perfect square");
    Eigen::MatrixXcd rho(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
    return rho;
}

namespace {

// Auxiliary-sector operators from the adjoint matrix-element relations.
Eigen::MatrixXcd auxiliary_of(const Eigen::MatrixXcd& system_op) {
    const int n = static_cast<int>(system_op.rows());
    Eigen::MatrixXcd aux(n, n);
    for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col) aux(row, col) = std::conj(system_op(row, col));
    return aux;
}

Eigen::MatrixXcd doubled_operator(const Eigen::MatrixXcd& h_s, const Eigen::MatrixXcd& collapse_s, double kappa,
                                  bool include_collapse) {
    const int n = static_cast<int>(h_s.rows());
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd h_a = auxiliary_of(h_s);
    Eigen::MatrixXcd h_u = Eigen::kroneckerProduct(h_s, eye) - Eigen::kroneckerProduct(eye, h_a);
    if (include_collapse) {
        const Eigen::MatrixXcd collapse_a = auxiliary_of(collapse_s);
        h_u += 2.0 * kImag * kappa * Eigen::kroneckerProduct(collapse_s, collapse_a);
    }
    return h_u;
}

Eigen::MatrixXcd block_collapse_operator(int dim) {
    const Eigen::MatrixXd b = boson_annihilation(dim);
    return (b * b).cast<Complex>();
}

std::vector<Complex> sorted_eigenvalues(const Eigen::MatrixXcd& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    std::vector<Complex> values(solver.eigenvalues().data(), solver.eigenvalues().data() + m.rows());
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return values;
}

}  // namespace

Eigen::MatrixXcd full_effective_operator(const ModelParams& params, const Truncation& t, bool include_collapse) {
    params.validate();
    const Eigen::MatrixXcd h_s = full_effective_hamiltonian(params, t);
    Eigen::MatrixXd b = full_boson_annihilation(t);
    const Eigen::MatrixXcd collapse = (b * b).cast<Complex>();
    return doubled_operator(h_s, collapse, params.kappa_c2, include_collapse);
}

Eigen::MatrixXcd parity_subspace_operator(const ModelParams& params, const Truncation& t, Parity ps, Parity pa,
                                          bool include_collapse) {
    params.validate();
    const Eigen::MatrixXcd h_row = phenomenological_hamiltonian(params, ps, t);
    const Eigen::MatrixXcd h_col = phenomenological_hamiltonian(params, pa, t);
    const int d = t.dim();
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd h_u = Eigen::kroneckerProduct(h_row, eye) - Eigen::kroneckerProduct(eye, auxiliary_of(h_col));
    if (include_collapse) {
        const Eigen::MatrixXcd collapse = block_collapse_operator(d);
        h_u += 2.0 * kImag * params.kappa_c2 * Eigen::kroneckerProduct(collapse, auxiliary_of(collapse));
    }
    return h_u;
}

std::array<SubspaceSpectrum, 4> full_spectrum_by_parity(const ModelParams& params, const Truncation& t,
                                                        bool include_collapse) {
    std::array<SubspaceSpectrum, 4> result;
    int slot = 0;
    for (Parity ps : {Parity::even, Parity::odd}) {
        for (Parity pa : {Parity::even, Parity::odd}) {
            result[slot].ps = ps;
            result[slot].pa = pa;
            result[slot].omegas = sorted_eigenvalues(parity_subspace_operator(params, t, ps, pa, include_collapse));
            ++slot;
        }
    }
    return result;
}

Eigen::Matrix2cd tls_analytic_solution(double nu_q, double gamma_q, const Eigen::Matrix2cd& rho0, double t) {
    // Basis (e, g): rho0(0,0) = rho_ee, rho0(0,1) = rho_eg.
    Eigen::Matrix2cd rho;
    rho(0, 0) = rho0(0, 0) * std::exp(-2.0 * gamma_q * t);
    rho(0, 1) = rho0(0, 1) * std::exp(Complex{-gamma_q * t, -nu_q * t});
    rho(1, 0) = rho0(1, 0) * std::exp(Complex{-gamma_q * t, +nu_q * t});
    rho(1, 1) = rho0(0, 0) * (1.0 - std::exp(-2.0 * gamma_q * t)) + rho0(1, 1);
    return rho;
}

Eigen::Matrix4cd tls_full_effective_hamiltonian(double nu_q, double gamma_q, bool include_collapse) {
    // H_q,ef = (nu_q - i gamma_q) s+s-, collapse operator sigma^-, in the
    // doubled basis (ee, eg, ge, gg).
    Eigen::Matrix2cd h_ef = Eigen::Matrix2cd::Zero();
    h_ef(0, 0) = Complex{nu_q, -gamma_q};
    Eigen::Matrix2cd lower = Eigen::Matrix2cd::Zero();
    lower(1, 0) = 1.0;  // sigma^- |e> = |g>
    return doubled_operator(h_ef, lower, gamma_q, include_collapse);
}

Eigen::Matrix4cd tls_propagator(double nu_q, double gamma_q, double t) {
    const Eigen::Matrix4cd h = tls_full_effective_hamiltonian(nu_q, gamma_q);
    return (-kImag * t * h).exp();
}

TlsCollapseDemo tls_collapse_effect_demo(double nu_q, double gamma_q) {
    if (!(gamma_q > 0.0)) throw std::invalid_argument("tls_collapse_effect_demo: gamma_q > 0 required");
    TlsCollapseDemo demo;
    for (bool with_collapse : {true, false}) {
        const Eigen::Matrix4cd h = tls_full_effective_hamiltonian(nu_q, gamma_q, with_collapse);
        Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(h);
        std::vector<int> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const Complex va = solver.eigenvalues()(a), vb = solver.eigenvalues()(b);
            if (va.real() != vb.real()) return va.real() < vb.real();
            return va.imag() < vb.imag();
        });
        Eigen::Vector4cd values;
        Eigen::Matrix4cd vectors;
        int zero_idx = 0;
        for (int r = 0; r < 4; ++r) {
            values(r) = solver.eigenvalues()(order[r]);
            Eigen::Vector4cd v = solver.eigenvectors().col(order[r]);
            // Deterministic phase: largest entry real positive.
            int peak = 0;
            for (int i = 1; i < 4; ++i)
                if (std::abs(v(i)) > std::abs(v(peak))) peak = i;
            v *= std::conj(v(peak)) / std::abs(v(peak));
            vectors.col(r) = v;
            if (std::abs(values(r)) < std::abs(values(zero_idx))) zero_idx = r;
        }
        if (with_collapse) {
            demo.eigenvalues_with = values;
            demo.eigenvectors_with = vectors;
            demo.stationary_with = vectors.col(zero_idx);
        } else {
            demo.eigenvalues_without = values;
            demo.eigenvectors_without = vectors;
            demo.stationary_without = vectors.col(zero_idx);
        }
    }
    return demo;
}

DecompositionResidual tensor_decomposition_residual(const std::vector<Complex>& full_spectrum,
                                                    const std::vector<Complex>& reduced_spectrum) {
    const std::size_t n = reduced_spectrum.size();
    if (full_spectrum.size() != n * n)
        throw std::invalid_argument("tensor_decomposition_residual: full size must be reduced size squared");

    std::vector<Complex> predicted;
    predicted.reserve(n * n);
    for (const Complex& m : reduced_spectrum)
        for (const Complex& k : reduced_spectrum) predicted.push_back(m - std::conj(k));

    double mean_full = 0.0, mean_pred = 0.0;
    for (const Complex& w : full_spectrum) mean_full += w.real();
    for (const Complex& w : predicted) mean_pred += w.real();
    const double offset = (mean_full - mean_pred) / static_cast<double>(n * n);
    for (Complex& w : predicted) w += offset;

    const MatchedDistance dist = matched_distance(predicted, full_spectrum);
    DecompositionResidual residual;
    residual.max_mismatch = dist.max;
    residual.mean_mismatch = dist.mean;
    residual.real_offset_applied = offset;
    return residual;
}

}  // namespace openrabi
