#include "openrabi/model.hpp"

#include <cmath>

namespace openrabi {

void ModelParams::validate() const {
    if (!(nu_c > 0.0)) throw std::invalid_argument("ModelParams: nu_c must be positive");
    if (kappa_c2 < 0.0) throw std::invalid_argument("ModelParams: kappa_c2 must be nonnegative");
    if (g < 0.0) throw std::invalid_argument("ModelParams: g must be nonnegative (spectrum depends on |g| only)");
    if (!std::isfinite(nu_c) || !std::isfinite(nu_q) || !std::isfinite(g) || !std::isfinite(kappa_c2))
        throw std::invalid_argument("ModelParams: parameters must be finite");
}

Parity parity_of(const BareState& s) {
    const bool even_photons = (s.n % 2 == 0);
    if (s.qubit == QubitState::ground) return even_photons ? Parity::even : Parity::odd;
    return even_photons ? Parity::odd : Parity::even;
}

int full_index(const BareState& s, const Truncation& t) {
    if (s.n < 0 || s.n > t.n_max)
        throw std::invalid_argument("full_index: photon number outside truncation");
    return block_offset(parity_of(s), t) + s.n;
}

Eigen::MatrixXd boson_annihilation(int dim) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 1; m < dim; ++m) b(m - 1, m) = std::sqrt(static_cast<double>(m));
    return b;
}

Eigen::MatrixXd closed_parity_hamiltonian(const ModelParams& params, Parity p, const Truncation& t) {
    params.validate();
    const int dim = t.dim();
    const double ps = parity_sign(p);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m < dim; ++m) {
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        h(m, m) = m * params.nu_c - 0.5 * ps * params.nu_q * sgn;
        if (m + 1 < dim) {
            const double c = params.g * std::sqrt(static_cast<double>(m + 1));
            h(m, m + 1) = c;
            h(m + 1, m) = c;
        }
    }
    return h;
}

Eigen::MatrixXcd phenomenological_hamiltonian(const ModelParams& params, Parity p, const Truncation& t) {
    Eigen::MatrixXcd h = closed_parity_hamiltonian(params, p, t).cast<Complex>();
    for (int m = 0; m < t.dim(); ++m)
        h(m, m) -= kImag * (params.kappa_c2 * m * (m - 1));
    return h;
}

Eigen::Matrix2cd jc_doublet_block(const ModelParams& params, int n) {
    params.validate();
    if (n < 1) throw std::invalid_argument("jc_doublet_block: n >= 1 required (the n = 0 singlet has no doublet)");
    const double k = params.kappa_c2;
    Eigen::Matrix2cd h;
    h(0, 0) = Complex((n - 1) * params.nu_c + 0.5 * params.nu_q, -k * (n - 1) * (n - 2));
    h(1, 1) = Complex(n * params.nu_c - 0.5 * params.nu_q, -k * (n - 1) * n);
    h(0, 1) = h(1, 0) = params.g * std::sqrt(static_cast<double>(n));
    return h;
}

Eigen::MatrixXd full_closed_hamiltonian(const ModelParams& params, const Truncation& t) {
    const int d = t.dim();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    h.topLeftCorner(d, d) = closed_parity_hamiltonian(params, Parity::even, t);
    h.bottomRightCorner(d, d) = closed_parity_hamiltonian(params, Parity::odd, t);
    return h;
}

Eigen::MatrixXcd full_effective_hamiltonian(const ModelParams& params, const Truncation& t) {
    const int d = t.dim();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    h.topLeftCorner(d, d) = phenomenological_hamiltonian(params, Parity::even, t);
    h.bottomRightCorner(d, d) = phenomenological_hamiltonian(params, Parity::odd, t);
    return h;
}

Eigen::MatrixXd full_boson_annihilation(const Truncation& t) {
    const int d = t.dim();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    b.topLeftCorner(d, d) = boson_annihilation(d);
    b.bottomRightCorner(d, d) = boson_annihilation(d);
    return b;
}

Eigen::VectorXd number_diagonal(const Truncation& t) {
    const int d = t.dim();
    Eigen::VectorXd v(2 * d);
    for (int m = 0; m < d; ++m) v(m) = v(d + m) = m;
    return v;
}

Eigen::VectorXd sigma_z_diagonal(const Truncation& t) {
    const int d = t.dim();
    Eigen::VectorXd v(2 * d);
    for (int m = 0; m < d; ++m) {
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        v(m) = -sgn;       // p = +1
        v(d + m) = sgn;    // p = -1
    }
    return v;
}

Eigen::VectorXd parity_diagonal(const Truncation& t) {
    const int d = t.dim();
    Eigen::VectorXd v(2 * d);
    v.head(d).setConstant(1.0);
    v.tail(d).setConstant(-1.0);
    return v;
}

}  // namespace openrabi
