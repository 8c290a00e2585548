// Physical parameters and Hamiltonian builders for the quantum Rabi model
// with two-photon relaxation, expressed in the number-parity basis.
//
// Basis bookkeeping: the transformed boson b = sigma_x * a satisfies
// b^dag b = a^dag a, and the overall parity P commutes with b^dag b. The
// full Hilbert space is spanned by |m, p> with m = 0..n_max and p = +/-1.
// Bare states map as |n, g> = |n, (-1)^n> and |n, e> = |n, (-1)^(n+1)>.

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace openrabi {

using Complex = std::complex<double>;

inline constexpr Complex kImag{0.0, 1.0};

enum class Parity : int { even = +1, odd = -1 };

inline constexpr double parity_sign(Parity p) { return static_cast<double>(static_cast<int>(p)); }
inline constexpr Parity opposite(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

// All rates in units of the cavity frequency nu_c (conventionally 1.0).
struct ModelParams {
    double nu_c = 1.0;       // cavity frequency
    double nu_q = 0.8;       // qubit frequency
    double g = 0.0;          // light-matter coupling, canonical sign g >= 0
    double kappa_c2 = 0.0;   // two-photon relaxation rate

    void validate() const;
};

// Bosonic cutoff: highest retained number state of the b mode.
// Each parity block is (n_max+1) x (n_max+1).
struct Truncation {
    int n_max;

    explicit Truncation(int n_max_) : n_max(n_max_) {
        if (n_max < 2)
            throw std::invalid_argument("Truncation: n_max must be >= 2 (two-photon decay vanishes below m = 2)");
    }
    int dim() const { return n_max + 1; }
    Truncation raised_by(int extra) const { return Truncation(n_max + extra); }
};

enum class QubitState { ground, excited };

// A state in the (cavity number, qubit excitation) basis.
struct BareState {
    int n = 0;
    QubitState qubit = QubitState::ground;
};

Parity parity_of(const BareState& s);

// Index of a bare state inside its parity block (equals its photon number).
inline int block_index(const BareState& s) { return s.n; }

// Full-space ordering: p = +1 block first, then p = -1, ascending m inside.
inline int block_offset(Parity p, const Truncation& t) { return p == Parity::even ? 0 : t.dim(); }
inline int full_dim(const Truncation& t) { return 2 * t.dim(); }
int full_index(const BareState& s, const Truncation& t);

// Annihilation operator of the b mode on one parity block.
Eigen::MatrixXd boson_annihilation(int dim);

// Closed Rabi Hamiltonian of one parity block:
//   H[m,m]   = m*nu_c - (p/2)*nu_q*(-1)^m
//   H[m,m+1] = H[m+1,m] = g*sqrt(m+1)
Eigen::MatrixXd closed_parity_hamiltonian(const ModelParams& params, Parity p, const Truncation& t);

// Closed block plus the two-photon decay term -i*kappa_c2*m*(m-1) on the
// diagonal. Reduces bit-for-bit to the closed builder at kappa_c2 = 0.
Eigen::MatrixXcd phenomenological_hamiltonian(const ModelParams& params, Parity p, const Truncation& t);

// Jaynes-Cummings doublet {|n-1,e>, |n,g>}, n >= 1, with two-photon decay:
//   [[(n-1)nu_c + nu_q/2 - i(n-1)(n-2)k,  g*sqrt(n)],
//    [g*sqrt(n),  n*nu_c - nu_q/2 - i(n-1)n*k]]
Eigen::Matrix2cd jc_doublet_block(const ModelParams& params, int n);

// Block-diagonal operators over the full (p=+1 (+) p=-1) space.
Eigen::MatrixXd full_closed_hamiltonian(const ModelParams& params, const Truncation& t);
Eigen::MatrixXcd full_effective_hamiltonian(const ModelParams& params, const Truncation& t);
Eigen::MatrixXd full_boson_annihilation(const Truncation& t);

// Diagonals of the full-space observables, derived from the basis map:
// photon number m, sigma_z = -(-1)^m * p, parity p.
Eigen::VectorXd number_diagonal(const Truncation& t);
Eigen::VectorXd sigma_z_diagonal(const Truncation& t);
Eigen::VectorXd parity_diagonal(const Truncation& t);

}  // namespace openrabi
