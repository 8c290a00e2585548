// Closed-form Jaynes-Cummings spectrum with two-photon relaxation, used as
// an analytic benchmark against the Rabi recursion results.

#pragma once

#include <vector>

#include "openrabi/model.hpp"

namespace openrabi {

// Eigenfrequencies of the doublet {|n-1,e>, |n,g>}:
//   omega_pm = (n - 1/2)*nu_c - i*(n-1)^2*kappa_c2
//              +/- (1/2)*sqrt([nu_c - nu_q - 2i*(n-1)*kappa_c2]^2 + 4*g^2*n)
// with the principal complex square root. The + branch carries the label
// (n, (-1)^n), the - branch (n-1, (-1)^n), matching the g = 0 bare states.
struct JcLevelPair {
    int n = 1;             // doublet index
    Complex omega_upper;   // + branch, bare photon number n at g = 0
    Complex omega_lower;   // - branch, bare photon number n-1 at g = 0

    Parity parity() const { return (n % 2 == 0) ? Parity::even : Parity::odd; }
};

// The |0,g> singlet: omega = -nu_q/2.
Complex jc_singlet(const ModelParams& params);

JcLevelPair jc_eigenfrequencies(const ModelParams& params, int n);

// One JC level and the Rabi branch anchored to the same bare state.
struct JcRabiBranch {
    int bare_m = 0;             // photon number of the shared g = 0 bare state
    Parity parity = Parity::even;
    std::vector<Complex> jc;    // per grid point
    std::vector<Complex> rabi;
};

struct JcRabiComparison {
    std::vector<double> g_grid;
    std::vector<JcRabiBranch> branches;
};

// Pairs the analytic JC levels with overlap-tracked open-Rabi branches of
// the same bare anchor, over a g grid starting at 0. Covers bare photon
// numbers 0..max_bare_m in both parity sectors.
JcRabiComparison jc_vs_rabi_comparison(const ModelParams& params_template, const std::vector<double>& g_grid,
                                       const Truncation& t, int max_bare_m);

// Decay-rate slope d(-Im omega)/dg between the grid points nearest g_lo, g_hi.
double decay_slope(const std::vector<double>& g_grid, const std::vector<Complex>& omega, double g_lo, double g_hi);

}  // namespace openrabi
