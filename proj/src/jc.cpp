#include "openrabi/jc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "openrabi/spectrum.hpp"

namespace openrabi {

Complex jc_singlet(const ModelParams& params) {
    params.validate();
    return Complex{-0.5 * params.nu_q, 0.0};
}

JcLevelPair jc_eigenfrequencies(const ModelParams& params, int n) {
    params.validate();
    if (n < 1) throw std::invalid_argument("jc_eigenfrequencies: n >= 1 required (n = 0 is the singlet)");
    const double k = params.kappa_c2;
    const Complex center = Complex{(n - 0.5) * params.nu_c, -k * (n - 1) * (n - 1)};
    const Complex inner = Complex{params.nu_c - params.nu_q, -2.0 * k * (n - 1)};
    const Complex disc = std::sqrt(inner * inner + 4.0 * params.g * params.g * static_cast<double>(n));
    JcLevelPair pair;
    pair.n = n;
    pair.omega_upper = center + 0.5 * disc;
    pair.omega_lower = center - 0.5 * disc;
    return pair;
}

namespace {

// Rank of each bare photon number within one parity block when levels are
// ordered by their g = 0 energies (the sweep's label anchor).
std::vector<int> bare_rank_by_m(const ModelParams& params, Parity p, int dim) {
    std::vector<int> order(dim);
    for (int m = 0; m < dim; ++m) order[m] = m;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ea = a * params.nu_c - 0.5 * parity_sign(p) * params.nu_q * ((a % 2 == 0) ? 1.0 : -1.0);
        const double eb = b * params.nu_c - 0.5 * parity_sign(p) * params.nu_q * ((b % 2 == 0) ? 1.0 : -1.0);
        return ea < eb;
    });
    std::vector<int> rank(dim);
    for (int r = 0; r < dim; ++r) rank[order[r]] = r;
    return rank;
}

}  // namespace

JcRabiComparison jc_vs_rabi_comparison(const ModelParams& params_template, const std::vector<double>& g_grid,
                                       const Truncation& t, int max_bare_m) {
    if (max_bare_m < 0 || max_bare_m > t.n_max)
        throw std::invalid_argument("jc_vs_rabi_comparison: max_bare_m outside truncation");

    JcRabiComparison cmp;
    cmp.g_grid = g_grid;

    std::map<Parity, SweepResult> sweeps;
    std::map<Parity, std::vector<int>> ranks;
    const int n_track = std::min(t.dim(), max_bare_m + 3);
    for (Parity p : {Parity::even, Parity::odd}) {
        sweeps[p] = track_levels_over_sweep(params_template, p, g_grid, t, n_track);
        ranks[p] = bare_rank_by_m(params_template, p, t.dim());
    }

    for (int m = 0; m <= max_bare_m; ++m) {
        for (QubitState q : {QubitState::ground, QubitState::excited}) {
            const BareState bare{m, q};
            const Parity p = parity_of(bare);
            const int rank = ranks[p][m];
            if (rank >= n_track) continue;

            JcRabiBranch branch;
            branch.bare_m = m;
            branch.parity = p;
            // |m,g> sits in doublet m as the + branch; |m,e> in doublet m+1
            // as the - branch; |0,g> is the singlet.
            for (double g : g_grid) {
                ModelParams params = params_template;
                params.g = g;
                if (q == QubitState::ground) {
                    branch.jc.push_back(m == 0 ? jc_singlet(params) : jc_eigenfrequencies(params, m).omega_upper);
                } else {
                    branch.jc.push_back(jc_eigenfrequencies(params, m + 1).omega_lower);
                }
            }
            branch.rabi = sweeps[p].branches[rank].omega;
            cmp.branches.push_back(std::move(branch));
        }
    }
    return cmp;
}

double decay_slope(const std::vector<double>& g_grid, const std::vector<Complex>& omega, double g_lo, double g_hi) {
    if (g_grid.size() != omega.size() || g_grid.size() < 2)
        throw std::invalid_argument("decay_slope: mismatched or too-short series");
    auto nearest = [&](double target) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < g_grid.size(); ++i)
            if (std::abs(g_grid[i] - target) < std::abs(g_grid[best] - target)) best = i;
        return best;
    };
    const std::size_t i_lo = nearest(g_lo);
    const std::size_t i_hi = nearest(g_hi);
    if (i_lo == i_hi) throw std::invalid_argument("decay_slope: window collapses to one grid point");
    const double kappa_lo = -omega[i_lo].imag();
    const double kappa_hi = -omega[i_hi].imag();
    return (kappa_hi - kappa_lo) / (g_grid[i_hi] - g_grid[i_lo]);
}

}  // namespace openrabi
