#include "openrabi/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace openrabi {

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols()) throw std::invalid_argument("min_cost_assignment: square matrix required");
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();

    // Potentials-based Hungarian algorithm; p[j] is the row matched to
    // column j (1-based, 0 = unmatched sentinel).
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> col_of_row(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) col_of_row[p[j] - 1] = j - 1;
    return col_of_row;
}

MatchedDistance matched_distance(const std::vector<std::complex<double>>& a,
                                 const std::vector<std::complex<double>>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("matched_distance: size mismatch");
    const int n = static_cast<int>(a.size());
    MatchedDistance result;
    if (n == 0) return result;

    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = std::abs(a[i] - b[j]);
    result.assignment = min_cost_assignment(cost);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = cost(i, result.assignment[i]);
        result.max = std::max(result.max, d);
        total += d;
    }
    result.mean = total / n;
    return result;
}

}  // namespace openrabi
