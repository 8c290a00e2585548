// Minimum-cost bipartite assignment (Hungarian algorithm with potentials)
// and matched-distance metrics between complex spectra.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace openrabi {

// Returns col[i] = column assigned to row i, minimizing the total cost of a
// square cost matrix. O(n^3).
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

struct MatchedDistance {
    double max = 0.0;
    double mean = 0.0;
    std::vector<int> assignment;  // b-index matched to each a-index
};

// Optimal pairing of two equal-size complex multisets under total |a - b|.
MatchedDistance matched_distance(const std::vector<std::complex<double>>& a,
                                 const std::vector<std::complex<double>>& b);

}  // namespace openrabi
