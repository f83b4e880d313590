#pragma once

#include <vector>

#include "smi/types.hpp"

namespace smi {

struct EmReport {
    int iterations = 0;
    std::vector<double> log_likelihood_trace;  // one entry per iteration, non-decreasing
    WeightDistribution weights;
};

// Maximum-likelihood mixture weights on the binned multinomial model.
// E-step r(k,i) proportional to w_i eta[i][k] over i; M-step
// w_i = sum_k n_k r(k,i) / N; uniform initialization. The trace records
// sum_k n_k ln(sum_i w_i eta[i][k]) at the weights of each iteration.
// Stops at max_iter or when the relative likelihood change drops below tol.
EmReport em_ml(const Smi& smi, const ComponentBasis& basis, int max_iter, double tol);

// Minimum-norm least-squares weights through the truncated-SVD pseudoinverse
// of the basis (singular values below 1e-12 * sigma_max dropped). Entries may
// be negative; the result is flagged unconstrained. When the raw solution has
// positive total it is rescaled to unit sum so it is comparable with simplex
// weights.
WeightDistribution svd_pinv_weights(const Smi& smi, const ComponentBasis& basis);

// sum_k n_k ln p_k with p = superpose(basis, weights). Bins with n_k = 0
// contribute nothing; an observed bin with p_k = 0 yields -inf.
double log_likelihood(const Smi& smi, const ComponentBasis& basis,
                      const WeightDistribution& weights);

} // namespace smi
