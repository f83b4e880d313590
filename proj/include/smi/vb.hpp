#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smi/types.hpp"

namespace smi {

//
// Variational-Bayes estimator for a binned spectrum that is a weighted
// superposition of known component spectra. The unknown simplex weights get
// a Dirichlet prior alpha0; alternating expectation (per-bin responsibilities
// from E[ln pi_i] = digamma(alpha_i) - digamma(sum alpha)) and maximization
// (alpha_i = sum_k n_k rho_ki + alpha0_i) steps revise it into the posterior.
//

// Hyperparameters of the Dirichlet prior/posterior over component weights.
struct DirichletState {
    ComponentLabels components;
    std::vector<double> alpha;   // > 0
    std::vector<double> alpha0;  // >= 0
    double alpha_sum() const noexcept;
};

// rho(k, i) = posterior probability that an event detected in bin k came from
// component i. Rows sum to one; entries are exactly zero where the basis is.
class Responsibilities {
public:
    Responsibilities(std::size_t bins, std::size_t components);

    double operator()(std::size_t bin, std::size_t component) const {
        return rho_[bin * components_ + component];
    }
    double& operator()(std::size_t bin, std::size_t component) {
        return rho_[bin * components_ + component];
    }
    std::span<const double> row(std::size_t bin) const;
    std::size_t bins() const noexcept { return bins_; }
    std::size_t components() const noexcept { return components_; }

    // Zero-count bins where no component has intensity; their rows are zero.
    std::vector<std::size_t> empty_bins;

private:
    std::size_t bins_;
    std::size_t components_;
    std::vector<double> rho_;
};

struct VbReport {
    int iterations = 0;
    bool converged = false;
    double final_delta = 0.0;
    DirichletState posterior;
};

// alpha_i = sum_k n_k I(q_k,r_i)/sum_j I(q_k,r_j) + alpha0_i: every bin's
// counts spread over the components proportionally to their intensity there,
// so sum(alpha) = N + sum(alpha0). Errors if a component ends up with zero
// hyperparameter (no overlap with the observed bins and a zero prior).
DirichletState vb_init(const Smi& smi, const ComponentBasis& basis,
                       std::span<const double> alpha0);

// ln rho~(k,i) = digamma(alpha_i) - digamma(sum_j alpha_j) + ln I(q_k, r_i),
// normalized over components within each bin.
Responsibilities vb_expectation(const DirichletState& state, const ComponentBasis& basis);

// alpha_i = sum_k n_k rho(k,i) + alpha0_i. Errors when a bin holds observed
// events but no component can explain them.
DirichletState vb_maximization(const Responsibilities& rho, const Smi& smi,
                               std::span<const double> alpha0,
                               const ComponentLabels& components);

// Alternates expectation and maximization from vb_init until
// max_i |delta alpha_i| / (N + sum alpha0) < tol or max_iter is reached.
// tol = 0 runs exactly max_iter iterations.
VbReport run_vb(const Smi& smi, const ComponentBasis& basis,
                std::span<const double> alpha0, int max_iter, double tol);

// Dirichlet mean alpha_i / sum_j alpha_j.
WeightDistribution posterior_mean(const DirichletState& state);

} // namespace smi
