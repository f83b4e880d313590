#include "smi/vb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "smi/numerics.hpp"

namespace smi {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_alpha0(std::span<const double> alpha0, std::size_t L) {
    if (alpha0.size() != L)
        throw std::invalid_argument("vb: alpha0 length does not match components");
    for (double a : alpha0)
        if (!std::isfinite(a) || a < 0.0)
            throw std::domain_error("vb: alpha0 entries must be finite and >= 0");
}

} // namespace

double DirichletState::alpha_sum() const noexcept {
    return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

Responsibilities::Responsibilities(std::size_t bins, std::size_t components)
    : bins_(bins), components_(components), rho_(bins * components, 0.0) {}

std::span<const double> Responsibilities::row(std::size_t bin) const {
    return {rho_.data() + bin * components_, components_};
}

DirichletState vb_init(const Smi& smi, const ComponentBasis& basis,
                       std::span<const double> alpha0) {
    if (smi.grid != basis.grid())
        throw std::invalid_argument("vb_init: wave grids differ");
    const std::size_t L = basis.num_components();
    const std::size_t K = basis.num_bins();
    check_alpha0(alpha0, L);
    if (!(smi.total() > 0.0))
        throw std::invalid_argument("vb_init: spectrum holds no events");

    DirichletState state;
    state.components = basis.components();
    state.alpha0.assign(alpha0.begin(), alpha0.end());
    state.alpha.assign(alpha0.begin(), alpha0.end());

    // distribute each bin's counts over components in proportion to their
    // intensity there; one expectation/maximization round at uniform tilt,
    // which keeps sum(alpha) = N + sum(alpha0)
    for (std::size_t k = 0; k < K; ++k) {
        const double nk = smi.counts[k];
        if (nk == 0.0) continue;
        double colsum = 0.0;
        for (std::size_t i = 0; i < L; ++i) colsum += basis.intensity(i, k);
        if (!(colsum > 0.0))
            throw std::invalid_argument(
                "vb_init: observed events in a bin no component can explain");
        for (std::size_t i = 0; i < L; ++i)
            state.alpha[i] += nk * (basis.intensity(i, k) / colsum);
    }
    for (std::size_t i = 0; i < L; ++i)
        if (!(state.alpha[i] > 0.0))
            throw std::domain_error("vb_init: component '" + state.components.labels[i] +
                                    "' has no overlap with the observed bins and a zero prior");
    return state;
}

Responsibilities vb_expectation(const DirichletState& state, const ComponentBasis& basis) {
    if (state.components != basis.components())
        throw std::invalid_argument("vb_expectation: component sets differ");
    const std::size_t L = basis.num_components();
    const std::size_t K = basis.num_bins();

    const double psi_total = digamma(PositiveReal(state.alpha_sum()));
    std::vector<double> elog_pi(L);
    for (std::size_t i = 0; i < L; ++i)
        elog_pi[i] = digamma(PositiveReal(state.alpha[i])) - psi_total;

    Responsibilities rho(K, L);
    std::vector<double> logrow(L);
    for (std::size_t k = 0; k < K; ++k) {
        double maxv = kNegInf;
        for (std::size_t i = 0; i < L; ++i) {
            const double I = basis.intensity(i, k);
            logrow[i] = (I > 0.0) ? elog_pi[i] + std::log(I) : kNegInf;
            if (logrow[i] > maxv) maxv = logrow[i];
        }
        if (maxv == kNegInf) {
            // no component covers this bin; legal only while it has no counts,
            // which vb_maximization enforces
            rho.empty_bins.push_back(k);
            continue;
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
            const double e = (logrow[i] == kNegInf) ? 0.0 : std::exp(logrow[i] - maxv);
            rho(k, i) = e;
            sum += e;
        }
        for (std::size_t i = 0; i < L; ++i)
            rho(k, i) /= sum;
    }
    return rho;
}

DirichletState vb_maximization(const Responsibilities& rho, const Smi& smi,
                               std::span<const double> alpha0,
                               const ComponentLabels& components) {
    const std::size_t L = rho.components();
    const std::size_t K = rho.bins();
    if (smi.counts.size() != K)
        throw std::invalid_argument("vb_maximization: spectrum length does not match rho");
    if (components.size() != L)
        throw std::invalid_argument("vb_maximization: component labels do not match rho");
    check_alpha0(alpha0, L);

    DirichletState state;
    state.components = components;
    state.alpha0.assign(alpha0.begin(), alpha0.end());
    state.alpha.assign(alpha0.begin(), alpha0.end());
    for (std::size_t k = 0; k < K; ++k) {
        const double nk = smi.counts[k];
        if (nk == 0.0) continue;
        const auto row = rho.row(k);
        double row_sum = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
            state.alpha[i] += nk * row[i];
            row_sum += row[i];
        }
        if (row_sum == 0.0)
            throw std::invalid_argument(
                "vb_maximization: observed events in a bin no component can explain");
    }
    return state;
}

VbReport run_vb(const Smi& smi, const ComponentBasis& basis,
                std::span<const double> alpha0, int max_iter, double tol) {
    if (max_iter < 1)
        throw std::invalid_argument("run_vb: max_iter must be >= 1");
    if (!(tol >= 0.0))
        throw std::invalid_argument("run_vb: tol must be >= 0");

    VbReport report;
    report.posterior = vb_init(smi, basis, alpha0);
    const double scale = smi.total() +
        std::accumulate(alpha0.begin(), alpha0.end(), 0.0);

    for (int it = 1; it <= max_iter; ++it) {
        const Responsibilities rho = vb_expectation(report.posterior, basis);
        DirichletState next = vb_maximization(rho, smi, alpha0, basis.components());

        double delta = 0.0;
        for (std::size_t i = 0; i < next.alpha.size(); ++i)
            delta = std::max(delta, std::abs(next.alpha[i] - report.posterior.alpha[i]));
        delta /= scale;

        report.posterior = std::move(next);
        report.iterations = it;
        report.final_delta = delta;
        if (delta < tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

WeightDistribution posterior_mean(const DirichletState& state) {
    const double total = state.alpha_sum();
    if (!(total > 0.0))
        throw std::domain_error("posterior_mean: alpha sum must be positive");
    std::vector<double> w(state.alpha.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = state.alpha[i] / total;
    return WeightDistribution::simplex(state.components, std::move(w));
}

} // namespace smi
