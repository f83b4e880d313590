#include "smi/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "smi/model.hpp"

namespace smi {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

} // namespace

EmReport em_ml(const Smi& smi, const ComponentBasis& basis, int max_iter, double tol) {
    if (smi.grid != basis.grid())
        throw std::invalid_argument("em_ml: wave grids differ");
    if (max_iter < 1)
        throw std::invalid_argument("em_ml: max_iter must be >= 1");
    if (!(tol >= 0.0))
        throw std::invalid_argument("em_ml: tol must be >= 0");
    const double N = smi.total();
    if (!(N > 0.0))
        throw std::invalid_argument("em_ml: spectrum holds no events");

    const std::size_t L = basis.num_components();
    const std::size_t K = basis.num_bins();

    const auto sums = basis.row_sums();
    std::vector<double> log_eta(L * K);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k) {
            const double I = basis.intensity(i, k);
            log_eta[i * K + k] = (I > 0.0) ? std::log(I / sums[i]) : kNegInf;
        }

    std::vector<double> w(L, 1.0 / static_cast<double>(L));
    std::vector<double> lw(L), wnext(L), ex(L);
    EmReport report;

    for (int it = 1; it <= max_iter; ++it) {
        for (std::size_t i = 0; i < L; ++i)
            lw[i] = (w[i] > 0.0) ? std::log(w[i]) : kNegInf;

        double ll = 0.0;
        std::fill(wnext.begin(), wnext.end(), 0.0);
        for (std::size_t k = 0; k < K; ++k) {
            const double nk = smi.counts[k];
            double maxv = kNegInf;
            for (std::size_t i = 0; i < L; ++i) {
                const double x = lw[i] + log_eta[i * K + k];
                ex[i] = x;
                if (x > maxv) maxv = x;
            }
            if (maxv == kNegInf) {
                if (nk > 0.0)
                    throw std::invalid_argument(
                        "em_ml: observed events in a bin no component can explain");
                continue;
            }
            if (nk == 0.0) continue;
            double sum = 0.0;
            for (std::size_t i = 0; i < L; ++i) {
                ex[i] = (ex[i] == kNegInf) ? 0.0 : std::exp(ex[i] - maxv);
                sum += ex[i];
            }
            ll += nk * (maxv + std::log(sum));
            const double scale = nk / sum;
            for (std::size_t i = 0; i < L; ++i)
                wnext[i] += scale * ex[i];
        }

        report.log_likelihood_trace.push_back(ll);
        report.iterations = it;
        for (std::size_t i = 0; i < L; ++i)
            w[i] = wnext[i] / N;

        if (it > 1) {
            const double prev = report.log_likelihood_trace[it - 2];
            const double rel = std::abs(ll - prev) / std::max(1.0, std::abs(ll));
            if (rel < tol) break;
        }
    }

    report.weights = WeightDistribution::simplex(basis.components(), std::move(w));
    return report;
}

WeightDistribution svd_pinv_weights(const Smi& smi, const ComponentBasis& basis) {
    if (smi.grid != basis.grid())
        throw std::invalid_argument("svd_pinv_weights: wave grids differ");
    const std::size_t L = basis.num_components();
    const std::size_t K = basis.num_bins();

    // solve I^T a = S in the least-squares, minimum-norm sense
    Eigen::MatrixXd M(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(L));
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
            M(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = basis.intensity(i, k);
    Eigen::VectorXd b(static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k)
        b(static_cast<Eigen::Index>(k)) = smi.counts[k];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    if (!(sigma_max > 0.0))
        throw std::domain_error("svd_pinv_weights: degenerate basis");

    const Eigen::VectorXd utb = svd.matrixU().transpose() * b;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(sv.size());
    const double cutoff = 1e-12 * sigma_max;
    for (Eigen::Index j = 0; j < sv.size(); ++j)
        if (sv(j) >= cutoff) z(j) = utb(j) / sv(j);
    const Eigen::VectorXd a = svd.matrixV() * z;

    std::vector<double> w(a.data(), a.data() + a.size());
    double total = 0.0;
    for (double v : w) total += v;
    if (total > 0.0)
        for (double& v : w) v /= total;
    return WeightDistribution::unconstrained_values(basis.components(), std::move(w));
}

double log_likelihood(const Smi& smi, const ComponentBasis& basis,
                      const WeightDistribution& weights) {
    if (smi.grid != basis.grid())
        throw std::invalid_argument("log_likelihood: wave grids differ");
    const auto p = superpose(basis, weights);
    double ll = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double nk = smi.counts[k];
        if (nk == 0.0) continue;
        if (p[k] == 0.0) return kNegInf;
        ll += nk * std::log(p[k]);
    }
    return ll;
}

} // namespace smi
