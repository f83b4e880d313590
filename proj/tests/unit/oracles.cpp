#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

long double digamma(long double x) {
    if (!(x > 0.0L))
        throw std::domain_error("oracle::digamma: x must be > 0");

    // B_2, B_4, ..., B_28 by Akiyama-Tanigawa.
    static const std::vector<long double> b2k = [] {
        const int nmax = 28;
        std::vector<long double> a(nmax + 1);
        std::vector<long double> bern(nmax + 1);
        for (int m = 0; m <= nmax; ++m) {
            a[m] = 1.0L / static_cast<long double>(m + 1);
            for (int j = m; j >= 1; --j)
                a[j - 1] = static_cast<long double>(j) * (a[j - 1] - a[j]);
            bern[m] = a[0];
        }
        std::vector<long double> out;
        for (int k = 2; k <= nmax; k += 2)
            out.push_back(bern[k]);
        return out;
    }();

    long double acc = 0.0L;
    while (x < 64.0L) {
        acc -= 1.0L / x;
        x += 1.0L;
    }
    acc += logl(x) - 0.5L / x;
    const long double inv2 = 1.0L / (x * x);
    long double p = inv2;
    for (std::size_t k = 0; k < b2k.size(); ++k) {
        acc -= b2k[k] / (2.0L * static_cast<long double>(k + 1)) * p;
        p *= inv2;
    }
    return acc;
}

VbRound vb_round_naive(std::span<const double> counts, std::span<const double> intensity,
                       std::span<const double> alpha, std::span<const double> alpha0) {
    const std::size_t K = counts.size();
    const std::size_t L = alpha.size();

    long double alpha_total = 0.0L;
    for (double a : alpha) alpha_total += a;
    const long double psi_total = digamma(alpha_total);

    std::vector<long double> tilt(L);
    for (std::size_t i = 0; i < L; ++i)
        tilt[i] = expl(digamma(static_cast<long double>(alpha[i])) - psi_total);

    VbRound round;
    round.rho.assign(K * L, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        long double den = 0.0L;
        for (std::size_t i = 0; i < L; ++i)
            den += tilt[i] * static_cast<long double>(intensity[i * K + k]);
        if (den == 0.0L) continue;
        for (std::size_t i = 0; i < L; ++i)
            round.rho[k * L + i] = static_cast<double>(
                tilt[i] * static_cast<long double>(intensity[i * K + k]) / den);
    }

    round.alpha.assign(L, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
        long double acc = alpha0[i];
        for (std::size_t k = 0; k < K; ++k)
            acc += static_cast<long double>(counts[k]) *
                   static_cast<long double>(round.rho[k * L + i]);
        round.alpha[i] = static_cast<double>(acc);
    }
    return round;
}

std::vector<double> superpose_naive(std::span<const double> intensity,
                                    std::span<const double> w, std::size_t bins) {
    const std::size_t L = w.size();
    std::vector<double> p(bins, 0.0);
    long double total = 0.0L;
    for (std::size_t k = 0; k < bins; ++k) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < L; ++i)
            acc += static_cast<long double>(w[i]) * static_cast<long double>(intensity[i * bins + k]);
        p[k] = static_cast<double>(acc);
        total += acc;
    }
    for (double& v : p)
        v = static_cast<double>(static_cast<long double>(v) / total);
    return p;
}

std::vector<double> em_naive(std::span<const double> counts, std::span<const double> intensity,
                             std::size_t bins, std::size_t iters, std::vector<double> start) {
    const std::size_t L = intensity.size() / bins;
    double total_counts = 0.0;
    for (double c : counts) total_counts += c;

    std::vector<double> eta(intensity.begin(), intensity.end());
    for (std::size_t i = 0; i < L; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < bins; ++k) s += eta[i * bins + k];
        for (std::size_t k = 0; k < bins; ++k) eta[i * bins + k] /= s;
    }

    std::vector<double> w = start.empty() ? std::vector<double>(L, 1.0 / L) : std::move(start);
    for (std::size_t it = 0; it < iters; ++it) {
        std::vector<double> next(L, 0.0);
        for (std::size_t k = 0; k < bins; ++k) {
            if (counts[k] == 0.0) continue;
            double den = 0.0;
            for (std::size_t i = 0; i < L; ++i) den += w[i] * eta[i * bins + k];
            if (den == 0.0)
                throw std::invalid_argument("oracle::em_naive: uncovered bin with counts");
            for (std::size_t i = 0; i < L; ++i)
                next[i] += counts[k] * w[i] * eta[i * bins + k] / den;
        }
        for (std::size_t i = 0; i < L; ++i) w[i] = next[i] / total_counts;
    }
    return w;
}

double trapezoid(const std::function<double(double)>& f, double a, double b, double step) {
    const std::size_t n = static_cast<std::size_t>((b - a) / step);
    long double acc = 0.5L * (f(a) + f(b));
    for (std::size_t j = 1; j < n; ++j)
        acc += f(a + step * static_cast<double>(j));
    return static_cast<double>(acc * static_cast<long double>(step));
}

} // namespace oracle
