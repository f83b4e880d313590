#include "smi/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace smi {

PositiveReal::PositiveReal(double value) : value_(value) {
    if (!std::isfinite(value) || value <= 0.0)
        throw std::domain_error("PositiveReal: value must be finite and > 0");
}

double digamma(PositiveReal xin) {
    double x = xin.value();
    double acc = 0.0;

    // Psi(x) = Psi(x+1) - 1/x until the asymptotic region.
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }

    // Psi(x) ~ ln x - 1/(2x) - sum_k B_2k / (2k x^2k), terms through x^-14.
    // B_2k/2k: 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760, 1/12.
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double tail =
        inv2 * (1.0 / 12.0 -
        inv2 * (1.0 / 120.0 -
        inv2 * (1.0 / 252.0 -
        inv2 * (1.0 / 240.0 -
        inv2 * (1.0 / 132.0 -
        inv2 * (691.0 / 32760.0 -
        inv2 * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - tail;
}

double log_sum_exp(std::span<const double> v) {
    if (v.empty())
        throw std::invalid_argument("log_sum_exp: empty input");

    const double inf = std::numeric_limits<double>::infinity();
    double maxv = -inf;
    for (double x : v) {
        if (std::isnan(x) || x == inf)
            throw std::domain_error("log_sum_exp: entries must be < +inf and not NaN");
        if (x > maxv) maxv = x;
    }
    if (maxv == -inf) return -inf;

    double sum = 0.0;
    for (double x : v)
        if (x != -inf) sum += std::exp(x - maxv);
    return maxv + std::log(sum);
}

double gamma_pdf(double x, double shape, double scale) {
    if (!std::isfinite(shape) || shape <= 0.0 || !std::isfinite(scale) || scale <= 0.0)
        throw std::domain_error("gamma_pdf: shape and scale must be > 0");
    if (std::isnan(x))
        throw std::domain_error("gamma_pdf: x is NaN");

    if (x < 0.0) return 0.0;
    if (x == 0.0) {
        if (shape > 1.0) return 0.0;
        if (shape == 1.0) return 1.0 / scale;
        return std::numeric_limits<double>::infinity();
    }
    const double lp = (shape - 1.0) * std::log(x) - x / scale
                    - std::lgamma(shape) - shape * std::log(scale);
    return std::exp(lp);
}

} // namespace smi
