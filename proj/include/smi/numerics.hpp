#pragma once

#include <span>

namespace smi {

// Strictly positive finite real; the admissible argument of digamma.
class PositiveReal {
public:
    explicit PositiveReal(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

// Digamma function. Recurrence shift into x >= 6 followed by the Bernoulli
// asymptotic series through x^-14; absolute error <= 1e-10 on [1e-3, 1e7].
double digamma(PositiveReal x);

// ln sum_i exp(v_i) with max-shift. Entries equal to -inf contribute nothing;
// if every entry is -inf the result is -inf. +inf and NaN entries are rejected.
double log_sum_exp(std::span<const double> v);

// Gamma density, shape/scale parametrization. Zero for x < 0.
double gamma_pdf(double x, double shape, double scale);

} // namespace smi
