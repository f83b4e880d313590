#include "smi/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace smi {

double l1_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("l1_distance: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::abs(a[i] - b[i]);
    return acc;
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("l2_distance: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double total_variation(std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        acc += std::abs(w[i + 1] - w[i]);
    return acc;
}

} // namespace smi
