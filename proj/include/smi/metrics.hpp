#pragma once

#include <span>

namespace smi {

double l1_distance(std::span<const double> a, std::span<const double> b);
double l2_distance(std::span<const double> a, std::span<const double> b);

// sum_i |w_{i+1} - w_i|; the smoothness measure used to compare estimates.
double total_variation(std::span<const double> w);

} // namespace smi
