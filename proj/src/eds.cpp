#include "smi/eds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "smi/model.hpp"

namespace smi {
namespace {

double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t kNoiseStream = 0x9E3779B97F4A7C15ull;

} // namespace

IdentificationResult IdentificationResult::make(std::vector<std::string> predicted,
                                                std::vector<std::string> truth) {
    std::sort(predicted.begin(), predicted.end());
    std::sort(truth.begin(), truth.end());
    IdentificationResult r;
    r.correct = predicted == truth;
    r.predicted = std::move(predicted);
    r.truth = std::move(truth);
    return r;
}

std::vector<std::string> identify_elements(const WeightDistribution& weights, std::size_t k) {
    const std::size_t L = weights.components.size();
    if (k < 1 || k > L)
        throw std::invalid_argument("identify_elements: k must be in [1, L]");

    std::vector<std::size_t> order(L);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (weights.w[a] != weights.w[b]) return weights.w[a] > weights.w[b];
        return weights.components.labels[a] < weights.components.labels[b];
    });

    std::vector<std::string> picked;
    picked.reserve(k);
    for (std::size_t j = 0; j < k; ++j)
        picked.push_back(weights.components.labels[order[j]]);
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::string Score::str() const {
    return std::to_string(correct) + "/" + std::to_string(total);
}

Score score_identifications(std::span<const IdentificationResult> results) {
    if (results.empty())
        throw std::invalid_argument("score_identifications: empty result list");
    Score s;
    s.total = static_cast<int>(results.size());
    for (const auto& r : results)
        if (r.correct) ++s.correct;
    return s;
}

Smi make_compound_spectrum(const ComponentBasis& basis, std::span<const CompoundPart> formula,
                           std::uint64_t events, double noise, std::uint64_t seed) {
    if (formula.empty())
        throw std::invalid_argument("make_compound_spectrum: empty formula");
    if (!std::isfinite(noise) || noise < 0.0)
        throw std::domain_error("make_compound_spectrum: noise must be >= 0");

    const auto& labels = basis.components().labels;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i)
        index.emplace(labels[i], i);

    std::vector<double> w(labels.size(), 0.0);
    double ratio_sum = 0.0;
    for (const auto& part : formula) {
        auto it = index.find(part.label);
        if (it == index.end())
            throw std::invalid_argument("make_compound_spectrum: unknown label '" + part.label + "'");
        if (!std::isfinite(part.ratio) || part.ratio <= 0.0)
            throw std::invalid_argument("make_compound_spectrum: ratios must be > 0");
        w[it->second] += part.ratio;
        ratio_sum += part.ratio;
    }
    for (double& v : w) v /= ratio_sum;

    const auto p = superpose(basis, WeightDistribution::simplex(basis.components(), w));
    Smi spectrum = sample_events(basis.grid(), p, events, seed);

    if (noise > 0.0) {
        const double peak = static_cast<double>(events) * *std::max_element(p.begin(), p.end());
        const double sigma = noise * peak;
        std::mt19937_64 rng(seed ^ kNoiseStream);
        for (double& c : spectrum.counts) {
            const double u1 = 1.0 - unit(rng);  // (0, 1]
            const double u2 = unit(rng);
            const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
            c += std::max(0.0, sigma * z);
        }
    }
    return spectrum;
}

} // namespace smi
