#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smi/types.hpp"

namespace smi {

struct IdentificationResult {
    std::vector<std::string> predicted;  // sorted set
    std::vector<std::string> truth;      // sorted set
    bool correct = false;

    static IdentificationResult make(std::vector<std::string> predicted,
                                     std::vector<std::string> truth);
};

// Labels of the k largest weight entries (raw values, negatives included);
// exact ties break by ascending label. Returned sorted ascending.
std::vector<std::string> identify_elements(const WeightDistribution& weights, std::size_t k);

struct Score {
    int correct = 0;
    int total = 0;
    std::string str() const;  // "c/t"
};

Score score_identifications(std::span<const IdentificationResult> results);

struct CompoundPart {
    std::string label;
    double ratio;
};

// Normalizes the stoichiometric ratios to superposition weights, samples
// `events` detections from the superposed spectrum, then adds seeded
// non-negative background noise with per-bin standard deviation
// noise * max_k(expected counts), clamped at zero. noise = 0 keeps the pure
// sampled spectrum.
Smi make_compound_spectrum(const ComponentBasis& basis, std::span<const CompoundPart> formula,
                           std::uint64_t events, double noise, std::uint64_t seed);

} // namespace smi
