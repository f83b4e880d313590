#include "smi/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

#include "smi/numerics.hpp"

namespace smi {
namespace {

// Uniform double in [0, 1) from the top 53 bits; fixed mapping so sampled
// spectra are identical across platforms.
double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double snap12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

constexpr GammaPart kPlateauParts[] = {{0.75, 101.0, 0.2}, {0.25, 9.0, 2.5}};
constexpr GammaPart kTwoPeakParts[] = {{0.5, 101.0, 0.18}, {0.5, 121.0, 0.22}};
constexpr GammaPart kThreePeakParts[] = {{0.40, 145.0, 0.09}, {0.35, 101.0, 0.20}, {0.25, 81.0, 0.35}};

} // namespace

double sphere_intensity(double q, double r) {
    if (!std::isfinite(q) || q <= 0.0 || !std::isfinite(r) || r <= 0.0)
        throw std::domain_error("sphere_intensity: q and r must be positive");
    const double x = q * r;
    double h;  // (sin x - x cos x) / x^3
    if (x < 0.5) {
        // series branch: the direct form cancels catastrophically near zero
        const double x2 = x * x;
        h = 1.0 / 3.0 -
            x2 * (1.0 / 30.0 -
            x2 * (1.0 / 840.0 -
            x2 * (1.0 / 45360.0 -
            x2 * (1.0 / 3991680.0 -
            x2 * (1.0 / 518918400.0)))));
    } else {
        h = (std::sin(x) - x * std::cos(x)) / (x * x * x);
    }
    return r * r * r * h * h;
}

ComponentBasis build_sas_basis(const WaveGrid& grid, const ComponentLabels& radii) {
    const auto r = radii.radii();
    const std::size_t L = r.size();
    const std::size_t K = grid.size();
    std::vector<double> intensity(L * K);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
            intensity[i * K + k] = sphere_intensity(grid.q[k], r[i]);
    return ComponentBasis(grid, radii, std::move(intensity));
}

std::vector<double> superpose(const ComponentBasis& basis, const WeightDistribution& weights) {
    if (weights.components != basis.components())
        throw std::invalid_argument("superpose: component sets differ");
    if (weights.unconstrained)
        throw std::invalid_argument("superpose: weights must be simplex-valued");
    const std::size_t L = basis.num_components();
    const std::size_t K = basis.num_bins();
    std::vector<double> p(K, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
        const double wi = weights.w[i];
        if (wi == 0.0) continue;
        const auto row = basis.row(i);
        for (std::size_t k = 0; k < K; ++k)
            p[k] += wi * row[k];
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (!(total > 0.0))
        throw std::invalid_argument("superpose: superposed intensity is identically zero");
    for (double& v : p) v /= total;
    return p;
}

WeightDistribution gamma_mixture_weights(const ComponentLabels& radii,
                                         std::span<const GammaPart> parts) {
    if (parts.empty())
        throw std::invalid_argument("gamma_mixture_weights: need at least one part");
    double mix_sum = 0.0;
    for (const auto& part : parts) {
        if (!std::isfinite(part.mix) || part.mix < 0.0)
            throw std::invalid_argument("gamma_mixture_weights: mix must be >= 0");
        mix_sum += part.mix;
    }
    if (!(mix_sum > 0.0))
        throw std::invalid_argument("gamma_mixture_weights: mixes sum to zero");

    const auto r = radii.radii();
    std::vector<double> w(r.size(), 0.0);
    for (const auto& part : parts) {
        if (part.mix == 0.0) continue;
        for (std::size_t i = 0; i < r.size(); ++i)
            w[i] += part.mix * gamma_pdf(r[i], part.shape, part.scale);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0))
        throw std::invalid_argument("gamma_mixture_weights: density vanishes on the whole grid");
    for (double& v : w) v /= total;
    return WeightDistribution::simplex(radii, std::move(w));
}

Smi sample_events(const WaveGrid& grid, std::span<const double> p,
                  std::uint64_t events, std::uint64_t seed) {
    const std::size_t K = grid.size();
    if (p.size() != K)
        throw std::invalid_argument("sample_events: probability length does not match grid");
    if (events == 0)
        throw std::invalid_argument("sample_events: events must be positive");

    double sum = 0.0;
    std::size_t last_positive = K;
    for (std::size_t k = 0; k < K; ++k) {
        if (!std::isfinite(p[k]) || p[k] < 0.0)
            throw std::invalid_argument("sample_events: probabilities must be finite and >= 0");
        sum += p[k];
        if (p[k] > 0.0) last_positive = k;
    }
    if (std::abs(sum - 1.0) > 1e-9 || last_positive == K)
        throw std::invalid_argument("sample_events: probabilities must sum to one");

    std::vector<double> cum(K);
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        acc += p[k];
        cum[k] = acc;
    }

    std::mt19937_64 rng(seed);
    std::vector<double> counts(K, 0.0);
    for (std::uint64_t e = 0; e < events; ++e) {
        const double u = unit(rng) * acc;
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        std::size_t idx = (it == cum.end()) ? last_positive
                                            : static_cast<std::size_t>(it - cum.begin());
        counts[idx] += 1.0;
    }
    return Smi::from_counts(grid, std::move(counts));
}

ComponentBasis synth_eds_basis(std::size_t n_elements, const WaveGrid& grid,
                               std::uint64_t seed) {
    if (n_elements < 2)
        throw std::invalid_argument("synth_eds_basis: need at least two elements");
    const std::size_t K = grid.size();
    const double lo = grid.q.front();
    const double hi = grid.q.back();
    const double span = (K > 1) ? hi - lo : std::max(lo, 1.0);

    std::mt19937_64 rng(seed);

    // Shared pool of line positions; elements picking common lines is what
    // makes the spectra overlap the way real element families do.
    const std::size_t pool = std::max<std::size_t>(4, (2 * n_elements) / 3);
    std::vector<double> line(pool);
    for (double& c : line)
        c = lo + (0.04 + 0.92 * unit(rng)) * span;

    std::vector<double> intensity(n_elements * K, 0.0);
    std::vector<std::string> names(n_elements);
    std::vector<double> bg(K);

    for (std::size_t e = 0; e < n_elements; ++e) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "E%02zu", e + 1);
        names[e] = buf;

        double* row = intensity.data() + e * K;
        const std::size_t npeaks = 1 + static_cast<std::size_t>(rng() % 4);
        std::vector<std::size_t> picks;
        while (picks.size() < npeaks) {
            const std::size_t c = static_cast<std::size_t>(rng() % pool);
            if (std::find(picks.begin(), picks.end(), c) == picks.end())
                picks.push_back(c);
        }
        for (std::size_t j = 0; j < npeaks; ++j) {
            const double height = (j == 0) ? 1.0 : 0.15 + 0.85 * unit(rng);
            const double width = (0.004 + 0.010 * unit(rng)) * span;
            const double center = line[picks[j]];
            for (std::size_t k = 0; k < K; ++k) {
                const double t = (grid.q[k] - center) / width;
                row[k] += height * std::exp(-0.5 * t * t);
            }
        }

        // smooth decaying background at a few percent of the line mass
        const double decay = 1.0 + 3.0 * unit(rng);
        double peak_mass = 0.0;
        double bg_mass = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            peak_mass += row[k];
            bg[k] = std::exp(-decay * (grid.q[k] - lo) / span);
            bg_mass += bg[k];
        }
        const double bg_scale = 0.03 * peak_mass / bg_mass;
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            row[k] += bg_scale * bg[k];
            total += row[k];
        }
        for (std::size_t k = 0; k < K; ++k)
            row[k] /= total;
    }

    return ComponentBasis(grid, ComponentLabels::from_strings(std::move(names)),
                          std::move(intensity));
}

std::span<const GammaPart> sas_preset_parts(SasPreset preset) {
    switch (preset) {
        case SasPreset::plateau: return kPlateauParts;
        case SasPreset::two_peak: return kTwoPeakParts;
        case SasPreset::three_peak: return kThreePeakParts;
    }
    throw std::invalid_argument("sas_preset_parts: unknown preset");
}

const char* sas_preset_name(SasPreset preset) {
    switch (preset) {
        case SasPreset::plateau: return "plateau";
        case SasPreset::two_peak: return "two-peak";
        case SasPreset::three_peak: return "three-peak";
    }
    throw std::invalid_argument("sas_preset_name: unknown preset");
}

WaveGrid sas_default_grid() {
    return WaveGrid::linear(0.1, 5.0, 200);
}

ComponentLabels sas_default_radii() {
    return radii_arithmetic(0.2, 0.2, 300);
}

ComponentLabels radii_arithmetic(double rmin, double step, std::size_t count) {
    if (!std::isfinite(rmin) || rmin <= 0.0 || !std::isfinite(step) || step <= 0.0)
        throw std::invalid_argument("radii_arithmetic: rmin and step must be positive");
    std::vector<double> r(count);
    for (std::size_t j = 0; j < count; ++j)
        r[j] = snap12(rmin + step * static_cast<double>(j));
    return ComponentLabels::from_radii(r);
}

} // namespace smi
