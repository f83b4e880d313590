#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace smi {

// Discretized wavenumber axis q_k: strictly positive, strictly ascending.
struct WaveGrid {
    std::vector<double> q;

    static WaveGrid linear(double qmin, double qmax, std::size_t bins);
    static WaveGrid from_values(std::vector<double> values);

    std::size_t size() const noexcept { return q.size(); }
    bool operator==(const WaveGrid&) const = default;
};

// Component identities: element names, or sphere radii rendered as decimal
// strings. Unique; ascending and positive when numeric.
struct ComponentLabels {
    std::vector<std::string> labels;

    static ComponentLabels from_strings(std::vector<std::string> names);
    static ComponentLabels from_radii(std::span<const double> radii);

    // Parses every label as a number; throws if any is non-numeric.
    std::vector<double> radii() const;

    std::size_t size() const noexcept { return labels.size(); }
    bool operator==(const ComponentLabels&) const = default;
};

// The known per-component spectra I(q_k, r_i). Row i holds component i over
// all bins k. Entries are non-negative and every row has positive total.
class ComponentBasis {
public:
    ComponentBasis(WaveGrid grid, ComponentLabels components,
                   std::vector<double> intensity_row_major);

    const WaveGrid& grid() const noexcept { return grid_; }
    const ComponentLabels& components() const noexcept { return components_; }
    std::size_t num_components() const noexcept { return components_.size(); }
    std::size_t num_bins() const noexcept { return grid_.size(); }

    double intensity(std::size_t component, std::size_t bin) const {
        return intensity_[component * grid_.size() + bin];
    }
    std::span<const double> row(std::size_t component) const;
    std::span<const double> raw() const noexcept { return intensity_; }

    std::vector<double> row_sums() const;

    // The eta view: every row rescaled to unit sum.
    ComponentBasis row_normalized() const;

private:
    WaveGrid grid_;
    ComponentLabels components_;
    std::vector<double> intensity_;
};

// Binned detection counts over a wave grid. Counts are reals so measured
// (non-count) intensities can be ingested; the simulators emit integers.
struct Smi {
    WaveGrid grid;
    std::vector<double> counts;

    static Smi from_counts(WaveGrid grid, std::vector<double> counts);
    double total() const noexcept;
};

// Weights over components. Simplex-valued unless flagged unconstrained
// (the SVD baseline may return negative entries).
struct WeightDistribution {
    ComponentLabels components;
    std::vector<double> w;
    bool unconstrained = false;

    static WeightDistribution simplex(ComponentLabels components, std::vector<double> w);
    static WeightDistribution unconstrained_values(ComponentLabels components, std::vector<double> w);
};

} // namespace smi
