#include "smi/types.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace smi {
namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string shortest(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

} // namespace

WaveGrid WaveGrid::linear(double qmin, double qmax, std::size_t bins) {
    require(bins >= 1, "WaveGrid: need at least one bin");
    require(std::isfinite(qmin) && qmin > 0.0, "WaveGrid: qmin must be positive");
    std::vector<double> q(bins);
    if (bins == 1) {
        q[0] = qmin;
    } else {
        require(std::isfinite(qmax) && qmax > qmin, "WaveGrid: qmax must exceed qmin");
        const double step = (qmax - qmin) / static_cast<double>(bins - 1);
        for (std::size_t k = 0; k < bins; ++k)
            q[k] = qmin + step * static_cast<double>(k);
        q.back() = qmax;
    }
    return from_values(std::move(q));
}

WaveGrid WaveGrid::from_values(std::vector<double> values) {
    require(!values.empty(), "WaveGrid: empty grid");
    for (std::size_t k = 0; k < values.size(); ++k) {
        require(std::isfinite(values[k]) && values[k] > 0.0,
                "WaveGrid: wavenumbers must be positive and finite");
        if (k > 0)
            require(values[k] > values[k - 1], "WaveGrid: wavenumbers must be strictly ascending");
    }
    WaveGrid g;
    g.q = std::move(values);
    return g;
}

ComponentLabels ComponentLabels::from_strings(std::vector<std::string> names) {
    require(!names.empty(), "ComponentLabels: empty label set");
    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
        require(!name.empty(), "ComponentLabels: empty label");
        require(seen.insert(name).second, "ComponentLabels: duplicate label");
    }
    ComponentLabels c;
    c.labels = std::move(names);
    return c;
}

ComponentLabels ComponentLabels::from_radii(std::span<const double> radii) {
    require(!radii.empty(), "ComponentLabels: empty radius set");
    std::vector<std::string> names;
    names.reserve(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        require(std::isfinite(radii[i]) && radii[i] > 0.0,
                "ComponentLabels: radii must be positive and finite");
        if (i > 0)
            require(radii[i] > radii[i - 1], "ComponentLabels: radii must be strictly ascending");
        names.push_back(shortest(radii[i]));
    }
    return from_strings(std::move(names));
}

std::vector<double> ComponentLabels::radii() const {
    std::vector<double> out;
    out.reserve(labels.size());
    for (const auto& label : labels) {
        double v = 0.0;
        const char* first = label.data();
        const char* last = first + label.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw std::invalid_argument("ComponentLabels: label '" + label + "' is not numeric");
        out.push_back(v);
    }
    return out;
}

ComponentBasis::ComponentBasis(WaveGrid grid, ComponentLabels components,
                               std::vector<double> intensity_row_major)
    : grid_(std::move(grid)),
      components_(std::move(components)),
      intensity_(std::move(intensity_row_major)) {
    const std::size_t L = components_.size();
    const std::size_t K = grid_.size();
    require(intensity_.size() == L * K, "ComponentBasis: intensity size mismatch");
    for (std::size_t i = 0; i < L; ++i) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double v = intensity_[i * K + k];
            require(std::isfinite(v) && v >= 0.0,
                    "ComponentBasis: intensities must be finite and >= 0");
            row_sum += v;
        }
        require(row_sum > 0.0, "ComponentBasis: component row with no positive intensity");
    }
}

std::span<const double> ComponentBasis::row(std::size_t component) const {
    const std::size_t K = grid_.size();
    return {intensity_.data() + component * K, K};
}

std::vector<double> ComponentBasis::row_sums() const {
    const std::size_t L = num_components();
    const std::size_t K = num_bins();
    std::vector<double> sums(L, 0.0);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
            sums[i] += intensity_[i * K + k];
    return sums;
}

ComponentBasis ComponentBasis::row_normalized() const {
    const std::size_t L = num_components();
    const std::size_t K = num_bins();
    const auto sums = row_sums();
    std::vector<double> eta(intensity_.size());
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
            eta[i * K + k] = intensity_[i * K + k] / sums[i];
    return ComponentBasis(grid_, components_, std::move(eta));
}

Smi Smi::from_counts(WaveGrid grid, std::vector<double> counts) {
    require(counts.size() == grid.size(), "Smi: counts length does not match grid");
    for (double c : counts)
        require(std::isfinite(c) && c >= 0.0, "Smi: counts must be finite and >= 0");
    Smi s;
    s.grid = std::move(grid);
    s.counts = std::move(counts);
    return s;
}

double Smi::total() const noexcept {
    double n = 0.0;
    for (double c : counts) n += c;
    return n;
}

WeightDistribution WeightDistribution::simplex(ComponentLabels components, std::vector<double> w) {
    require(w.size() == components.size(), "WeightDistribution: length mismatch");
    double sum = 0.0;
    for (double v : w) {
        require(std::isfinite(v) && v >= 0.0, "WeightDistribution: simplex weights must be >= 0");
        sum += v;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "WeightDistribution: weights must sum to one");
    WeightDistribution d;
    d.components = std::move(components);
    d.w = std::move(w);
    d.unconstrained = false;
    return d;
}

WeightDistribution WeightDistribution::unconstrained_values(ComponentLabels components,
                                                            std::vector<double> w) {
    require(w.size() == components.size(), "WeightDistribution: length mismatch");
    for (double v : w)
        require(std::isfinite(v), "WeightDistribution: weights must be finite");
    WeightDistribution d;
    d.components = std::move(components);
    d.w = std::move(w);
    d.unconstrained = true;
    return d;
}

} // namespace smi
