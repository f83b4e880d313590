#pragma once

#include <cstdint>
#include <span>

#include "smi/types.hpp"

namespace smi {

// Scattering intensity of a sphere of radius r at wavenumber q:
//   (1/r^3) (sin(qr)/q^3 - r cos(qr)/q^2)^2  ==  r^3 (sin x - x cos x)^2 / x^6,  x = qr.
// Evaluated through the factorized form; a series branch handles small x.
double sphere_intensity(double q, double r);

// intensity[i][k] = sphere_intensity(q_k, r_i) for every radius label.
ComponentBasis build_sas_basis(const WaveGrid& grid, const ComponentLabels& radii);

// Detection probability per bin: p_k proportional to sum_i w_i I(q_k, r_i),
// normalized to a simplex over k.
std::vector<double> superpose(const ComponentBasis& basis, const WeightDistribution& weights);

struct GammaPart {
    double mix;
    double shape;
    double scale;
};

// w_i proportional to a gamma mixture density evaluated at the radii grid.
WeightDistribution gamma_mixture_weights(const ComponentLabels& radii,
                                         std::span<const GammaPart> parts);

// `events` independent categorical draws over bins; deterministic per seed,
// conserves the total count exactly.
Smi sample_events(const WaveGrid& grid, std::span<const double> p,
                  std::uint64_t events, std::uint64_t seed);

// Synthetic element spectra: 1-4 Gaussian peaks drawn from a shared pool of
// line positions plus a low smooth background, rows normalized to unit sum.
ComponentBasis synth_eds_basis(std::size_t n_elements, const WaveGrid& grid,
                               std::uint64_t seed);

enum class SasPreset { plateau, two_peak, three_peak };

std::span<const GammaPart> sas_preset_parts(SasPreset preset);
const char* sas_preset_name(SasPreset preset);

// Default experiment grids: 200 wavenumbers on [0.1, 5] nm^-1 and radii in
// 0.2 nm steps on (0, 60] nm.
WaveGrid sas_default_grid();
ComponentLabels sas_default_radii();

// Arithmetic radius sequence r_j = rmin + j*step, snapped to 12 significant
// digits so the generated labels stay short.
ComponentLabels radii_arithmetic(double rmin, double step, std::size_t count);

} // namespace smi
