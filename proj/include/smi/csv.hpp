#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "smi/eds.hpp"
#include "smi/types.hpp"

namespace smi {

// Open/stream failures. Malformed content raises std::invalid_argument.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits; round-trips any double exactly.
std::string format_double(double v);
// Shortest form that round-trips; used for labels.
std::string format_double_shortest(double v);
double parse_double(const std::string& field, const char* context);

// Basis CSV: header "q,<label>,..."; one row per bin, q value first then the
// per-component intensities.
void write_basis_csv(std::ostream& os, const ComponentBasis& basis);
ComponentBasis read_basis_csv(std::istream& is);

// Spectrum CSV: "q,count".
void write_spectrum_csv(std::ostream& os, const Smi& smi);
Smi read_spectrum_csv(std::istream& is);

// Weights CSV: "label,weight". A read yields an unconstrained distribution
// when entries are negative or do not sum to one.
void write_weights_csv(std::ostream& os, const WeightDistribution& weights);
WeightDistribution read_weights_csv(std::istream& is);

// Compound manifest CSV: "compound,parts,k" with parts "label:ratio;...".
struct ManifestEntry {
    std::string compound;
    std::vector<CompoundPart> parts;
    std::size_t k = 0;
};
std::vector<ManifestEntry> read_manifest_csv(std::istream& is);
void write_manifest_csv(std::ostream& os, const std::vector<ManifestEntry>& entries);

ComponentBasis load_basis(const std::string& path);
Smi load_spectrum(const std::string& path);
WeightDistribution load_weights(const std::string& path);
std::vector<ManifestEntry> load_manifest(const std::string& path);
void save_basis(const std::string& path, const ComponentBasis& basis);
void save_spectrum(const std::string& path, const Smi& smi);
void save_weights(const std::string& path, const WeightDistribution& weights);

} // namespace smi
