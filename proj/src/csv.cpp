#include "smi/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

namespace smi {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

// Reads a line, dropping a trailing '\r'; returns false on EOF.
bool next_line(std::istream& is, std::string& line) {
    if (!std::getline(is, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

void expect_header(std::istream& is, const std::string& expected, const char* what) {
    std::string line;
    if (!next_line(is, line) || line != expected)
        throw std::invalid_argument(std::string(what) + ": expected header '" + expected + "'");
}

std::size_t parse_size(const std::string& field, const char* context) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::invalid_argument(std::string(context) + ": bad integer '" + field + "'");
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, end);
}

std::string format_double_shortest(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

double parse_double(const std::string& field, const char* context) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
        throw std::invalid_argument(std::string(context) + ": bad number '" + field + "'");
    return v;
}

void write_basis_csv(std::ostream& os, const ComponentBasis& basis) {
    os << "q";
    for (const auto& label : basis.components().labels)
        os << ',' << label;
    os << '\n';
    const std::size_t L = basis.num_components();
    const std::size_t K = basis.num_bins();
    for (std::size_t k = 0; k < K; ++k) {
        os << format_double(basis.grid().q[k]);
        for (std::size_t i = 0; i < L; ++i)
            os << ',' << format_double(basis.intensity(i, k));
        os << '\n';
    }
}

ComponentBasis read_basis_csv(std::istream& is) {
    std::string line;
    if (!next_line(is, line))
        throw std::invalid_argument("basis csv: empty file");
    auto header = split(line, ',');
    if (header.size() < 2 || header[0] != "q")
        throw std::invalid_argument("basis csv: header must be 'q,<label>,...'");
    const std::size_t L = header.size() - 1;
    std::vector<std::string> labels(header.begin() + 1, header.end());

    std::vector<double> q;
    std::vector<std::vector<double>> columns(L);
    while (next_line(is, line)) {
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != L + 1)
            throw std::invalid_argument("basis csv: row with wrong field count");
        q.push_back(parse_double(fields[0], "basis csv"));
        for (std::size_t i = 0; i < L; ++i)
            columns[i].push_back(parse_double(fields[i + 1], "basis csv"));
    }

    const std::size_t K = q.size();
    std::vector<double> intensity(L * K);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
            intensity[i * K + k] = columns[i][k];
    return ComponentBasis(WaveGrid::from_values(std::move(q)),
                          ComponentLabels::from_strings(std::move(labels)),
                          std::move(intensity));
}

void write_spectrum_csv(std::ostream& os, const Smi& smi) {
    os << "q,count\n";
    for (std::size_t k = 0; k < smi.counts.size(); ++k)
        os << format_double(smi.grid.q[k]) << ',' << format_double(smi.counts[k]) << '\n';
}

Smi read_spectrum_csv(std::istream& is) {
    expect_header(is, "q,count", "spectrum csv");
    std::vector<double> q, counts;
    std::string line;
    while (next_line(is, line)) {
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 2)
            throw std::invalid_argument("spectrum csv: row with wrong field count");
        q.push_back(parse_double(fields[0], "spectrum csv"));
        counts.push_back(parse_double(fields[1], "spectrum csv"));
    }
    return Smi::from_counts(WaveGrid::from_values(std::move(q)), std::move(counts));
}

void write_weights_csv(std::ostream& os, const WeightDistribution& weights) {
    os << "label,weight\n";
    for (std::size_t i = 0; i < weights.w.size(); ++i)
        os << weights.components.labels[i] << ',' << format_double(weights.w[i]) << '\n';
}

WeightDistribution read_weights_csv(std::istream& is) {
    expect_header(is, "label,weight", "weights csv");
    std::vector<std::string> labels;
    std::vector<double> w;
    std::string line;
    while (next_line(is, line)) {
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 2)
            throw std::invalid_argument("weights csv: row with wrong field count");
        labels.push_back(fields[0]);
        w.push_back(parse_double(fields[1], "weights csv"));
    }
    auto components = ComponentLabels::from_strings(std::move(labels));
    double sum = 0.0;
    bool negative = false;
    for (double v : w) {
        sum += v;
        if (v < 0.0) negative = true;
    }
    if (!negative && std::abs(sum - 1.0) <= 1e-9)
        return WeightDistribution::simplex(std::move(components), std::move(w));
    return WeightDistribution::unconstrained_values(std::move(components), std::move(w));
}

std::vector<ManifestEntry> read_manifest_csv(std::istream& is) {
    expect_header(is, "compound,parts,k", "manifest csv");
    std::vector<ManifestEntry> entries;
    std::string line;
    while (next_line(is, line)) {
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 3)
            throw std::invalid_argument("manifest csv: row with wrong field count");
        ManifestEntry entry;
        entry.compound = fields[0];
        if (entry.compound.empty())
            throw std::invalid_argument("manifest csv: empty compound name");
        for (const auto& token : split(fields[1], ';')) {
            auto pair = split(token, ':');
            if (pair.size() != 2 || pair[0].empty())
                throw std::invalid_argument("manifest csv: bad part '" + token + "'");
            entry.parts.push_back({pair[0], parse_double(pair[1], "manifest csv")});
        }
        entry.k = parse_size(fields[2], "manifest csv");
        if (entry.k < 1)
            throw std::invalid_argument("manifest csv: k must be >= 1");
        entries.push_back(std::move(entry));
    }
    return entries;
}

void write_manifest_csv(std::ostream& os, const std::vector<ManifestEntry>& entries) {
    os << "compound,parts,k\n";
    for (const auto& entry : entries) {
        os << entry.compound << ',';
        for (std::size_t j = 0; j < entry.parts.size(); ++j) {
            if (j > 0) os << ';';
            os << entry.parts[j].label << ':' << format_double_shortest(entry.parts[j].ratio);
        }
        os << ',' << entry.k << '\n';
    }
}

namespace {

template <typename T, typename Reader>
T load_file(const std::string& path, Reader reader, const char* what) {
    std::ifstream is(path);
    if (!is)
        throw IoError(std::string(what) + ": cannot open '" + path + "'");
    return reader(is);
}

template <typename Writer>
void save_file(const std::string& path, Writer writer, const char* what) {
    std::ofstream os(path);
    if (!os)
        throw IoError(std::string(what) + ": cannot open '" + path + "' for writing");
    writer(os);
    os.flush();
    if (!os)
        throw IoError(std::string(what) + ": write to '" + path + "' failed");
}

} // namespace

ComponentBasis load_basis(const std::string& path) {
    return load_file<ComponentBasis>(path, [](std::istream& is) { return read_basis_csv(is); },
                                     "load_basis");
}

Smi load_spectrum(const std::string& path) {
    return load_file<Smi>(path, [](std::istream& is) { return read_spectrum_csv(is); },
                          "load_spectrum");
}

WeightDistribution load_weights(const std::string& path) {
    return load_file<WeightDistribution>(
        path, [](std::istream& is) { return read_weights_csv(is); }, "load_weights");
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    return load_file<std::vector<ManifestEntry>>(
        path, [](std::istream& is) { return read_manifest_csv(is); }, "load_manifest");
}

void save_basis(const std::string& path, const ComponentBasis& basis) {
    save_file(path, [&](std::ostream& os) { write_basis_csv(os, basis); }, "save_basis");
}

void save_spectrum(const std::string& path, const Smi& smi) {
    save_file(path, [&](std::ostream& os) { write_spectrum_csv(os, smi); }, "save_spectrum");
}

void save_weights(const std::string& path, const WeightDistribution& weights) {
    save_file(path, [&](std::ostream& os) { write_weights_csv(os, weights); }, "save_weights");
}

} // namespace smi
