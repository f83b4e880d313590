#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "smi/baselines.hpp"
#include "smi/eds.hpp"
#include "smi/model.hpp"
#include "smi/vb.hpp"

using namespace smi;

TEST_CASE("identify_elements top-k") {
    const auto labels = ComponentLabels::from_strings({"Pb", "S", "Fe"});
    const auto w = WeightDistribution::simplex(labels, {0.7, 0.2, 0.1});
    const auto top2 = identify_elements(w, 2);
    CHECK(top2 == std::vector<std::string>{"Pb", "S"});
}

TEST_CASE("identify_elements breaks exact ties by label order") {
    const auto labels = ComponentLabels::from_strings({"B", "A", "C"});
    const auto w = WeightDistribution::simplex(labels, {0.5, 0.5, 0.0});
    const auto top1 = identify_elements(w, 1);
    CHECK(top1 == std::vector<std::string>{"A"});
}

TEST_CASE("identify_elements ranks raw values, negatives included") {
    const auto labels = ComponentLabels::from_strings({"w", "x", "y", "z"});
    const auto w = WeightDistribution::unconstrained_values(labels, {-0.2, 0.5, -0.6, 0.1});
    const auto top2 = identify_elements(w, 2);
    CHECK(top2 == std::vector<std::string>{"x", "z"});

    // sorting oracle over random unconstrained vectors
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uu(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> v(6);
        for (double& x : v) x = uu(rng);
        const auto labels6 = ComponentLabels::from_strings({"a", "b", "c", "d", "e", "f"});
        const auto dist = WeightDistribution::unconstrained_values(labels6, v);
        const std::size_t k = 1 + rng() % 6;
        const auto picked = identify_elements(dist, k);

        std::vector<std::pair<double, std::string>> pairs;
        for (std::size_t i = 0; i < 6; ++i)
            pairs.emplace_back(-v[i], labels6.labels[i]);
        std::sort(pairs.begin(), pairs.end());
        std::vector<std::string> expected;
        for (std::size_t j = 0; j < k; ++j) expected.push_back(pairs[j].second);
        std::sort(expected.begin(), expected.end());
        CHECK(picked == expected);
    }
}

TEST_CASE("identify_elements is invariant under increasing transforms") {
    const auto labels = ComponentLabels::from_strings({"a", "b", "c", "d", "e"});
    const std::vector<double> base = {0.05, 0.4, 0.15, 0.3, 0.1};
    const auto w = WeightDistribution::simplex(labels, base);
    const auto reference = identify_elements(w, 3);

    std::vector<double> affine(5), expd(5), cubed(5);
    for (std::size_t i = 0; i < 5; ++i) {
        affine[i] = 2.0 * base[i] + 3.0;
        expd[i] = std::exp(base[i]);
        cubed[i] = base[i] * base[i] * base[i];
    }
    for (const auto& v : {affine, expd, cubed}) {
        const auto t = WeightDistribution::unconstrained_values(labels, v);
        CHECK(identify_elements(t, 3) == reference);
    }
}

TEST_CASE("identify_elements rejects out-of-range k") {
    const auto labels = ComponentLabels::from_strings({"a", "b"});
    const auto w = WeightDistribution::simplex(labels, {0.5, 0.5});
    CHECK_THROWS_AS(identify_elements(w, 0), std::invalid_argument);
    CHECK_THROWS_AS(identify_elements(w, 3), std::invalid_argument);
}

TEST_CASE("score_identifications") {
    std::vector<IdentificationResult> all;
    for (int j = 0; j < 10; ++j)
        all.push_back(IdentificationResult::make({"Pb", "S"}, {"S", "Pb"}));
    CHECK(score_identifications(all).str() == "10/10");

    std::vector<IdentificationResult> none;
    for (int j = 0; j < 10; ++j)
        none.push_back(IdentificationResult::make({"Pb", "S"}, {"Mo", "S"}));
    CHECK(score_identifications(none).str() == "0/10");

    std::vector<IdentificationResult> mixed;
    for (int j = 0; j < 8; ++j)
        mixed.push_back(IdentificationResult::make({"N", "Ti"}, {"Ti", "N"}));
    for (int j = 0; j < 2; ++j)
        mixed.push_back(IdentificationResult::make({"Kr", "Ti"}, {"Ti", "N"}));
    CHECK(score_identifications(mixed).str() == "8/10");

    // permutation invariance
    std::vector<IdentificationResult> shuffled = mixed;
    std::mt19937_64 rng(5);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(score_identifications(shuffled).correct == score_identifications(mixed).correct);

    CHECK_THROWS_AS(score_identifications(std::vector<IdentificationResult>{}),
                    std::invalid_argument);
}

TEST_CASE("make_compound_spectrum single element concentrates on its row") {
    const auto grid = WaveGrid::linear(0.2, 10.0, 256);
    const auto basis = synth_eds_basis(6, grid, 3);
    const CompoundPart formula[] = {{"E02", 1.0}};
    const auto spectrum = make_compound_spectrum(basis, formula, 1000000, 0.0, 9);
    CHECK(spectrum.total() == 1000000.0);
    // 5 sigma per bin: a 3 sigma bound would fire spuriously somewhere
    // across 256 bins about half the time
    const double n = 1e6;
    for (std::size_t k = 0; k < 256; ++k) {
        const double pk = basis.intensity(1, k);
        const double sigma = std::sqrt(n * pk * (1.0 - pk));
        CHECK(std::abs(spectrum.counts[k] - n * pk) <= 5.0 * sigma + 1.0);
    }
}

TEST_CASE("make_compound_spectrum determinism and noise floor") {
    const auto grid = WaveGrid::linear(0.2, 10.0, 128);
    const auto basis = synth_eds_basis(5, grid, 21);
    const CompoundPart formula[] = {{"E01", 1.0}, {"E04", 2.0}};

    const auto a = make_compound_spectrum(basis, formula, 5000, 0.05, 77);
    const auto b = make_compound_spectrum(basis, formula, 5000, 0.05, 77);
    CHECK(a.counts == b.counts);
    CHECK(a.total() >= 5000.0);

    const auto clean = make_compound_spectrum(basis, formula, 5000, 0.0, 77);
    CHECK(clean.total() == 5000.0);
}

TEST_CASE("make_compound_spectrum rejects unknown labels and bad ratios") {
    const auto grid = WaveGrid::linear(0.2, 10.0, 64);
    const auto basis = synth_eds_basis(4, grid, 2);
    const CompoundPart unknown[] = {{"Xx", 1.0}};
    CHECK_THROWS_AS(make_compound_spectrum(basis, unknown, 100, 0.0, 1),
                    std::invalid_argument);
    const CompoundPart bad_ratio[] = {{"E01", -1.0}};
    CHECK_THROWS_AS(make_compound_spectrum(basis, bad_ratio, 100, 0.0, 1),
                    std::invalid_argument);
}

TEST_CASE("VB identifies at least as well as SVD on overlapping spectra") {
    const auto grid = WaveGrid::linear(0.2, 10.0, 512);
    const auto basis = synth_eds_basis(20, grid, 11);
    const std::vector<std::vector<CompoundPart>> compounds = {
        {{"E01", 1.0}, {"E02", 2.0}},
        {{"E03", 1.0}, {"E07", 1.0}},
        {{"E05", 2.0}, {"E11", 3.0}},
        {{"E04", 1.0}, {"E09", 1.0}, {"E14", 2.0}},
        {{"E06", 1.0}, {"E13", 1.0}},
        {{"E08", 1.0}, {"E12", 1.0}, {"E16", 1.0}},
    };

    int vb_correct = 0, svd_correct = 0;
    for (std::uint64_t seed = 0; seed <= 9; ++seed) {
        for (std::size_t c = 0; c < compounds.size(); ++c) {
            const auto& formula = compounds[c];
            std::vector<std::string> truth;
            for (const auto& part : formula) truth.push_back(part.label);
            const auto spectrum = make_compound_spectrum(
                basis, formula, 3000, 0.02, seed * 1000003ull + c);

            const std::vector<double> alpha0(20, 1.0);
            const auto vb_w =
                posterior_mean(run_vb(spectrum, basis, alpha0, 100, 0.0).posterior);
            const auto svd_w = svd_pinv_weights(spectrum, basis);

            if (IdentificationResult::make(identify_elements(vb_w, truth.size()), truth).correct)
                ++vb_correct;
            if (IdentificationResult::make(identify_elements(svd_w, truth.size()), truth).correct)
                ++svd_correct;
        }
    }
    CHECK(vb_correct >= svd_correct);
}
