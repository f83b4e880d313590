#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "smi/metrics.hpp"

TEST_CASE("distances vanish on equal vectors") {
    const std::vector<double> v = {0.25, 0.5, 0.25};
    CHECK(smi::l1_distance(v, v) == 0.0);
    CHECK(smi::l2_distance(v, v) == 0.0);
}

TEST_CASE("uniform versus one-hot has the closed-form L1") {
    for (std::size_t L : {2u, 5u, 17u}) {
        std::vector<double> uniform(L, 1.0 / static_cast<double>(L));
        std::vector<double> one_hot(L, 0.0);
        one_hot[0] = 1.0;
        const double expected = 2.0 * static_cast<double>(L - 1) / static_cast<double>(L);
        CHECK(std::abs(smi::l1_distance(uniform, one_hot) - expected) <= 1e-12);
    }
}

TEST_CASE("total variation") {
    const std::vector<double> flat = {0.2, 0.2, 0.2, 0.2, 0.2};
    CHECK(smi::total_variation(flat) == 0.0);
    const std::vector<double> zigzag = {0.0, 1.0, 0.0, 1.0};
    CHECK(smi::total_variation(zigzag) == 3.0);
    const std::vector<double> single = {1.0};
    CHECK(smi::total_variation(single) == 0.0);
}

TEST_CASE("distance length mismatch throws") {
    const std::vector<double> a = {1.0, 0.0};
    const std::vector<double> b = {1.0};
    CHECK_THROWS_AS(smi::l1_distance(a, b), std::invalid_argument);
    CHECK_THROWS_AS(smi::l2_distance(a, b), std::invalid_argument);
}
