#include <cmath>
#include <vector>

#include <doctest.h>

#include "storm/rng.hpp"

using storm::RngStream;

TEST_CASE("same seed yields identical streams") {
    RngStream a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c(7), d(7);
    for (int i = 0; i < 100; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("different seeds diverge") {
    RngStream a(7), b(8);
    bool differs = false;
    for (int i = 0; i < 100; ++i)
        if (a.next_u64() != b.next_u64()) differs = true;
    CHECK(differs);
}

TEST_CASE("uniform01 stays in [0,1)") {
    RngStream rng(123);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal draws match the standard moments") {
    RngStream rng(2024);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::fabs(mean) < 0.02);
    CHECK(std::fabs(sd - 1.0) < 0.02);
}

TEST_CASE("derived seeds separate by label and index") {
    const auto a = storm::derive_seed(42, "sim.train");
    const auto b = storm::derive_seed(42, "sim.holdout");
    const auto c = storm::derive_seed(43, "sim.train");
    CHECK(a != b);
    CHECK(a != c);
    CHECK(storm::derive_seed(42, "x", 0) != storm::derive_seed(42, "x", 1));
    CHECK(storm::derive_seed(42, "sim.train") == a);
}

TEST_CASE("exponential inter-arrivals have the right mean") {
    RngStream rng(5);
    const int n = 50000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.exponential(4.0);
    CHECK(sum / n == doctest::Approx(0.25).epsilon(0.03));
}
