#include "vfclassify/prng.hpp"

#include <cmath>

#include "doctest.h"

using vfc::SplitMix64;

TEST_CASE("splitmix64 reference sequence, seed 0") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xe220a8397b1dcdafull);
    CHECK(rng.next() == 0x6e789e6aa1b965f4ull);
    CHECK(rng.next() == 0x06c45d188009454full);
    CHECK(rng.next() == 0xf88bb8a8724c81ecull);
}

TEST_CASE("splitmix64 reference sequence, seed 42") {
    SplitMix64 rng(42);
    CHECK(rng.next() == 0xbdd732262feb6e95ull);
    CHECK(rng.next() == 0x28efe333b266f103ull);
}

TEST_CASE("unit draws use the top 53 bits") {
    SplitMix64 rng(42);
    CHECK(rng.next_unit() == doctest::Approx(0.7415648787718233).epsilon(1e-15));
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("gaussian draws consume exactly two uniforms") {
    SplitMix64 a(7), b(7);
    a.next_gaussian();
    b.next();
    b.next();
    CHECK(a.next() == b.next());
}

TEST_CASE("gaussian moments are sane") {
    SplitMix64 rng(123);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_gaussian();
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("distinct seeds give distinct streams") {
    SplitMix64 a(1), b(2);
    int differing = 0;
    for (int i = 0; i < 10; ++i)
        if (a.next() != b.next()) ++differing;
    CHECK(differing == 10);
}
