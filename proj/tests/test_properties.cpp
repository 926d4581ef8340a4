#include <doctest.h>

#include <random>

#include "support/property_suites.hpp"

TEST_CASE("Sherman-Morrison inverse formula") {
    std::mt19937_64 rng(101);
    CHECK(testgen::sherman_morrison_inverse(rng, 200) <= 1e-8);
}

TEST_CASE("Sherman-Morrison pseudoinverse formula") {
    std::mt19937_64 rng(102);
    CHECK(testgen::sherman_morrison_pseudoinverse(rng, 200) <= 1e-8);
}

TEST_CASE("projection majorization") {
    std::mt19937_64 rng(103);
    CHECK(testgen::majorization(rng, 200) <= 1e-9);
}

TEST_CASE("upper potential is monotone under projection") {
    std::mt19937_64 rng(104);
    CHECK(testgen::karamata(rng, 200) <= 1e-9);
}

TEST_CASE("von Neumann partial trace bound") {
    std::mt19937_64 rng(105);
    CHECK(testgen::von_neumann(rng, 200) <= 1e-9);
}
