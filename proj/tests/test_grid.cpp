#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ecoupons/grid.hpp"

using namespace ecoupons;

TEST_CASE("lattice step is the common decimal divisor") {
    CHECK(lattice_step(14.7, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(lattice_step(4.9, 0.1) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(lattice_step(93.1, 1.9) == doctest::Approx(1.9).epsilon(1e-12));
    CHECK(lattice_step(3.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(lattice_step(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("grid aligns bounds outward and contains zero") {
    SurplusGrid g(0.3, -60.0, 160.0);
    CHECK(g.x_min() == doctest::Approx(-60.0));
    CHECK(g.x_max() >= 160.0);
    CHECK(g.x(g.index_of_zero()) == 0.0);
    CHECK(g.size() == 735);
    CHECK(g.x(0) == doctest::Approx(-60.0));
    CHECK_THROWS_AS(SurplusGrid(0.3, 1.0, 160.0), std::invalid_argument);
    CHECK_THROWS_AS(SurplusGrid(-0.3, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("offsets reject off-lattice quantities") {
    SurplusGrid g(0.3, -6.0, 6.0);
    CHECK(g.offset_of(14.7) == 49);
    CHECK(g.offset_of(-0.3) == -1);
    CHECK_THROWS_AS(g.offset_of(0.5), std::invalid_argument);
    CHECK(g.index_of(0.0) == 20);
    CHECK_THROWS_AS(g.index_of(0.5), std::invalid_argument);
    CHECK_THROWS_AS(g.index_of(9.0), std::out_of_range);
}

TEST_CASE("clamped shifts saturate at the boundary states") {
    SurplusGrid g(1.0, -3.0, 3.0);  // states -3..3
    CHECK(g.clamp_shift(0, -5) == 0);
    CHECK(g.clamp_shift(6, 2) == 6);
    CHECK(g.clamp_shift(3, 2) == 5);
    CHECK(g.clamp_shift(3, -3) == 0);
}
