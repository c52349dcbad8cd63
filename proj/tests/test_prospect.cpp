#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ecoupons/prospect.hpp"

using namespace ecoupons;

TEST_CASE("utility anchor values") {
    ProspectParams p;  // gamma 0.88, loss aversion 2.25
    CHECK(prospect_utility(0.0, p) == 0.0);
    CHECK(prospect_utility(1.0, p) == 1.0);
    CHECK(prospect_utility(-1.0, p) == -2.25);
    CHECK(prospect_utility(2.0, p) == doctest::Approx(1.8403753012497502).epsilon(1e-15));
    CHECK(prospect_utility(2.0, p) == std::pow(2.0, 0.88));
    CHECK_THROWS_AS(prospect_utility(std::nan(""), p), std::invalid_argument);
    CHECK_THROWS_AS(prospect_utility(1.0 / 0.0, p), std::invalid_argument);
}

TEST_CASE("utility shape: monotone, concave gains, convex losses, loss-steep") {
    ProspectParams p;
    double prev = prospect_utility(-50.0, p);
    for (double x = -50.0 + 0.37; x <= 50.0; x += 0.37) {
        double u = prospect_utility(x, p);
        CHECK(u > prev);
        prev = u;
    }
    for (double a = 0.0; a < 20.0; a += 0.7) {
        double b = a + 3.0;
        double mid = prospect_utility((a + b) / 2, p);
        CHECK(prospect_utility(a, p) + prospect_utility(b, p) <= 2 * mid + 1e-12);
        // mirrored triple on the loss side is convex
        double midn = prospect_utility(-(a + b) / 2, p);
        CHECK(prospect_utility(-a, p) + prospect_utility(-b, p) >= 2 * midn - 1e-12);
    }
    for (double x = 0.1; x < 40.0; x += 0.9)
        CHECK(std::abs(prospect_utility(-x, p)) > prospect_utility(x, p));
}

TEST_CASE("weighting anchors and boundary convention") {
    ProspectParams p;
    CHECK(prospect_weight(0.0, p) == 0.0);
    CHECK(prospect_weight(1.0, p) == 1.0);
    double inv_e = std::exp(-1.0);
    for (double xi : {0.37, 0.7, 1.0}) {
        ProspectParams q = p;
        q.xi = xi;
        CHECK(prospect_weight(inv_e, q) == doctest::Approx(inv_e).epsilon(1e-14));
    }
    ProspectParams eut = p;
    eut.xi = 1.0;
    for (double v : {0.01, 0.2, 0.5, 0.9, 0.999})
        CHECK(prospect_weight(v, eut) == doctest::Approx(v).epsilon(1e-14));
    CHECK_THROWS_AS(prospect_weight(-0.1, p), std::invalid_argument);
    CHECK_THROWS_AS(prospect_weight(1.1, p), std::invalid_argument);
}

TEST_CASE("weighting is monotone and inverse-S around 1/e") {
    ProspectParams p;  // xi = 0.37 < 1
    double prev = 0.0;
    for (double v = 0.001; v < 1.0; v += 0.001) {
        double w = prospect_weight(v, p);
        CHECK(w >= prev);
        prev = w;
    }
    double inv_e = std::exp(-1.0);
    for (double v : {0.001, 0.05, 0.2, inv_e - 0.01})
        CHECK(prospect_weight(v, p) > v);
    for (double v : {inv_e + 0.01, 0.5, 0.8, 0.99})
        CHECK(prospect_weight(v, p) < v);
}

TEST_CASE("parameter validation") {
    ProspectParams p;
    p.gamma = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ProspectParams{};
    p.loss_aversion = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ProspectParams{};
    p.xi = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ProspectParams{};
    p.xi = 1.0;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("preferences are injectable") {
    Preferences prefs;
    prefs.utility = [](double) { return 0.0; };
    prefs.weight = [](double q) { return q; };
    CHECK(prefs.utility(123.0) == 0.0);
    CHECK(prefs.weight(0.3) == 0.3);
}
