#include <doctest.h>

#include <cmath>

#include "sedsim/sediment_law.hpp"

using sedsim::SedimentLaw;

TEST_CASE("grass flux factor") {
    auto law = SedimentLaw::grass(0.001, 3.0, 0.4, 9.81);
    CHECK(law.qb_tilde(2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(law.qb_tilde(0.0) == 0.0);
    // xi = 1/(1-0.4), eps = xi * A_g
    CHECK(law.xi() == doctest::Approx(1.0 / 0.6).epsilon(1e-15));
    CHECK(law.eps() == doctest::Approx(0.001 / 0.6).epsilon(1e-15));
}

TEST_CASE("mpm flux factor and threshold") {
    auto law = SedimentLaw::mpm_by_ucr(1.0, 0.001 / 0.6, 0.4, 9.81);
    CHECK(law.qb_tilde(0.5) == 0.0);
    CHECK(law.qb_tilde(1.0) == 0.0);
    CHECK(law.qb_tilde(0.0) == 0.0);
    // (1.25^2 - 1)^{3/2} / 1.25 = 0.5625^{1.5} / 1.25 = 0.421875/1.25 = 0.3375
    CHECK(law.qb_tilde(1.25) == doctest::Approx(0.3375).epsilon(1e-14));
    // continuity at the threshold
    CHECK(law.qb_tilde(1.0 + 1e-10) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lambda_b_tilde closed forms") {
    auto g3 = SedimentLaw::grass(0.001, 3.0, 0.4, 9.81);
    CHECK(g3.lambda_b_tilde(2.0) == doctest::Approx(12.0).epsilon(1e-14));
    auto g1 = SedimentLaw::grass(0.5, 1.0, 0.0, 9.81);
    CHECK(g1.lambda_b_tilde(0.3) == 1.0);
    CHECK(g1.lambda_b_tilde(7.7) == 1.0);
    auto mpm = SedimentLaw::mpm_by_ucr(1.0, 0.001, 0.4, 9.81);
    CHECK(mpm.lambda_b_tilde(0.75) == 0.0);
    CHECK(mpm.lambda_b_tilde(1.0) == 0.0);  // right-hand derivative at threshold
}

TEST_CASE("critical velocity closed form") {
    auto law = SedimentLaw::meyer_peter_muller(2.65, 0.001, 0.1, 0.047, 0.4, 9.81);
    double expect = std::sqrt(8.0 * 1.65 * 9.81 * 0.001 * 0.047 / 0.1);
    CHECK(law.critical_velocity() == doctest::Approx(expect).epsilon(1e-14));
    CHECK(law.critical_velocity() == doctest::Approx(0.2467).epsilon(1e-3));

    auto zero = SedimentLaw::meyer_peter_muller(2.65, 0.001, 0.1, 0.0, 0.4, 9.81);
    CHECK(zero.critical_velocity() == 0.0);

    auto grass = SedimentLaw::grass(0.001, 3.0, 0.4, 9.81);
    CHECK(grass.critical_velocity() == 0.0);
}

TEST_CASE("lambda_b_tilde matches finite difference of s*qb_tilde") {
    // lambda_b = d/ds [ s qb(s) ]
    auto check_fd = [](const SedimentLaw& law, double s) {
        double d = 1e-6 * (s + 1.0);
        double fd = ((s + d) * law.qb_tilde(s + d) - (s - d) * law.qb_tilde(s - d)) / (2.0 * d);
        CHECK(law.lambda_b_tilde(s) == doctest::Approx(fd).epsilon(1e-6));
    };
    auto g = SedimentLaw::grass(0.001, 3.0, 0.4, 9.81);
    for (double s : {0.3, 1.0, 2.5, 4.0}) check_fd(g, s);
    auto g2 = SedimentLaw::grass(0.01, 2.0, 0.2, 9.81);
    for (double s : {0.3, 1.0, 2.5}) check_fd(g2, s);
    auto mpm = SedimentLaw::mpm_by_ucr(1.0, 0.001, 0.4, 9.81);
    for (double s : {0.4, 1.3, 2.0, 3.0}) check_fd(mpm, s);  // away from threshold
}

TEST_CASE("mpm eps closed form") {
    double srho = 2.65, f = 0.1, g = 9.81, gamma = 0.4;
    auto law = SedimentLaw::meyer_peter_muller(srho, 0.001, f, 0.047, gamma, g);
    double expect = (1.0 / (1.0 - gamma)) / ((srho - 1.0) * g) * std::sqrt(f * f * f / 8.0);
    CHECK(law.eps() == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("construction validation") {
    CHECK_THROWS(SedimentLaw::grass(0.001, 0.5, 0.4, 9.81));   // m < 1
    CHECK_THROWS(SedimentLaw::grass(0.001, 4.5, 0.4, 9.81));   // m > 4
    CHECK_THROWS(SedimentLaw::grass(1.5, 3.0, 0.4, 9.81));     // A_g > 1
    CHECK_THROWS(SedimentLaw::grass(0.001, 3.0, 1.0, 9.81));   // gamma = 1
    CHECK_THROWS(SedimentLaw::meyer_peter_muller(0.9, 0.001, 0.1, 0.047, 0.4, 9.81));  // s <= 1
    CHECK_THROWS(SedimentLaw::meyer_peter_muller(2.65, 0.001, 0.0, 0.047, 0.4, 9.81)); // f <= 0
}

TEST_CASE("nondimensionalization") {
    // grass: eps -> eps U^(m-1)/H, gravity -> g H/U^2
    auto law = SedimentLaw::grass(0.001, 3.0, 0.4, 9.81);
    auto nd = law.nondimensionalized(1.0, 10.0);
    CHECK(nd.eps() == doctest::Approx(law.eps() / 10.0).epsilon(1e-15));
    CHECK(nd.gravity() == doctest::Approx(98.1).epsilon(1e-15));
    // values of u qb(u) scale as U^m / H against the dimensional law
    double U = 2.0, H = 10.0;
    auto nd2 = law.nondimensionalized(U, H);
    double us = 0.7;
    double dim = law.eps() * (U * us) * law.qb_tilde(U * us);
    double scaled = nd2.eps() * us * nd2.qb_tilde(us) * U * H;
    CHECK(dim == doctest::Approx(scaled).epsilon(1e-13));

    auto mpm = SedimentLaw::mpm_by_ucr(1.0, 0.001 / 0.6, 0.4, 9.81);
    auto mnd = mpm.nondimensionalized(U, H);
    CHECK(mnd.critical_velocity() == doctest::Approx(0.5).epsilon(1e-15));
    double dimm = mpm.eps() * (U * 0.9) * mpm.qb_tilde(U * 0.9);
    double scaledm = mnd.eps() * 0.9 * mnd.qb_tilde(0.9) * U * H;
    CHECK(dimm == doctest::Approx(scaledm).epsilon(1e-13));
}
