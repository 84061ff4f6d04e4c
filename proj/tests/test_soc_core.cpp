#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace socvc;
using testutil::ev;
using testutil::sv;

TEST_CASE("spectral decomposition on literal points") {
    const SpectralDecomp s = spectral_decompose(sv({-1, 2, 0}));
    CHECK(s.lambda1 == doctest::Approx(-3.0));
    CHECK(s.lambda2 == doctest::Approx(1.0));
    CHECK(testutil::close(s.u1, sv({0.5, -0.5, 0}), 1e-15));
    CHECK(testutil::close(s.u2, sv({0.5, 0.5, 0}), 1e-15));

    const SpectralDecomp at_zero = spectral_decompose(sv({0, 0, 0}));
    CHECK(at_zero.lambda1 == 0.0);
    CHECK(at_zero.lambda2 == 0.0);
    CHECK(testutil::close(at_zero.u1, sv({0.5, -0.5, 0}), 1e-15));
    CHECK(testutil::close(at_zero.u2, sv({0.5, 0.5, 0}), 1e-15));

    const SpectralDecomp s2 = spectral_decompose(sv({5, 3, 4}));
    CHECK(s2.lambda1 == doctest::Approx(0.0));
    CHECK(s2.lambda2 == doctest::Approx(10.0));
}

TEST_CASE("reconstruction and Jordan-frame invariants on random points") {
    gen::Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const Eigen::Index m = 2 + rng.pick(7);
        const SocVector z(rng.vector(m, -10.0, 10.0));
        const SpectralDecomp s = spectral_decompose(z);
        REQUIRE(s.lambda1 <= s.lambda2);
        const SocVector rebuilt = s.lambda1 * s.u1 + s.lambda2 * s.u2;
        REQUIRE((rebuilt - z).norm() <= 1e-12 * std::max(1.0, z.norm()));
        REQUIRE(std::abs(s.u1.dot(s.u2)) <= 1e-12);
        REQUIRE(std::abs(s.u1.dot(s.u1) - 0.5) <= 1e-12);
        REQUIRE(std::abs(s.u2.dot(s.u2) - 0.5) <= 1e-12);
        REQUIRE(s.u1.head() == 0.5);
        REQUIRE(s.u2.head() == 0.5);
    }
}

TEST_CASE("region classification on literal points") {
    CHECK(classify_region(sv({2, 1, 0})).tag == RegionTag::IntK);
    CHECK(classify_region(sv({1, 1, 0})).tag == RegionTag::BdKNonzero);
    CHECK(classify_region(sv({-1, 2, 0})).tag == RegionTag::Outside);
    CHECK(classify_region(sv({0, 0, 0})).tag == RegionTag::Zero);
    CHECK(classify_region(sv({-2, 1, 0})).tag == RegionTag::IntKPolar);
    CHECK(classify_region(sv({-1, 1, 0})).tag == RegionTag::BdKPolarNonzero);

    const ConeRegion r = classify_region(sv({1, 1, 0}));
    CHECK(r.lambda1 == doctest::Approx(0.0));
    CHECK(r.lambda2 == doctest::Approx(2.0));
    CHECK(r.tol_used > 0.0);
}

TEST_CASE("classification is scale consistent") {
    gen::Rng rng(12);
    const TolerancePolicy tol;
    int kept = 0;
    for (int i = 0; i < 5000; ++i) {
        const Eigen::Index m = 2 + rng.pick(5);
        const SocVector z(rng.vector(m, -3.0, 3.0));
        const ConeRegion r = classify_region(z, tol);
        if (std::min(std::abs(r.lambda1), std::abs(r.lambda2)) <= 10.0 * r.tol_used) continue;
        ++kept;
        for (double t : {0.5, 2.0, 97.0, 1e-3}) {
            REQUIRE(classify_region(t * z, tol).tag == r.tag);
        }
    }
    REQUIRE(kept > 4000);
}

TEST_CASE("reflection") {
    CHECK(testutil::close(reflect_hat(sv({1, 1, 0})), sv({1, -1, 0}), 0.0));
    CHECK(testutil::close(reflect_hat(sv({0, 0, 0})), sv({0, 0, 0}), 0.0));
    CHECK(testutil::close(reflect_hat(sv({1, 0, -1})), sv({1, 0, 1}), 0.0));
    CHECK(reflect_hat(sv({1, 2, 3})).dot(sv({1, 2, 3})) ==
          doctest::Approx(1.0 - 4.0 - 9.0));
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(SocVector(ev({1.0})), DimensionMismatch);
    CHECK_THROWS_AS(SocVector(ev({1.0, std::numeric_limits<double>::quiet_NaN()})), Error);
    CHECK_THROWS_AS(SocVector(ev({1.0, std::numeric_limits<double>::infinity()})), Error);
    CHECK_THROWS_AS(TolerancePolicy(0.0, 1e-9), Error);
    CHECK_THROWS_AS(sv({1, 2, 3}) + sv({1, 2}), DimensionMismatch);
}

TEST_CASE("normalization map on literal points") {
    const auto first = phi_derivatives(ev({2, 0}), ev({0, 1}));
    CHECK(testutil::close(first.jac_d, ev({0, 0.5}), 1e-15));

    const auto parallel = phi_derivatives(ev({1, 0}), ev({1, 0}));
    CHECK(testutil::close(parallel.jac_d, ev({0, 0}), 1e-15));

    // Expected value derived from central differences at step 1e-5; the
    // quotient itself is noise-limited near eps/h^2.
    const auto curved = phi_derivatives(ev({1, 0}), ev({0, 1}));
    CHECK(testutil::close(curved.second_dd, testutil::fd_phi_second(ev({1, 0}), ev({0, 1})),
                          1e-5));
    CHECK(testutil::close(curved.second_dd, ev({-1, 0}), 1e-12));

    CHECK_THROWS_AS(phi_derivatives(ev({0, 0}), ev({1, 0})), NearZeroVector);
}

TEST_CASE("normalization map derivative checks on random data") {
    gen::Rng rng(13);
    for (int i = 0; i < 400; ++i) {
        const Eigen::Index k = 1 + rng.pick(6);
        Eigen::VectorXd x2 = rng.unit_vector(k) * (0.1 + 9.9 * rng.unit());
        Eigen::VectorXd d = rng.unit_vector(k);
        const auto out = phi_derivatives(x2, d);

        REQUIRE(std::abs(out.value.norm() - 1.0) <= 1e-12);
        REQUIRE(phi_derivatives(x2, x2).jac_d.norm() <= 1e-12 * std::max(1.0, x2.norm()));

        const double h = 1e-6 * x2.norm();
        auto phi = [](const Eigen::VectorXd& v) { return Eigen::VectorXd(v / v.norm()); };
        const Eigen::VectorXd fd_jac = (phi(x2 + h * d) - phi(x2 - h * d)) / (2.0 * h);
        REQUIRE((fd_jac - out.jac_d).norm() <= 1e-6 * std::max(1.0, out.jac_d.norm()));

        // Step proportional to ||x2|| balances truncation against the
        // eps/h^2 noise of the quotient.
        const Eigen::VectorXd fd_second = testutil::fd_phi_second(x2, d, 3e-4 * x2.norm());
        REQUIRE((fd_second - out.second_dd).norm() <=
                1e-6 * std::max(1.0, out.second_dd.norm()));
    }
}
