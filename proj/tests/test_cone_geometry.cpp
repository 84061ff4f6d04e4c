#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <set>

using namespace socvc;
using testutil::ev;
using testutil::sv;

namespace {

// Every (case, tangent-row) combination, repeated `reps` times across dims.
template <typename Fn>
void for_each_tangent_row(int reps, std::uint64_t seed, Fn&& fn, double scale = 1.0) {
    gen::Rng rng(seed);
    const Eigen::Index dims[] = {2, 3, 5, 8};
    constexpr PairCase cases[] = {PairCase::IntK_Zero, PairCase::Zero_IntK, PairCase::Bd_Bd,
                                  PairCase::Bd_Zero,   PairCase::Zero_Bd,   PairCase::Zero_Zero};
    for (int r = 0; r < reps; ++r) {
        for (PairCase tag : cases) {
            const Eigen::Index m = dims[r % 4];
            const CompPair pair = gen::random_pair(tag, m, rng, scale);
            for (int row = 0; row < gen::tangent_row_count(tag); ++row) {
                auto [d, w] = gen::random_tangent(pair, rng, scale, row);
                fn(pair, d, w, rng);
            }
        }
    }
}

}  // namespace

TEST_CASE("tangent cone of K on literal points") {
    CHECK(in_tangent_K(sv({1, 1, 0}), sv({1, -1, 5})));
    CHECK_FALSE(in_tangent_K(sv({0, 0, 0}), sv({-1, 0, 0})));
    CHECK(in_tangent_K(sv({2, 1, 0}), sv({-9, 4, 17})));

    CHECK(in_tangent_K(sv({-1, 1, 0}), sv({-1, 0, 3}), /*polar=*/true));
    CHECK_FALSE(in_tangent_K(sv({-1, 1, 0}), sv({1, 1, 0}), /*polar=*/true));
    CHECK_THROWS_AS(in_tangent_K(sv({-1, 2, 0}), sv({1, 0, 0})), NotInCone);
    CHECK_THROWS_AS(in_tangent_K(sv({1, 1, 0}), sv({1, 0, 0}), /*polar=*/true), NotInCone);
}

TEST_CASE("second-order tangent set of K on literal points") {
    CHECK(in_tangent2_K(sv({1, 1, 0}), sv({0, 0, 1}), sv({1, 0, 0}), false,
                        /*boundary_only=*/true));
    CHECK(in_tangent2_K(sv({0, 0, 0}), sv({1, 1, 0}), sv({5, 0, 0})));
    CHECK(in_tangent2_K(sv({1, 1, 0}), sv({1, 0, 0}), sv({-40, 3, 11})));

    // Interior of the half-space: member but not on the boundary.
    CHECK(in_tangent2_K(sv({1, 1, 0}), sv({0, 0, 1}), sv({2, 0, 0})));
    CHECK_FALSE(in_tangent2_K(sv({1, 1, 0}), sv({0, 0, 1}), sv({2, 0, 0}), false, true));
    CHECK_FALSE(in_tangent2_K(sv({1, 1, 0}), sv({0, 0, 1}), sv({-2, 0, 0})));

    CHECK_THROWS_AS(in_tangent2_K(sv({1, 1, 0}), sv({-1, 1, 0}), sv({0, 0, 0})), NotInTangent);
    CHECK_THROWS_AS(in_tangent2_K(sv({-1, 2, 0}), sv({1, 0, 0}), sv({0, 0, 0})), NotInCone);
}

TEST_CASE("pair classification on literal points") {
    CHECK(classify_pair(sv({2, 1, 0}), sv({0, 0, 0})).case_tag == PairCase::IntK_Zero);

    const CompPair bd = classify_pair(sv({1, 1, 0}), sv({2, -2, 0}));
    CHECK(bd.case_tag == PairCase::Bd_Bd);
    CHECK(*bd.k_ratio == doctest::Approx(2.0));

    CHECK_THROWS_AS(classify_pair(sv({1, 1, 0}), sv({1, 1, 0})), NotInOmega);
    try {
        classify_pair(sv({1, 1, 0}), sv({1, 1, 0}));
    } catch (const NotInOmega& e) {
        CHECK(e.violation > 0.5);  // <x,y> = 2 forces a visible projection gap
    }

    CHECK(classify_pair(sv({0, 0, 0}), sv({3, 1, 1})).case_tag == PairCase::Zero_IntK);
    CHECK(classify_pair(sv({1, 1, 0}), sv({0, 0, 0})).case_tag == PairCase::Bd_Zero);
    CHECK(classify_pair(sv({0, 0, 0}), sv({1, 1, 0})).case_tag == PairCase::Zero_Bd);
    CHECK(classify_pair(sv({0, 0, 0}), sv({0, 0, 0})).case_tag == PairCase::Zero_Zero);
}

TEST_CASE("tangent cone of Omega on literal points") {
    const CompPair interior = classify_pair(sv({2, 1, 0}), sv({0, 0, 0}));
    CHECK(in_tangent_Omega(interior, sv({-3, 7, 2}), sv({0, 0, 0})));
    CHECK_FALSE(in_tangent_Omega(interior, sv({-3, 7, 2}), sv({1e-3, 0, 0})));

    const CompPair origin = classify_pair(sv({0, 0, 0}), sv({0, 0, 0}));
    CHECK(in_tangent_Omega(origin, sv({1, 1, 0}), sv({1, -1, 0})));
    CHECK_FALSE(in_tangent_Omega(origin, sv({1, 1, 0}), sv({1, 1, 0})));

    const CompPair bd_zero = classify_pair(sv({1, 1, 0}), sv({0, 0, 0}));
    const char* rule = nullptr;
    CHECK(in_tangent_Omega(bd_zero, sv({0, 0, 1}), sv({3, -3, 0}), {}, &rule));
    CHECK(std::string(rule) == "d perp x-hat; w in R+ x-hat");
    CHECK(make_tangent_pair(bd_zero, sv({0, 0, 1}), sv({3, -3, 0})).d.dim() == 3);
    CHECK_THROWS_AS(make_tangent_pair(bd_zero, sv({0, 0, 1}), sv({-3, 3, 0})), NotInTangent);
}

TEST_CASE("regular tangent subspace basis") {
    // Interior x: all of R^m in the first block.
    const auto full = lin_tangent_basis(classify_pair(sv({2, 1, 0}), sv({0, 0, 0})));
    REQUIRE(full.size() == 3);
    for (const auto& b : full) CHECK(b.tail(3).norm() == 0.0);

    CHECK(lin_tangent_basis(classify_pair(sv({0, 0, 0}), sv({0, 0, 0}))).empty());

    // Boundary x, zero y: the d-block is the hyperplane d perp x-hat;
    // verified by the residual of the defining constraint.
    const CompPair bd_zero = classify_pair(sv({1, 1, 0}), sv({0, 0, 0}));
    const auto half = lin_tangent_basis(bd_zero);
    REQUIRE(half.size() == 2);
    for (const auto& b : half) {
        CHECK(b.tail(3).norm() == 0.0);
        CHECK(std::abs(b.head(3).dot(sv({1, -1, 0}).vec())) <= 1e-12);
    }
    // Orthonormality.
    CHECK(std::abs(half[0].dot(half[1])) <= 1e-12);
    CHECK(half[0].norm() == doctest::Approx(1.0));

    // Bd_Bd: every basis vector (and its negation) is tangent.
    gen::Rng rng(31);
    for (int i = 0; i < 25; ++i) {
        const Eigen::Index m = 2 + rng.pick(5);
        const CompPair pair = gen::random_pair(PairCase::Bd_Bd, m, rng);
        // dim = m: the span condition adds only m-2 independent rows on top
        // of the two perpendicularity constraints (y-hat = k x collapses one).
        const auto basis = lin_tangent_basis(pair);
        CHECK(basis.size() == static_cast<std::size_t>(m));
        for (const auto& b : basis) {
            for (double s : {1.0, -1.0}) {
                const SocVector d(s * b.head(m));
                const SocVector w(s * b.tail(m));
                CHECK(in_tangent_Omega(pair, d, w));
            }
        }
    }
}

TEST_CASE("second-order tangent set of Omega on literal points") {
    // Base pair at the origin: the set is the tangent cone at (d, w).
    const CompPair origin = classify_pair(sv({0, 0, 0}), sv({0, 0, 0}));
    const char* rule = nullptr;
    CHECK(in_tangent2_Omega(origin, sv({1, 1, 0}), sv({0, 0, 0}), sv({5, 0, 0}), sv({0, 0, 0}),
                            {}, &rule));
    CHECK(std::string(rule) == "zero/zero: (p,q) in T_Omega(d,w)");

    const CompPair interior = classify_pair(sv({2, 1, 0}), sv({0, 0, 0}));
    CHECK(in_tangent2_Omega(interior, sv({1, 2, 3}), sv({0, 0, 0}), sv({-4, 0, 2}),
                            sv({0, 0, 0})));
    CHECK_FALSE(in_tangent2_Omega(interior, sv({1, 2, 3}), sv({0, 0, 0}), sv({-4, 0, 2}),
                                  sv({0.2, 0, 0})));
    CHECK_THROWS_AS(in_tangent2_Omega(interior, sv({1, 2, 3}), sv({1, 0, 0}), sv({0, 0, 0}),
                                      sv({0, 0, 0})),
                    NotInTangent);

    // Bd_Bd members satisfy the projection second-derivative identity.
    gen::Rng rng(32);
    for (int i = 0; i < 50; ++i) {
        const CompPair pair = gen::random_pair(PairCase::Bd_Bd, 2 + rng.pick(5), rng);
        auto [d, w] = gen::random_tangent(pair, rng);
        auto [p, q] = gen::random_tangent2_member(pair, d, w, rng);
        REQUIRE(in_tangent2_Omega(pair, d, w, p, q));
        const SocVector image = second_dir_deriv(pair.x - pair.y, d - w, p - q);
        REQUIRE((image - p).norm() <= 1e-9 * std::max(1.0, p.norm()));
    }
}

TEST_CASE("regular normal cone on literal points") {
    const CompPair origin = classify_pair(sv({0, 0, 0}), sv({0, 0, 0}));
    CHECK(in_regular_normal_Omega(origin, sv({-1, 0, 0}), sv({-2, 1, 0})));
    CHECK_FALSE(in_regular_normal_Omega(origin, sv({1, 0, 0}), sv({-2, 1, 0})));

    const CompPair zero_bd = classify_pair(sv({0, 0, 0}), sv({1, 0, -1}));
    CHECK(in_regular_normal_Omega(zero_bd, sv({-1, 0, 1}), sv({-1, 0, -1})));

    const CompPair interior = classify_pair(sv({2, 1, 0}), sv({0, 0, 0}));
    CHECK_FALSE(in_regular_normal_Omega(interior, sv({0.1, 0, 0}), sv({1, 1, 1})));
    CHECK(in_regular_normal_Omega(interior, sv({0, 0, 0}), sv({13, -2, 7})));
}

TEST_CASE("blockwise products") {
    const BlockStructure structure({3, 3});
    CHECK(structure.total() == 6);
    CHECK_THROWS_AS(BlockStructure({3, 1}), DimensionMismatch);

    const Eigen::VectorXd x = ev({2, 1, 0, 1, 1, 0});
    const Eigen::VectorXd y = ev({0, 0, 0, 0, 0, 0});
    const Eigen::VectorXd d_ok = ev({5, -2, 3, 0, 0, 1});
    const Eigen::VectorXd w_ok = ev({0, 0, 0, 3, -3, 0});
    CHECK(blockwise_in_tangent_Omega(structure, x, y, d_ok, w_ok));

    Eigen::VectorXd w_bad = w_ok;
    w_bad[0] = 0.5;  // breaks the first block only
    CHECK_FALSE(blockwise_in_tangent_Omega(structure, x, y, d_ok, w_bad));

    // Single block agrees with the unblocked call.
    const BlockStructure single({3});
    const CompPair pair = classify_pair(sv({1, 1, 0}), sv({0, 0, 0}));
    CHECK(blockwise_in_tangent_Omega(single, ev({1, 1, 0}), ev({0, 0, 0}), ev({0, 0, 1}),
                                     ev({3, -3, 0})) ==
          in_tangent_Omega(pair, sv({0, 0, 1}), sv({3, -3, 0})));

    CHECK_THROWS_AS(blockwise_in_tangent_Omega(structure, ev({1, 1, 0}), y, d_ok, w_ok),
                    DimensionMismatch);

    // Second-order variant: interior block wants q = 0, origin block wants
    // (p, q) tangent at (d, w).
    const Eigen::VectorXd x2b = ev({2, 1, 0, 0, 0, 0});
    const Eigen::VectorXd y2b = ev({0, 0, 0, 0, 0, 0});
    const Eigen::VectorXd d2b = ev({1, 0, 2, 1, 1, 0});
    const Eigen::VectorXd w2b = ev({0, 0, 0, 0, 0, 0});
    const Eigen::VectorXd p2b = ev({4, -1, 0, 5, 0, 0});
    Eigen::VectorXd q2b = ev({0, 0, 0, 0, 0, 0});
    CHECK(blockwise_in_tangent2_Omega(structure, x2b, y2b, d2b, w2b, p2b, q2b));
    q2b[0] = 0.4;
    CHECK_FALSE(blockwise_in_tangent2_Omega(structure, x2b, y2b, d2b, w2b, p2b, q2b));
}

TEST_CASE("first-order bridge: analytic tangency matches the derivative identity") {
    const TolerancePolicy tol;
    int members = 0, rejected = 0;
    std::set<PairCase> case_seen;
    for_each_tangent_row(34, 33, [&](const CompPair& pair, const SocVector& d, const SocVector& w,
                                     gen::Rng& rng) {
        case_seen.insert(pair.case_tag);
        REQUIRE(in_tangent_Omega(pair, d, w, tol));
        const SocVector image = dir_deriv(pair.x - pair.y, d - w, tol);
        REQUIRE((image - d).norm() <= 1e-8 * std::max(1.0, d.norm()));
        ++members;

        auto [dn, wn] = testutil::tangent_nonmember(pair, rng);
        REQUIRE_FALSE(in_tangent_Omega(pair, dn, wn, tol));
        const SocVector bad = dir_deriv(pair.x - pair.y, dn - wn, tol);
        REQUIRE((bad - dn).norm() > 1e-8 * std::max(1.0, dn.norm()));
        ++rejected;
    });
    CHECK(members >= 500);
    CHECK(rejected >= 100);
    CHECK(case_seen.size() == 6);
}

TEST_CASE("second-order bridge: analytic membership matches the identity") {
    const TolerancePolicy tol;
    int members = 0, rejected = 0;
    for_each_tangent_row(34, 34, [&](const CompPair& pair, const SocVector& d, const SocVector& w,
                                     gen::Rng& rng) {
        auto [p, q] = gen::random_tangent2_member(pair, d, w, rng);
        REQUIRE(in_tangent2_Omega(pair, d, w, p, q, tol));
        const SocVector image = second_dir_deriv(pair.x - pair.y, d - w, p - q, tol);
        REQUIRE((image - p).norm() <= 1e-8 * std::max(1.0, p.norm()));
        ++members;

        auto [pn, qn] = testutil::tangent2_nonmember(pair, d, w, rng, tol);
        REQUIRE_FALSE(in_tangent2_Omega(pair, d, w, pn, qn, tol));
        const SocVector bad = second_dir_deriv(pair.x - pair.y, d - w, pn - qn, tol);
        REQUIRE((bad - pn).norm() > 1e-8 * std::max(1.0, pn.norm()));
        ++rejected;
    });
    CHECK(members >= 500);
    CHECK(rejected >= 100);
}

TEST_CASE("absorption of the regular tangent subspace") {
    const TolerancePolicy tol;
    for_each_tangent_row(6, 35, [&](const CompPair& pair, const SocVector& d, const SocVector& w,
                                    gen::Rng& rng) {
        const Eigen::Index m = pair.x.dim();
        const auto basis = lin_tangent_basis(pair, tol);
        auto [p, q] = gen::random_tangent2_member(pair, d, w, rng);

        Eigen::VectorXd shift = Eigen::VectorXd::Zero(2 * m);
        for (const auto& b : basis) shift += rng.uniform(-2.0, 2.0) * b;
        const SocVector du(shift.head(m)), wv(shift.tail(m));

        // T_Omega + lin T_Omega = T_Omega
        REQUIRE(in_tangent_Omega(pair, d + du, w + wv, tol));
        // T2_Omega + lin T_Omega = T2_Omega
        REQUIRE(in_tangent2_Omega(pair, d, w, p + du, q + wv, tol));
    });
}

TEST_CASE("cone and parabolic scaling of the memberships") {
    const TolerancePolicy tol;
    for_each_tangent_row(6, 36, [&](const CompPair& pair, const SocVector& d, const SocVector& w,
                                    gen::Rng& rng) {
        auto [p, q] = gen::random_tangent2_member(pair, d, w, rng);
        for (double t : {0.25, 4.0, 19.0}) {
            REQUIRE(in_tangent_Omega(pair, t * d, t * w, tol));
            REQUIRE(in_tangent2_Omega(pair, t * d, t * w, (t * t) * p, (t * t) * q, tol));
        }
    });
}

TEST_CASE("polarity spot check for boundary pairs") {
    gen::Rng rng(37);
    const TolerancePolicy tol;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index m = 2 + rng.pick(5);
        const CompPair pair = gen::random_pair(PairCase::Bd_Bd, m, rng);
        const auto basis = lin_tangent_basis(pair, tol);

        // A random element of the orthogonal complement is a regular normal.
        Eigen::VectorXd uv(2 * m);
        uv.head(m) = rng.vector(m, -1.0, 1.0);
        uv.tail(m) = rng.vector(m, -1.0, 1.0);
        for (const auto& b : basis) uv -= uv.dot(b) * b;
        const SocVector u(uv.head(m)), v(uv.tail(m));
        REQUIRE(in_regular_normal_Omega(pair, u, v, tol));

        for (int k = 0; k < 50; ++k) {
            auto [d, w] = gen::random_tangent(pair, rng);
            REQUIRE(u.dot(d) + v.dot(w) <= 1e-8 * std::max(1.0, uv.norm() * d.norm()));
        }
    }
}

TEST_CASE("constructive samplers land on their advertised case") {
    gen::Rng rng(38);
    for (int i = 0; i < 300; ++i) {
        const PairCase tag = gen::random_case(rng);
        const Eigen::Index m = 2 + rng.pick(7);
        const CompPair pair = gen::random_pair(tag, m, rng, 0.5 + 2.0 * rng.unit());
        REQUIRE(classify_pair(pair.x, pair.y).case_tag == tag);
        if (tag == PairCase::Bd_Bd)
            REQUIRE(*classify_pair(pair.x, pair.y).k_ratio ==
                    doctest::Approx(*pair.k_ratio).epsilon(1e-12));
    }
}
