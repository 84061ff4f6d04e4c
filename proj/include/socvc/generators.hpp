#pragma once

#include "socvc/cone_geometry.hpp"

#include <cstdint>
#include <random>
#include <utility>

// Constructive samplers for Omega pairs, tangent directions, and
// second-order tangent members. Boundary rows have measure zero, so
// everything is built to land on them exactly instead of by rejection.

namespace socvc::gen {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }
    double unit() { return uniform(0.0, 1.0); }

    Eigen::VectorXd vector(Eigen::Index n, double lo, double hi) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    // Uniform direction with norm bounded away from zero.
    Eigen::VectorXd unit_vector(Eigen::Index n) {
        std::normal_distribution<double> g(0.0, 1.0);
        Eigen::VectorXd v(n);
        do {
            for (Eigen::Index i = 0; i < n; ++i) v[i] = g(eng_);
        } while (v.norm() < 1e-8);
        return v / v.norm();
    }

    int pick(int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(eng_)); }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

PairCase random_case(Rng& rng);

// A pair of the requested case with data of magnitude ~scale; radial parts
// stay bounded away from zero so the case is numerically unambiguous.
CompPair random_pair(PairCase tag, Eigen::Index m, Rng& rng, double scale = 1.0);

// Number of structurally distinct tangent-cone rows for a case (row indices
// accepted by random_tangent).
int tangent_row_count(PairCase tag);

// (d, w) in T_Omega(pair). row = -1 picks a row at random; otherwise forces
// the row with that index (per-case, 0-based).
std::pair<SocVector, SocVector> random_tangent(const CompPair& pair, Rng& rng, double scale = 1.0,
                                               int row = -1);

// (p, q) in T2_Omega(pair; (d, w)), dispatching on the row that (d, w)
// occupies. For rows with an or-split, branch = -1 picks at random.
std::pair<SocVector, SocVector> random_tangent2_member(const CompPair& pair, const SocVector& d,
                                                       const SocVector& w, Rng& rng,
                                                       double scale = 1.0, int branch = -1,
                                                       const TolerancePolicy& tol = {});

// The element attaining the closed-form support value for admissible data.
std::pair<SocVector, SocVector> support_maximizer(const CompPair& pair, const SocVector& d,
                                                  const SocVector& w,
                                                  const TolerancePolicy& tol = {});

}  // namespace socvc::gen
