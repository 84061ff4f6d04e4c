#pragma once

#include "socvc/cone_geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

// Independent numerical verifiers. These are deliberately slower and
// structurally independent of the analytic case dispatch they cross-check:
// no branch logic is shared with the projector or the membership tests.

namespace socvc::oracle {

inline std::vector<double> default_t_seq() { return {1e-1, 1e-2, 1e-3}; }

struct FdSecondDerivResult {
    std::vector<SocVector> estimates;  // one difference quotient per t
    std::vector<double> errors;        // per-t error norms, when a reference was supplied
};

// Parabola difference quotients
//   ( P(z + t xi + t^2/2 eta) - P(z) - t P'(z; xi) ) / (t^2/2)
// for P the projection onto K. The first-derivative term is the analytic
// directional derivative, itself validated independently by one-sided
// differences.
FdSecondDerivResult fd_second_deriv(const SocVector& z, const SocVector& xi, const SocVector& eta,
                                    const std::vector<double>& t_seq = default_t_seq(),
                                    const std::optional<SocVector>& reference = std::nullopt,
                                    const TolerancePolicy& tol = {});

// Upper bound on dist((x, y), Omega) via the parametrization
// Omega = { (P(s), P(s) - s) : s } and derivative-free pattern search on
//   g(s) = ||P(s) - x||^2 + ||P(s) - s - y||^2
// started at s0 = x - y. Never exceeds g(s0)^{1/2} and is nonincreasing
// across iterations.
double dist_Omega(const SocVector& x, const SocVector& y, int iterations = 200);

// dist((x, y) + t (d, w) + t^2/2 (p, q), Omega) / t^2 for each t.
// Member (p, q) predict ratios decreasing to zero. Throws NotInTangent when
// (d, w) fails the tangency precondition.
std::vector<double> curve_membership_ratio(const CompPair& pair, const SocVector& d,
                                           const SocVector& w, const SocVector& p,
                                           const SocVector& q,
                                           const std::vector<double>& t_seq = default_t_seq(),
                                           const TolerancePolicy& tol = {},
                                           int dist_iterations = 200);

// Empirical supremum of <u, p> + <v, q> over constructively generated
// members of T2_Omega(pair; (d, w)), including the closed-form maximizer.
// A lower bound on the true support value; admissibility preconditions are
// those of support_tangent2.
double sampled_support(const CompPair& pair, const SocVector& d, const SocVector& w,
                       const SocVector& u, const SocVector& v, int sample_count,
                       std::uint64_t seed = 2024, const TolerancePolicy& tol = {});

}  // namespace socvc::oracle
