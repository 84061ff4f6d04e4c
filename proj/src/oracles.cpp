#include "socvc/oracles.hpp"

#include "socvc/generators.hpp"
#include "socvc/projector.hpp"
#include "socvc/support_values.hpp"

namespace socvc::oracle {

FdSecondDerivResult fd_second_deriv(const SocVector& z, const SocVector& xi, const SocVector& eta,
                                    const std::vector<double>& t_seq,
                                    const std::optional<SocVector>& reference,
                                    const TolerancePolicy& tol) {
    for (std::size_t i = 0; i + 1 < t_seq.size(); ++i)
        if (!(t_seq[i] > t_seq[i + 1]) || !(t_seq[i + 1] > 0.0))
            throw PreconditionViolated("fd_second_deriv: t_seq must be strictly decreasing > 0");
    if (!t_seq.empty() && !(t_seq.front() > 0.0))
        throw PreconditionViolated("fd_second_deriv: t_seq must be positive");

    const SocVector base = project(z);
    const SocVector first = dir_deriv(z, xi, tol);

    FdSecondDerivResult out;
    for (double t : t_seq) {
        const SocVector probe = project(z + t * xi + (0.5 * t * t) * eta);
        out.estimates.push_back((1.0 / (0.5 * t * t)) * (probe - base - t * first));
        if (reference) out.errors.push_back((out.estimates.back() - *reference).norm());
    }
    return out;
}

namespace {

double omega_gap_sq(const Eigen::VectorXd& s, const Eigen::VectorXd& xv,
                    const Eigen::VectorXd& yv) {
    const Eigen::VectorXd ps = project(SocVector(s)).vec();
    return (ps - xv).squaredNorm() + (ps - s - yv).squaredNorm();
}

}  // namespace

double dist_Omega(const SocVector& x, const SocVector& y, int iterations) {
    if (y.dim() != x.dim()) throw DimensionMismatch("dist_Omega: dimension mismatch");
    const Eigen::VectorXd xv = x.vec();
    const Eigen::VectorXd yv = y.vec();
    const Eigen::Index m = xv.size();

    Eigen::VectorXd s = xv - yv;
    double best = omega_gap_sq(s, xv, yv);

    // Coordinate pattern search; the start point is already optimal for
    // exact members, so the step only has to resolve small corrections.
    double step = 0.125 * std::max(1.0, s.norm());
    for (int it = 0; it < iterations && step > 1e-15; ++it) {
        bool improved = false;
        for (Eigen::Index i = 0; i < m; ++i) {
            for (double sign : {1.0, -1.0}) {
                Eigen::VectorXd cand = s;
                cand[i] += sign * step;
                const double val = omega_gap_sq(cand, xv, yv);
                if (val < best) {
                    best = val;
                    s = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return std::sqrt(best);
}

std::vector<double> curve_membership_ratio(const CompPair& pair, const SocVector& d,
                                           const SocVector& w, const SocVector& p,
                                           const SocVector& q, const std::vector<double>& t_seq,
                                           const TolerancePolicy& tol, int dist_iterations) {
    if (!in_tangent_Omega(pair, d, w, tol))
        throw NotInTangent("curve_membership_ratio: (d, w) not tangent to Omega at the pair");

    std::vector<double> ratios;
    ratios.reserve(t_seq.size());
    for (double t : t_seq) {
        const SocVector xt = pair.x + t * d + (0.5 * t * t) * p;
        const SocVector yt = pair.y + t * w + (0.5 * t * t) * q;
        ratios.push_back(dist_Omega(xt, yt, dist_iterations) / (t * t));
    }
    return ratios;
}

double sampled_support(const CompPair& pair, const SocVector& d, const SocVector& w,
                       const SocVector& u, const SocVector& v, int sample_count,
                       std::uint64_t seed, const TolerancePolicy& tol) {
    // Same admissibility gate as the closed form; the sampled bound is only
    // meaningful under it.
    if (!in_tangent_Omega(pair, d, w, tol))
        throw PreconditionViolated("sampled_support: (d, w) not in T_Omega at the pair");
    if (!in_regular_normal_Omega(pair, u, v, tol))
        throw PreconditionViolated("sampled_support: (u, v) not in the regular normal cone");
    const double pairing_scale = std::max(u.norm(), v.norm()) * std::max(d.norm(), w.norm());
    if (std::abs(u.dot(d) + v.dot(w)) > tol.membership(pairing_scale))
        throw PreconditionViolated("sampled_support: (u, v) not orthogonal to (d, w)");

    gen::Rng rng(seed);
    auto pairing = [&](const std::pair<SocVector, SocVector>& pq) {
        return u.dot(pq.first) + v.dot(pq.second);
    };

    double best = pairing(gen::support_maximizer(pair, d, w, tol));
    for (int i = 0; i < sample_count; ++i)
        best = std::max(best, pairing(gen::random_tangent2_member(pair, d, w, rng, 1.0, -1, tol)));
    return best;
}

}  // namespace socvc::oracle
