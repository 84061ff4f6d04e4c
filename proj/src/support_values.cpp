#include "socvc/support_values.hpp"

namespace socvc {

SupportResult support_tangent2_traced(const CompPair& pair, const SocVector& d, const SocVector& w,
                                      const SocVector& u, const SocVector& v,
                                      const TolerancePolicy& tol) {
    if (!in_tangent_Omega(pair, d, w, tol))
        throw PreconditionViolated("support_tangent2: (d, w) not in T_Omega at the pair");
    if (!in_regular_normal_Omega(pair, u, v, tol))
        throw PreconditionViolated("support_tangent2: (u, v) not in the regular normal cone");
    const double pairing = u.dot(d) + v.dot(w);
    const double pairing_scale = std::max(u.norm(), v.norm()) * std::max(d.norm(), w.norm());
    if (std::abs(pairing) > tol.membership(pairing_scale))
        throw PreconditionViolated("support_tangent2: (u, v) not orthogonal to (d, w)");

    switch (pair.case_tag) {
        case PairCase::IntK_Zero:
            return {0.0, "intK/zero: 0"};
        case PairCase::Zero_IntK:
            return {0.0, "zero/intK: 0"};
        case PairCase::Zero_Zero:
            return {0.0, "zero/zero: 0"};

        case PairCase::Bd_Zero: {
            const Eigen::VectorXd xb2 = pair.x.tail() / pair.x.tail_norm();
            const double margin = -d.head() + xb2.dot(d.tail());
            const bool w_vanishes = w.norm() <= tol.membership(std::max(d.norm(), w.norm()));
            if (w_vanishes && margin < -tol.membership(d.norm()))
                return {0.0, "bd/zero: d int-tangent: 0"};
            const double n2 = pair.x.tail_norm();
            const double value =
                -(u.head() / pair.x.head()) * (d.head() * d.head() - d.tail().squaredNorm()) -
                2.0 * w.head() * d.tail().dot(v.tail()) / n2 -
                2.0 * d.head() * w.tail().dot(v.tail()) / n2;
            return {value, "bd/zero: boundary row"};
        }

        case PairCase::Zero_Bd: {
            const Eigen::VectorXd yb2 = pair.y.tail() / pair.y.tail_norm();
            const double margin = -w.head() + yb2.dot(w.tail());
            const bool d_vanishes = d.norm() <= tol.membership(std::max(d.norm(), w.norm()));
            if (d_vanishes && margin < -tol.membership(w.norm()))
                return {0.0, "zero/bd: w int-tangent: 0"};
            const double n2 = pair.y.tail_norm();
            const double value =
                -(v.head() / pair.y.head()) * (w.head() * w.head() - w.tail().squaredNorm()) -
                2.0 * d.head() * w.tail().dot(u.tail()) / n2 -
                2.0 * w.head() * d.tail().dot(u.tail()) / n2;
            return {value, "zero/bd: boundary row"};
        }

        case PairCase::Bd_Bd: {
            const double x1 = pair.x.head();
            const double y1 = pair.y.head();
            const double value =
                (x1 * u.head() + y1 * v.head()) / (x1 * x1) *
                    (d.tail().squaredNorm() - d.head() * d.head()) +
                (x1 * w.head() - y1 * d.head()) / (x1 * y1) * (w.dot(v) - d.dot(u));
            return {value, "bd/bd"};
        }
    }
    throw Error("support_tangent2: unreachable");
}

}  // namespace socvc
