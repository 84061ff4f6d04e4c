#include "socvc/generators.hpp"

namespace socvc::gen {

namespace {

SocVector make(double head, Eigen::VectorXd tail) {
    Eigen::VectorXd v(tail.size() + 1);
    v[0] = head;
    v.tail(tail.size()) = tail;
    return SocVector(std::move(v));
}

// Boundary point of K with tail norm in [0.4, 1.4] * scale.
SocVector boundary_point(Eigen::Index m, Rng& rng, double scale) {
    const Eigen::VectorXd dir = rng.unit_vector(m - 1);
    const double r = scale * (0.4 + rng.unit());
    return make(r, r * dir);
}

SocVector interior_point(Eigen::Index m, Rng& rng, double scale) {
    const Eigen::VectorXd tail = scale * rng.unit() * rng.unit_vector(m - 1);
    return make(tail.norm() + scale * (0.2 + rng.unit()), tail);
}

// Tangent direction at a boundary point: margin = -d1 + xb2.d2 = -slack.
SocVector boundary_tangent(const SocVector& x, Rng& rng, double scale, double slack) {
    const Eigen::Index m = x.dim();
    const Eigen::VectorXd xb2 = x.tail() / x.tail_norm();
    const Eigen::VectorXd d2 = scale * rng.vector(m - 1, -1.0, 1.0);
    return make(xb2.dot(d2) + slack, d2);
}

// p on bd T2_K(x; d): p1 pinned by the boundary equation plus slack >= 0
// moves it into the interior of T2.
SocVector t2_element(const SocVector& x, const SocVector& d, Rng& rng, double scale,
                     double slack) {
    const Eigen::VectorXd xb2 = x.tail() / x.tail_norm();
    const Eigen::VectorXd p2 = scale * rng.vector(x.dim() - 1, -1.0, 1.0);
    const double curv = (d.tail().squaredNorm() - d.head() * d.head()) / x.head();
    return make(xb2.dot(p2) + curv + slack, p2);
}

}  // namespace

PairCase random_case(Rng& rng) {
    static constexpr PairCase all[] = {PairCase::IntK_Zero, PairCase::Zero_IntK, PairCase::Bd_Bd,
                                       PairCase::Bd_Zero,   PairCase::Zero_Bd,   PairCase::Zero_Zero};
    return all[rng.pick(6)];
}

CompPair random_pair(PairCase tag, Eigen::Index m, Rng& rng, double scale) {
    const SocVector zero = SocVector::Zero(m);
    switch (tag) {
        case PairCase::IntK_Zero:
            return CompPair{interior_point(m, rng, scale), zero, tag, std::nullopt};
        case PairCase::Zero_IntK:
            return CompPair{zero, interior_point(m, rng, scale), tag, std::nullopt};
        case PairCase::Bd_Zero:
            return CompPair{boundary_point(m, rng, scale), zero, tag, std::nullopt};
        case PairCase::Zero_Bd:
            return CompPair{zero, boundary_point(m, rng, scale), tag, std::nullopt};
        case PairCase::Zero_Zero:
            return CompPair{zero, zero, tag, std::nullopt};
        case PairCase::Bd_Bd: {
            const SocVector x = boundary_point(m, rng, scale);
            const double k = 0.4 + rng.unit();
            return CompPair{x, k * x.hat(), tag, k};
        }
    }
    throw Error("random_pair: unreachable");
}

int tangent_row_count(PairCase tag) {
    switch (tag) {
        case PairCase::IntK_Zero:
        case PairCase::Zero_IntK:
        case PairCase::Bd_Bd:
            return 1;
        case PairCase::Bd_Zero:
        case PairCase::Zero_Bd:
            return 3;
        case PairCase::Zero_Zero:
            return 6;
    }
    return 0;
}

std::pair<SocVector, SocVector> random_tangent(const CompPair& pair, Rng& rng, double scale,
                                               int row) {
    const Eigen::Index m = pair.x.dim();
    const SocVector zero = SocVector::Zero(m);
    if (row < 0) row = rng.pick(tangent_row_count(pair.case_tag));

    switch (pair.case_tag) {
        case PairCase::IntK_Zero:
            return {SocVector(scale * rng.vector(m, -1.0, 1.0)), zero};
        case PairCase::Zero_IntK:
            return {zero, SocVector(scale * rng.vector(m, -1.0, 1.0))};

        case PairCase::Bd_Bd: {
            // d perp y (= perp x-hat), then w from w1 = k d1 + beta,
            // w2 = -k d2 - beta xb2, which realizes x1 w-hat - y1 d = beta x.
            const double k = *pair.k_ratio;
            const Eigen::VectorXd xb2 = pair.x.tail() / pair.x.tail_norm();
            const SocVector d = boundary_tangent(pair.x, rng, scale, 0.0);
            const double beta = scale * rng.uniform(-1.0, 1.0);
            return {d, make(k * d.head() + beta, -k * d.tail() - beta * xb2)};
        }

        case PairCase::Bd_Zero:
            switch (row) {
                case 0:  // d interior to T_K(x), w = 0
                    return {boundary_tangent(pair.x, rng, scale, scale * (0.2 + rng.unit())), zero};
                case 1:  // d on bd T_K(x), w = 0
                    return {boundary_tangent(pair.x, rng, scale, 0.0), zero};
                default:  // d perp x-hat, w on the reflected ray
                    return {boundary_tangent(pair.x, rng, scale, 0.0),
                            scale * (0.2 + rng.unit()) * pair.x.hat()};
            }

        case PairCase::Zero_Bd:
            switch (row) {
                case 0:
                    return {zero, boundary_tangent(pair.y, rng, scale, scale * (0.2 + rng.unit()))};
                case 1:
                    return {zero, boundary_tangent(pair.y, rng, scale, 0.0)};
                default:
                    return {scale * (0.2 + rng.unit()) * pair.y.hat(),
                            boundary_tangent(pair.y, rng, scale, 0.0)};
            }

        case PairCase::Zero_Zero: {
            // T_Omega(0,0) = Omega: tangent pairs are complementarity pairs.
            static constexpr PairCase sub[] = {PairCase::IntK_Zero, PairCase::Zero_IntK,
                                               PairCase::Bd_Bd,     PairCase::Bd_Zero,
                                               PairCase::Zero_Bd,   PairCase::Zero_Zero};
            const CompPair base = random_pair(sub[row], m, rng, scale);
            return {base.x, base.y};
        }
    }
    throw Error("random_tangent: unreachable");
}

std::pair<SocVector, SocVector> random_tangent2_member(const CompPair& pair, const SocVector& d,
                                                       const SocVector& w, Rng& rng, double scale,
                                                       int branch, const TolerancePolicy& tol) {
    const Eigen::Index m = pair.x.dim();
    const SocVector zero = SocVector::Zero(m);

    switch (pair.case_tag) {
        case PairCase::IntK_Zero:
            return {SocVector(scale * rng.vector(m, -1.0, 1.0)), zero};
        case PairCase::Zero_IntK:
            return {zero, SocVector(scale * rng.vector(m, -1.0, 1.0))};

        case PairCase::Bd_Bd: {
            // Free data: tail of p and head of q. The two boundary equations
            // and the matching-tails equation pin the rest.
            const double x1 = pair.x.head();
            const double y1 = pair.y.head();
            const Eigen::VectorXd xb2 = pair.x.tail() / pair.x.tail_norm();
            const Eigen::VectorXd yb2 = pair.y.tail() / pair.y.tail_norm();
            const SocVector p = t2_element(pair.x, d, rng, scale, 0.0);
            const double q1 = scale * rng.uniform(-1.0, 1.0);
            const Eigen::VectorXd mix =
                (x1 * w.head() - y1 * d.head()) *
                ((w.tail() - w.head() * yb2) / y1 - (d.tail() - d.head() * xb2) / x1);
            const Eigen::VectorXd q2 =
                (mix - p.head() * pair.y.tail() - q1 * pair.x.tail() - y1 * p.tail()) / x1;
            return {p, make(q1, q2)};
        }

        case PairCase::Bd_Zero: {
            const bool w_vanishes = w.norm() <= tol.membership(std::max(d.norm(), w.norm()));
            if (!w_vanishes) {
                // d perp x-hat, w in R++ x-hat: q tail pinned by p-boundary row.
                const double n2 = pair.x.tail_norm();
                const Eigen::VectorXd xb2 = pair.x.tail() / n2;
                const SocVector p = t2_element(pair.x, d, rng, scale, 0.0);
                const double q1 = scale * rng.uniform(-1.0, 1.0);
                const Eigen::VectorXd q2 = -q1 * xb2 - (2.0 * w.head() / n2) * d.tail() -
                                           (2.0 * d.head() / n2) * w.tail();
                return {p, make(q1, q2)};
            }
            const Eigen::VectorXd xb2 = pair.x.tail() / pair.x.tail_norm();
            const double margin = -d.head() + xb2.dot(d.tail());
            if (margin < -tol.membership(d.norm()))  // interior direction: q = 0, p free
                return {SocVector(scale * rng.vector(m, -1.0, 1.0)), zero};
            if (branch < 0) branch = rng.pick(2);
            if (branch == 0)  // p anywhere in T2, q = 0
                return {t2_element(pair.x, d, rng, scale, scale * rng.unit()), zero};
            // p on bd T2, q on the reflected ray
            return {t2_element(pair.x, d, rng, scale, 0.0),
                    scale * rng.unit() * pair.x.hat()};
        }

        case PairCase::Zero_Bd: {
            const bool d_vanishes = d.norm() <= tol.membership(std::max(d.norm(), w.norm()));
            if (!d_vanishes) {
                const double n2 = pair.y.tail_norm();
                const Eigen::VectorXd yb2 = pair.y.tail() / n2;
                const SocVector q = t2_element(pair.y, w, rng, scale, 0.0);
                const double p1 = scale * rng.uniform(-1.0, 1.0);
                const Eigen::VectorXd p2 = -p1 * yb2 - (2.0 * w.head() / n2) * d.tail() -
                                           (2.0 * d.head() / n2) * w.tail();
                return {make(p1, p2), q};
            }
            const Eigen::VectorXd yb2 = pair.y.tail() / pair.y.tail_norm();
            const double margin = -w.head() + yb2.dot(w.tail());
            if (margin < -tol.membership(w.norm())) return {zero, SocVector(scale * rng.vector(m, -1.0, 1.0))};
            if (branch < 0) branch = rng.pick(2);
            if (branch == 0) return {zero, t2_element(pair.y, w, rng, scale, scale * rng.unit())};
            return {scale * rng.unit() * pair.y.hat(), t2_element(pair.y, w, rng, scale, 0.0)};
        }

        case PairCase::Zero_Zero: {
            const CompPair base = classify_pair(d, w, tol);
            return random_tangent(base, rng, scale);
        }
    }
    throw Error("random_tangent2_member: unreachable");
}

std::pair<SocVector, SocVector> support_maximizer(const CompPair& pair, const SocVector& d,
                                                  const SocVector& w, const TolerancePolicy& tol) {
    const Eigen::Index m = pair.x.dim();
    const SocVector zero = SocVector::Zero(m);

    switch (pair.case_tag) {
        case PairCase::IntK_Zero:
        case PairCase::Zero_IntK:
        case PairCase::Zero_Zero:
            return {zero, zero};

        case PairCase::Bd_Zero: {
            const Eigen::VectorXd xb2 = pair.x.tail() / pair.x.tail_norm();
            const double margin = -d.head() + xb2.dot(d.tail());
            const bool w_vanishes = w.norm() <= tol.membership(std::max(d.norm(), w.norm()));
            if (w_vanishes && margin < -tol.membership(d.norm())) return {zero, zero};
            const double x1 = pair.x.head();
            const double c = (d.tail().squaredNorm() - d.head() * d.head()) / (2.0 * x1 * x1);
            const SocVector p = c * pair.x.hat();
            if (w_vanishes) return {p, zero};
            const double n2 = pair.x.tail_norm();
            const Eigen::VectorXd q2 =
                -(2.0 * w.head() / n2) * d.tail() - (2.0 * d.head() / n2) * w.tail();
            return {p, make(0.0, q2)};
        }

        case PairCase::Zero_Bd: {
            const Eigen::VectorXd yb2 = pair.y.tail() / pair.y.tail_norm();
            const double margin = -w.head() + yb2.dot(w.tail());
            const bool d_vanishes = d.norm() <= tol.membership(std::max(d.norm(), w.norm()));
            if (d_vanishes && margin < -tol.membership(w.norm())) return {zero, zero};
            const double y1 = pair.y.head();
            const double c = (w.tail().squaredNorm() - w.head() * w.head()) / (2.0 * y1 * y1);
            const SocVector q = c * pair.y.hat();
            if (d_vanishes) return {zero, q};
            const double n2 = pair.y.tail_norm();
            const Eigen::VectorXd p2 =
                -(2.0 * w.head() / n2) * d.tail() - (2.0 * d.head() / n2) * w.tail();
            return {make(0.0, p2), q};
        }

        case PairCase::Bd_Bd: {
            // Every member attains the closed-form value; build one with the
            // free data zeroed out.
            const double x1 = pair.x.head();
            const double y1 = pair.y.head();
            const Eigen::VectorXd xb2 = pair.x.tail() / pair.x.tail_norm();
            const Eigen::VectorXd yb2 = pair.y.tail() / pair.y.tail_norm();
            const double curv = (d.tail().squaredNorm() - d.head() * d.head()) / x1;
            const SocVector p = make(curv, Eigen::VectorXd::Zero(m - 1));
            const Eigen::VectorXd mix =
                (x1 * w.head() - y1 * d.head()) *
                ((w.tail() - w.head() * yb2) / y1 - (d.tail() - d.head() * xb2) / x1);
            const Eigen::VectorXd q2 = (mix - p.head() * pair.y.tail()) / x1;
            return {p, make(0.0, q2)};
        }
    }
    throw Error("support_maximizer: unreachable");
}

}  // namespace socvc::gen
