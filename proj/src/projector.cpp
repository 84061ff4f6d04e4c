#include "socvc/projector.hpp"

namespace socvc {

namespace {

SocVector make(double head, Eigen::VectorXd tail) {
    Eigen::VectorXd v(tail.size() + 1);
    v[0] = head;
    v.tail(tail.size()) = tail;
    return SocVector(std::move(v));
}

SocVector zero_like(const SocVector& z) { return SocVector::Zero(z.dim()); }

}  // namespace

SocVector project(const SocVector& z) {
    const SpectralDecomp s = spectral_decompose(z);
    if (s.lambda1 >= 0.0) return z;  // both spectral values kept: exact identity
    if (s.lambda2 <= 0.0) return SocVector::Zero(z.dim());
    return std::max(s.lambda2, 0.0) * s.u2;
}

SocVector dir_deriv(const SocVector& z, const SocVector& h, const TolerancePolicy& tol) {
    if (h.dim() != z.dim()) throw DimensionMismatch("dir_deriv: dimension mismatch");
    const ConeRegion region = classify_region(z, tol);

    switch (region.tag) {
        case RegionTag::IntK:
            return h;
        case RegionTag::IntKPolar:
            return zero_like(z);
        case RegionTag::Zero:
            // Positive homogeneity of the projection.
            return project(h);
        default:
            break;
    }

    // z2 != 0 in the remaining regions. Differentiate the spectral formula:
    // the lambda1 branch contributes only where the plus function is active,
    // the lambda2 branch is smooth, and the frame rotation enters through
    // DPhi(z2).
    const Eigen::VectorXd z2 = z.tail();
    const double n2 = z2.norm();
    const Eigen::VectorXd zb2 = z2 / n2;
    const Eigen::VectorXd h2 = h.tail();
    const double a = h.head() - zb2.dot(h2);  // direction seen by lambda1
    const double b = h.head() + zb2.dot(h2);  // direction seen by lambda2
    const Eigen::VectorXd dphi_h2 = (h2 - zb2.dot(h2) * zb2) / n2;
    const SpectralDecomp s = spectral_decompose(z);

    switch (region.tag) {
        case RegionTag::BdKNonzero:
            return std::max(a, 0.0) * s.u1 + b * s.u2 +
                   make(0.0, 0.5 * region.lambda2 * dphi_h2);
        case RegionTag::Outside:
            return b * s.u2 + make(0.0, 0.5 * region.lambda2 * dphi_h2);
        case RegionTag::BdKPolarNonzero:
            return std::max(b, 0.0) * s.u2;
        default:
            break;
    }
    throw Error("dir_deriv: unreachable");
}

namespace {

// Case iii helpers (base point at the origin, xi != 0 with xi2 != 0).

SocVector origin_outside_formula(const SocVector& xi, const SocVector& eta) {
    const Eigen::VectorXd xi2 = xi.tail();
    const double n2 = xi2.norm();
    const Eigen::VectorXd xb = xi2 / n2;
    const Eigen::VectorXd eta2 = eta.tail();
    const double xe = xb.dot(eta2);
    const double head = 0.5 * (eta.head() + xe);
    const Eigen::VectorXd tail =
        0.5 * ((eta.head() - (xi.head() / n2) * xe) * xb + (1.0 + xi.head() / n2) * eta2);
    return make(head, tail);
}

SocVector origin_bd_nontangent_formula(const SocVector& xi, const SocVector& eta) {
    const Eigen::VectorXd xb = xi.tail() / xi.tail_norm();
    const Eigen::VectorXd eta2 = eta.tail();
    const double xe = xb.dot(eta2);
    return make(0.5 * (eta.head() + xe), 0.5 * (2.0 * eta2 + (eta.head() - xe) * xb));
}

SocVector origin_bdpolar_nontangent_formula(const SocVector& xi, const SocVector& eta) {
    const Eigen::VectorXd xb = xi.tail() / xi.tail_norm();
    const double c = 0.5 * (eta.head() + xb.dot(eta.tail()));
    return make(c, c * xb);
}

// Case iv/v helpers (base point on bd K or bd K-polar, away from zero).

SocVector bd_boundary_dir_formula(const Eigen::VectorXd& zb2, double n2, const SocVector& xi,
                                  const SocVector& eta) {
    const double curv = (xi.tail().squaredNorm() - xi.head() * xi.head()) / n2;
    const Eigen::VectorXd eta2 = eta.tail();
    const double ze = zb2.dot(eta2);
    return make(0.5 * (eta.head() + ze + curv),
                0.5 * ((eta.head() - ze - curv) * zb2 + 2.0 * eta2));
}

SocVector bd_nontangent_formula(const Eigen::VectorXd& zb2, double n2, const SocVector& xi,
                                const SocVector& eta) {
    const Eigen::VectorXd xi2 = xi.tail();
    const Eigen::VectorXd eta2 = eta.tail();
    const double zx = zb2.dot(xi2);
    const double ze = zb2.dot(eta2);
    const double head = 0.5 * (eta.head() + ze + (xi2.squaredNorm() - zx * zx) / n2);
    const Eigen::VectorXd tail =
        0.5 * ((eta.head() - ze -
                (xi2.squaredNorm() - 3.0 * zx * zx + 2.0 * xi.head() * zx) / n2) *
                   zb2 +
               2.0 * eta2 + 2.0 * ((xi.head() - zx) / n2) * xi2);
    return make(head, tail);
}

SocVector bdpolar_boundary_dir_formula(const Eigen::VectorXd& zb2, double n2, const SocVector& xi,
                                       const SocVector& eta) {
    const double curv = (xi.tail().squaredNorm() - xi.head() * xi.head()) / n2;
    const double c = 0.5 * (eta.head() + zb2.dot(eta.tail()) + curv);
    return make(c, c * zb2);
}

SocVector bdpolar_nontangent_formula(const Eigen::VectorXd& zb2, double n2, const SocVector& xi,
                                     const SocVector& eta) {
    const Eigen::VectorXd xi2 = xi.tail();
    const double zx = zb2.dot(xi2);
    const double ze = zb2.dot(eta.tail());
    const double head = 0.5 * (eta.head() + ze + (xi2.squaredNorm() - zx * zx) / n2);
    const Eigen::VectorXd tail =
        0.5 * ((eta.head() + ze +
                (xi2.squaredNorm() - 3.0 * zx * zx - 2.0 * xi.head() * zx) / n2) *
                   zb2 +
               2.0 * ((xi.head() + zx) / n2) * xi2);
    return make(head, tail);
}

SocVector outside_formula(const SocVector& z, const SocVector& xi, const SocVector& eta) {
    const Eigen::VectorXd z2 = z.tail();
    const double n2 = z2.norm();
    const Eigen::VectorXd zb2 = z2 / n2;
    const Eigen::VectorXd xi2 = xi.tail();
    const Eigen::VectorXd eta2 = eta.tail();
    const double zx = zb2.dot(xi2);
    const double ze = zb2.dot(eta2);
    const double head = 0.5 * (eta.head() + ze + (xi2.squaredNorm() - zx * zx) / n2);
    const Eigen::VectorXd tail =
        0.5 * ((eta.head() - (z.head() / n2) * ze -
                (z.head() / (n2 * n2)) * (xi2.squaredNorm() - 3.0 * zx * zx) -
                2.0 * xi.head() * zx / n2) *
                   zb2 +
               2.0 * ((n2 * xi.head() - z.head() * zx) / (n2 * n2)) * xi2 +
               (1.0 + z.head() / n2) * eta2);
    return make(head, tail);
}

}  // namespace

SecondDirDerivResult second_dir_deriv_traced(const SocVector& z, const SocVector& xi,
                                             const SocVector& eta, const TolerancePolicy& tol) {
    if (xi.dim() != z.dim() || eta.dim() != z.dim())
        throw DimensionMismatch("second_dir_deriv: dimension mismatch");
    const ConeRegion region = classify_region(z, tol);

    switch (region.tag) {
        case RegionTag::IntK:
            return {eta, "z int-K"};
        case RegionTag::IntKPolar:
            return {zero_like(z), "z int-polar"};

        case RegionTag::Zero: {
            const ConeRegion dir = classify_region(xi, tol);
            switch (dir.tag) {
                case RegionTag::IntK:
                    return {eta, "z=0; xi int-K"};
                case RegionTag::IntKPolar:
                    return {zero_like(z), "z=0; xi int-polar"};
                case RegionTag::Outside:
                    return {origin_outside_formula(xi, eta), "z=0; xi outside"};
                case RegionTag::BdKNonzero: {
                    const Eigen::VectorXd xb = xi.tail() / xi.tail_norm();
                    const double margin = -eta.head() + xb.dot(eta.tail());
                    const double t = tol.membership(eta.norm());
                    if (margin <= t) return {eta, "z=0; xi bd-K; eta tangent"};
                    return {origin_bd_nontangent_formula(xi, eta), "z=0; xi bd-K; eta non-tangent"};
                }
                case RegionTag::BdKPolarNonzero: {
                    const Eigen::VectorXd xb = xi.tail() / xi.tail_norm();
                    const double margin = eta.head() + xb.dot(eta.tail());
                    const double t = tol.membership(eta.norm());
                    if (margin <= t) return {zero_like(z), "z=0; xi bd-polar; eta tangent"};
                    return {origin_bdpolar_nontangent_formula(xi, eta),
                            "z=0; xi bd-polar; eta non-tangent"};
                }
                case RegionTag::Zero:
                    return {project(eta), "z=0; xi=0"};
            }
            break;
        }

        case RegionTag::BdKNonzero: {
            const Eigen::VectorXd z2 = z.tail();
            const double n2 = z2.norm();
            const Eigen::VectorXd zb2 = z2 / n2;
            const double margin = -xi.head() + zb2.dot(xi.tail());
            const double t = tol.membership(xi.norm());
            if (margin < -t) return {eta, "z bd-K; xi int-tangent"};
            if (margin <= t) {
                const double lhs = eta.tail().dot(z2) - eta.head() * z.head();
                const double rhs = xi.head() * xi.head() - xi.tail().squaredNorm();
                const double t2 =
                    tol.membership(std::max(eta.norm() * z.norm(), xi.norm() * xi.norm()));
                if (lhs - rhs <= t2) return {eta, "z bd-K; xi bd-tangent; eta in-T2"};
                return {bd_boundary_dir_formula(zb2, n2, xi, eta),
                        "z bd-K; xi bd-tangent; eta out-T2"};
            }
            return {bd_nontangent_formula(zb2, n2, xi, eta), "z bd-K; xi non-tangent"};
        }

        case RegionTag::BdKPolarNonzero: {
            const Eigen::VectorXd z2 = z.tail();
            const double n2 = z2.norm();
            const Eigen::VectorXd zb2 = z2 / n2;
            const double margin = xi.head() + zb2.dot(xi.tail());
            const double t = tol.membership(xi.norm());
            if (margin < -t) return {zero_like(z), "z bd-polar; xi int-tangent"};
            if (margin <= t) {
                const double lhs = eta.tail().dot(z2) - eta.head() * z.head();
                const double rhs = xi.head() * xi.head() - xi.tail().squaredNorm();
                const double t2 =
                    tol.membership(std::max(eta.norm() * z.norm(), xi.norm() * xi.norm()));
                if (lhs - rhs <= t2) return {zero_like(z), "z bd-polar; xi bd-tangent; eta in-T2"};
                return {bdpolar_boundary_dir_formula(zb2, n2, xi, eta),
                        "z bd-polar; xi bd-tangent; eta out-T2"};
            }
            return {bdpolar_nontangent_formula(zb2, n2, xi, eta), "z bd-polar; xi non-tangent"};
        }

        case RegionTag::Outside:
            return {outside_formula(z, xi, eta), "z outside"};
    }
    throw Error("second_dir_deriv: unreachable");
}

}  // namespace socvc
