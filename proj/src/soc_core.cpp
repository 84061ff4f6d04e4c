#include "socvc/soc_core.hpp"

namespace socvc {

SpectralDecomp spectral_decompose(const SocVector& z) {
    const Eigen::Index m = z.dim();
    const Eigen::VectorXd z2 = z.tail();
    const double n2 = z2.norm();

    Eigen::VectorXd dir(m - 1);
    if (n2 > 0.0) {
        dir = z2 / n2;
    } else {
        dir.setZero();
        dir[0] = 1.0;
    }

    Eigen::VectorXd u1(m), u2(m);
    u1[0] = 0.5;
    u1.tail(m - 1) = -0.5 * dir;
    u2[0] = 0.5;
    u2.tail(m - 1) = 0.5 * dir;

    return SpectralDecomp{z.head() - n2, z.head() + n2, SocVector(std::move(u1)),
                          SocVector(std::move(u2))};
}

const char* to_string(RegionTag tag) {
    switch (tag) {
        case RegionTag::IntK: return "int-K";
        case RegionTag::BdKNonzero: return "bd-K";
        case RegionTag::Zero: return "origin";
        case RegionTag::IntKPolar: return "int-polar";
        case RegionTag::BdKPolarNonzero: return "bd-polar";
        case RegionTag::Outside: return "outside";
    }
    return "?";
}

ConeRegion classify_region(const SocVector& z, const TolerancePolicy& tol) {
    const double n2 = z.tail_norm();
    const double lambda1 = z.head() - n2;
    const double lambda2 = z.head() + n2;
    const double t = tol.classify(z.norm());

    // Snap near-zero spectral values before reading the sign table.
    const double l1 = std::abs(lambda1) <= t ? 0.0 : lambda1;
    const double l2 = std::abs(lambda2) <= t ? 0.0 : lambda2;

    RegionTag tag;
    if (l1 > 0.0)
        tag = RegionTag::IntK;
    else if (l2 < 0.0)
        tag = RegionTag::IntKPolar;
    else if (l1 == 0.0 && l2 > 0.0)
        tag = RegionTag::BdKNonzero;
    else if (l1 == 0.0 && l2 == 0.0)
        tag = RegionTag::Zero;
    else if (l2 == 0.0)
        tag = RegionTag::BdKPolarNonzero;
    else
        tag = RegionTag::Outside;

    return ConeRegion{tag, lambda1, lambda2, t};
}

PhiDerivatives phi_derivatives(const Eigen::VectorXd& x2, const Eigen::VectorXd& d,
                               const TolerancePolicy& tol) {
    if (d.size() != x2.size())
        throw DimensionMismatch("phi_derivatives: direction dimension mismatch");
    const double n = x2.norm();
    if (n <= tol.membership(1.0)) throw NearZeroVector("phi_derivatives: ||x2|| is near zero");

    const Eigen::VectorXd xb = x2 / n;
    const double xd = xb.dot(d);

    PhiDerivatives out;
    out.value = xb;
    out.jac_d = (d - xd * xb) / n;
    out.second_dd = -2.0 * (xd / (n * n)) * d + ((3.0 * xd * xd - d.squaredNorm()) / (n * n * n)) * x2;
    return out;
}

}  // namespace socvc
