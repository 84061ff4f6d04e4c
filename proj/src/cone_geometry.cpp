#include "socvc/cone_geometry.hpp"

#include "socvc/projector.hpp"

#include <Eigen/SVD>

namespace socvc {

namespace {

double pair_scale(const SocVector& a, const SocVector& b) {
    return std::max(a.norm(), b.norm());
}

bool is_zero(const SocVector& v, double companion_scale, const TolerancePolicy& tol) {
    return v.norm() <= tol.membership(companion_scale);
}

bool perp(const SocVector& a, const SocVector& b, const TolerancePolicy& tol) {
    return std::abs(a.dot(b)) <= tol.membership(a.norm() * b.norm());
}

// v = t * x with t >= 0 (within tolerance); rejects when the span residual
// or a negative coefficient exceeds tolerance. Returns the coefficient.
std::optional<double> nonneg_ray_coeff(const SocVector& v, const SocVector& x,
                                       const TolerancePolicy& tol) {
    const SpanFit fit = span_fit(v.vec(), x.vec());
    if (fit.residual > tol.membership(v.norm())) return std::nullopt;
    if (fit.coeff * x.norm() < -tol.membership(v.norm())) return std::nullopt;
    return fit.coeff;
}

std::optional<double> nonpos_ray_coeff(const SocVector& v, const SocVector& x,
                                       const TolerancePolicy& tol) {
    auto c = nonneg_ray_coeff(-v, x, tol);
    if (!c) return std::nullopt;
    return -*c;
}

// Boundary half-space margin of d against T_K(x) for x in bd K \ {0}:
//   -d1 + xb2^T d2   (polar: d1 + xb2^T d2); inside iff <= 0.
double tangent_margin(const SocVector& x, const SocVector& d, bool polar) {
    const Eigen::VectorXd xb2 = x.tail() / x.tail_norm();
    return (polar ? d.head() : -d.head()) + xb2.dot(d.tail());
}

// Margin of w against T2_K(x; d) in the boundary/boundary row:
//   w2^T x2 - w1 x1 - (d1^2 - ||d2||^2); inside iff <= 0.
double tangent2_margin(const SocVector& x, const SocVector& d, const SocVector& w) {
    return w.tail().dot(x.tail()) - w.head() * x.head() -
           (d.head() * d.head() - d.tail().squaredNorm());
}

double tangent2_scale(const SocVector& x, const SocVector& d, const SocVector& w) {
    return std::max(w.norm() * x.norm(), d.norm() * d.norm());
}

bool in_bd_tangent2_K(const SocVector& x, const SocVector& d, const SocVector& w,
                      const TolerancePolicy& tol) {
    return std::abs(tangent2_margin(x, d, w)) <= tol.membership(tangent2_scale(x, d, w));
}

}  // namespace

SpanFit span_fit(const Eigen::VectorXd& v, const Eigen::VectorXd& x) {
    const double xx = x.squaredNorm();
    if (xx == 0.0) throw NearZeroVector("span_fit: spanning vector is zero");
    const double t = x.dot(v) / xx;
    return SpanFit{t, (v - t * x).norm()};
}

bool in_tangent_K(const SocVector& x, const SocVector& d, bool polar, const TolerancePolicy& tol) {
    if (d.dim() != x.dim()) throw DimensionMismatch("in_tangent_K: dimension mismatch");
    const ConeRegion rx = classify_region(x, tol);
    if (polar ? !rx.in_polar() : !rx.in_K())
        throw NotInCone("in_tangent_K: base point not in the cone");

    const ConeRegion rd = classify_region(d, tol);
    switch (rx.tag) {
        case RegionTag::IntK:
        case RegionTag::IntKPolar:
            return true;
        case RegionTag::Zero:
            // T_K(0) = K, T_{K-polar}(0) = K-polar.
            return polar ? rd.in_polar() : rd.in_K();
        default:
            return tangent_margin(x, d, polar) <= tol.membership(d.norm());
    }
}

bool in_tangent2_K(const SocVector& x, const SocVector& d, const SocVector& w, bool polar,
                   bool boundary_only, const TolerancePolicy& tol) {
    if (d.dim() != x.dim() || w.dim() != x.dim())
        throw DimensionMismatch("in_tangent2_K: dimension mismatch");
    const ConeRegion rx = classify_region(x, tol);
    if (polar ? !rx.in_polar() : !rx.in_K())
        throw NotInCone("in_tangent2_K: base point not in the cone");
    if (!in_tangent_K(x, d, polar, tol))
        throw NotInTangent("in_tangent2_K: direction not in the tangent cone");

    if (rx.tag == RegionTag::IntK || rx.tag == RegionTag::IntKPolar)
        return !boundary_only;  // T2 = R^m

    if (rx.tag == RegionTag::Zero) {
        // T2_K(0; d) = T_K(d).
        const ConeRegion rd = classify_region(d, tol);
        switch (rd.tag) {
            case RegionTag::IntK:
            case RegionTag::IntKPolar:
                return !boundary_only;
            case RegionTag::Zero: {
                // T_K(0) = K; boundary is bd K.
                const ConeRegion rw = classify_region(w, tol);
                if (polar)
                    return boundary_only ? rw.tag == RegionTag::BdKPolarNonzero ||
                                               rw.tag == RegionTag::Zero
                                         : rw.in_polar();
                return boundary_only ? rw.tag == RegionTag::BdKNonzero || rw.tag == RegionTag::Zero
                                     : rw.in_K();
            }
            default: {
                const double margin = tangent_margin(d, w, polar);
                const double t = tol.membership(w.norm());
                return boundary_only ? std::abs(margin) <= t : margin <= t;
            }
        }
    }

    // x on the boundary, away from zero.
    const double dir_margin = tangent_margin(x, d, polar);
    if (dir_margin < -tol.membership(d.norm())) return !boundary_only;  // interior direction
    const double margin = tangent2_margin(x, d, w);
    const double t = tol.membership(tangent2_scale(x, d, w));
    return boundary_only ? std::abs(margin) <= t : margin <= t;
}

const char* to_string(PairCase c) {
    switch (c) {
        case PairCase::IntK_Zero: return "intK/zero";
        case PairCase::Zero_IntK: return "zero/intK";
        case PairCase::Bd_Bd: return "bd/bd";
        case PairCase::Bd_Zero: return "bd/zero";
        case PairCase::Zero_Bd: return "zero/bd";
        case PairCase::Zero_Zero: return "zero/zero";
    }
    return "?";
}

CompPair classify_pair(const SocVector& x, const SocVector& y, const TolerancePolicy& tol) {
    if (y.dim() != x.dim()) throw DimensionMismatch("classify_pair: dimension mismatch");

    const double violation = (project(x - y) - x).norm();
    if (violation > tol.membership(std::max(1.0, pair_scale(x, y))))
        throw NotInOmega("classify_pair: projection identity fails", violation);

    const ConeRegion rx = classify_region(x, tol);
    const ConeRegion ry = classify_region(y, tol);

    if (rx.tag == RegionTag::IntK && ry.tag == RegionTag::Zero)
        return CompPair{x, y, PairCase::IntK_Zero, std::nullopt};
    if (rx.tag == RegionTag::Zero && ry.tag == RegionTag::IntK)
        return CompPair{x, y, PairCase::Zero_IntK, std::nullopt};
    if (rx.tag == RegionTag::BdKNonzero && ry.tag == RegionTag::Zero)
        return CompPair{x, y, PairCase::Bd_Zero, std::nullopt};
    if (rx.tag == RegionTag::Zero && ry.tag == RegionTag::BdKNonzero)
        return CompPair{x, y, PairCase::Zero_Bd, std::nullopt};
    if (rx.tag == RegionTag::Zero && ry.tag == RegionTag::Zero)
        return CompPair{x, y, PairCase::Zero_Zero, std::nullopt};
    if (rx.tag == RegionTag::BdKNonzero && ry.tag == RegionTag::BdKNonzero) {
        const double k = y.head() / x.head();
        const double mismatch = (y - k * x.hat()).norm();
        if (k <= 0.0 || mismatch > tol.membership(y.norm()))
            throw NotInOmega("classify_pair: boundary pair is not a reflected ray", mismatch);
        return CompPair{x, y, PairCase::Bd_Bd, k};
    }
    throw NotInOmega("classify_pair: incompatible cone regions", violation);
}

TangentPair make_tangent_pair(const CompPair& pair, const SocVector& d, const SocVector& w,
                              const TolerancePolicy& tol) {
    if (!in_tangent_Omega(pair, d, w, tol))
        throw NotInTangent("make_tangent_pair: (d, w) not tangent to Omega at the pair");
    return TangentPair{d, w, pair};
}

bool in_tangent_Omega(const CompPair& pair, const SocVector& d, const SocVector& w,
                      const TolerancePolicy& tol, const char** rule) {
    if (d.dim() != pair.x.dim() || w.dim() != pair.x.dim())
        throw DimensionMismatch("in_tangent_Omega: dimension mismatch");
    const char* r = "";
    bool ok = false;
    const double dw_scale = pair_scale(d, w);

    switch (pair.case_tag) {
        case PairCase::IntK_Zero:
            r = "d free; w=0";
            ok = is_zero(w, dw_scale, tol);
            break;
        case PairCase::Zero_IntK:
            r = "d=0; w free";
            ok = is_zero(d, dw_scale, tol);
            break;
        case PairCase::Bd_Bd: {
            r = "d perp y; w perp x; x1*w-hat - y1*d in span(x)";
            const SocVector residual_vec =
                pair.x.head() * w.hat() - pair.y.head() * d;
            const SpanFit fit = span_fit(residual_vec.vec(), pair.x.vec());
            ok = perp(d, pair.y, tol) && perp(w, pair.x, tol) &&
                 fit.residual <= tol.membership(std::max(residual_vec.norm(), dw_scale));
            break;
        }
        case PairCase::Bd_Zero: {
            if (in_tangent_K(pair.x, d, false, tol) && is_zero(w, dw_scale, tol)) {
                r = "d in T_K(x); w=0";
                ok = true;
            } else if (perp(d, pair.x.hat(), tol) &&
                       nonneg_ray_coeff(w, pair.x.hat(), tol).has_value()) {
                r = "d perp x-hat; w in R+ x-hat";
                ok = true;
            }
            break;
        }
        case PairCase::Zero_Bd: {
            if (is_zero(d, dw_scale, tol) && in_tangent_K(pair.y, w, false, tol)) {
                r = "d=0; w in T_K(y)";
                ok = true;
            } else if (nonneg_ray_coeff(d, pair.y.hat(), tol).has_value() &&
                       perp(w, pair.y.hat(), tol)) {
                r = "d in R+ y-hat; w perp y-hat";
                ok = true;
            }
            break;
        }
        case PairCase::Zero_Zero: {
            r = "d in K; w in K; d perp w";
            ok = classify_region(d, tol).in_K() && classify_region(w, tol).in_K() &&
                 perp(d, w, tol);
            break;
        }
    }
    if (rule) *rule = r;
    return ok;
}

std::vector<Eigen::VectorXd> lin_tangent_basis(const CompPair& pair, const TolerancePolicy& tol) {
    const Eigen::Index m = pair.x.dim();
    std::vector<Eigen::VectorXd> basis;

    auto embedded = [m](const Eigen::VectorXd& v, bool second_block) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(2 * m);
        e.segment(second_block ? m : 0, m) = v;
        return e;
    };

    // Orthonormal basis of the orthogonal complement of a single vector.
    auto hyperplane_basis = [&](const Eigen::VectorXd& normal, bool second_block) {
        Eigen::MatrixXd row = normal.transpose();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(row, Eigen::ComputeFullV);
        for (Eigen::Index j = 1; j < m; ++j) basis.push_back(embedded(svd.matrixV().col(j), second_block));
    };

    switch (pair.case_tag) {
        case PairCase::IntK_Zero:
            for (Eigen::Index i = 0; i < m; ++i)
                basis.push_back(embedded(Eigen::VectorXd::Unit(m, i), false));
            break;
        case PairCase::Zero_IntK:
            for (Eigen::Index i = 0; i < m; ++i)
                basis.push_back(embedded(Eigen::VectorXd::Unit(m, i), true));
            break;
        case PairCase::Bd_Zero:
            hyperplane_basis(pair.x.hat().vec(), false);
            break;
        case PairCase::Zero_Bd:
            hyperplane_basis(pair.y.hat().vec(), true);
            break;
        case PairCase::Zero_Zero:
            break;
        case PairCase::Bd_Bd: {
            // Null space of { d perp y, w perp x, x1*w-hat - y1*d in span(x) }
            // by rank-revealing SVD. The span condition contributes the rows
            // (I - xb xb^T)(x1 * R w - y1 * d) = 0 with R = diag(1, -I).
            const Eigen::VectorXd xv = pair.x.vec();
            const Eigen::VectorXd yv = pair.y.vec();
            const Eigen::VectorXd xb = xv / xv.norm();
            Eigen::MatrixXd refl = Eigen::MatrixXd::Identity(m, m);
            refl.bottomRightCorner(m - 1, m - 1) *= -1.0;
            const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(m, m) - xb * xb.transpose();

            Eigen::MatrixXd C(2 + m, 2 * m);
            C.setZero();
            C.row(0).head(m) = yv.transpose();
            C.row(1).tail(m) = xv.transpose();
            C.block(2, 0, m, m) = -pair.y.head() * proj;
            C.block(2, m, m, m) = pair.x.head() * proj * refl;

            Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            const double cutoff = tol.membership(1.0) * sv(0);
            Eigen::Index rank = 0;
            for (Eigen::Index i = 0; i < sv.size(); ++i)
                if (sv(i) > cutoff) ++rank;
            for (Eigen::Index j = rank; j < 2 * m; ++j) basis.push_back(svd.matrixV().col(j));
            break;
        }
    }
    return basis;
}

bool in_tangent2_Omega(const CompPair& pair, const SocVector& d, const SocVector& w,
                       const SocVector& p, const SocVector& q, const TolerancePolicy& tol,
                       const char** rule) {
    if (p.dim() != pair.x.dim() || q.dim() != pair.x.dim())
        throw DimensionMismatch("in_tangent2_Omega: dimension mismatch");
    if (!in_tangent_Omega(pair, d, w, tol))
        throw NotInTangent("in_tangent2_Omega: (d, w) not tangent to Omega at the pair");

    const char* r = "";
    bool ok = false;
    const double pq_scale = pair_scale(p, q);

    switch (pair.case_tag) {
        case PairCase::IntK_Zero:
            r = "intK/zero: q=0";
            ok = is_zero(q, pq_scale, tol);
            break;
        case PairCase::Zero_IntK:
            r = "zero/intK: p=0";
            ok = is_zero(p, pq_scale, tol);
            break;

        case PairCase::Bd_Bd: {
            r = "bd/bd: p,q on bd T2; matching tails";
            const double x1 = pair.x.head();
            const double y1 = pair.y.head();
            const Eigen::VectorXd xb2 = pair.x.tail() / pair.x.tail_norm();
            const Eigen::VectorXd yb2 = pair.y.tail() / pair.y.tail_norm();
            const Eigen::VectorXd mix =
                (x1 * w.head() - y1 * d.head()) *
                ((w.tail() - w.head() * yb2) / y1 - (d.tail() - d.head() * xb2) / x1);
            const Eigen::VectorXd lhs =
                mix - p.head() * pair.y.tail() - q.head() * pair.x.tail();
            const Eigen::VectorXd rhs = x1 * q.tail() + y1 * p.tail();
            const double eq_scale =
                std::max({pq_scale * pair_scale(pair.x, pair.y), mix.norm(), 1.0});
            ok = in_bd_tangent2_K(pair.x, d, p, tol) && in_bd_tangent2_K(pair.y, w, q, tol) &&
                 (lhs - rhs).norm() <= tol.membership(eq_scale);
            break;
        }

        case PairCase::Bd_Zero: {
            const bool w_vanishes = is_zero(w, pair_scale(d, w), tol);
            if (w_vanishes) {
                const double dir_margin = tangent_margin(pair.x, d, false);
                if (dir_margin < -tol.membership(d.norm())) {
                    r = "bd/zero: d int-tangent: q=0";
                    ok = is_zero(q, pq_scale, tol);
                } else {
                    if (tangent2_margin(pair.x, d, p) <=
                            tol.membership(tangent2_scale(pair.x, d, p)) &&
                        is_zero(q, pq_scale, tol)) {
                        r = "bd/zero: d bd-tangent: p in T2; q=0";
                        ok = true;
                    } else if (in_bd_tangent2_K(pair.x, d, p, tol) &&
                               nonneg_ray_coeff(q, pair.x.hat(), tol).has_value()) {
                        r = "bd/zero: d bd-tangent: p on bd T2; q in R+ x-hat";
                        ok = true;
                    } else {
                        r = "bd/zero: d bd-tangent";
                    }
                }
            } else {
                // w = t * x-hat with t > 0 and d perp x-hat.
                r = "bd/zero: w in R++ x-hat: p on bd T2; pinned q tail";
                const double n2 = pair.x.tail_norm();
                const Eigen::VectorXd xb2 = pair.x.tail() / n2;
                const Eigen::VectorXd pinned = -q.head() * xb2 - (2.0 * w.head() / n2) * d.tail() -
                                               (2.0 * d.head() / n2) * w.tail();
                const double eq_scale = std::max(1.0, pair_scale(d, w) * pair_scale(d, w) / n2 +
                                                          q.norm());
                ok = in_bd_tangent2_K(pair.x, d, p, tol) &&
                     (q.tail() - pinned).norm() <= tol.membership(eq_scale);
            }
            break;
        }

        case PairCase::Zero_Bd: {
            const bool d_vanishes = is_zero(d, pair_scale(d, w), tol);
            if (d_vanishes) {
                const double dir_margin = tangent_margin(pair.y, w, false);
                if (dir_margin < -tol.membership(w.norm())) {
                    r = "zero/bd: w int-tangent: p=0";
                    ok = is_zero(p, pq_scale, tol);
                } else {
                    if (is_zero(p, pq_scale, tol) &&
                        tangent2_margin(pair.y, w, q) <=
                            tol.membership(tangent2_scale(pair.y, w, q))) {
                        r = "zero/bd: w bd-tangent: p=0; q in T2";
                        ok = true;
                    } else if (nonneg_ray_coeff(p, pair.y.hat(), tol).has_value() &&
                               in_bd_tangent2_K(pair.y, w, q, tol)) {
                        r = "zero/bd: w bd-tangent: p in R+ y-hat; q on bd T2";
                        ok = true;
                    } else {
                        r = "zero/bd: w bd-tangent";
                    }
                }
            } else {
                r = "zero/bd: d in R++ y-hat: q on bd T2; pinned p tail";
                const double n2 = pair.y.tail_norm();
                const Eigen::VectorXd yb2 = pair.y.tail() / n2;
                const Eigen::VectorXd pinned = -p.head() * yb2 - (2.0 * w.head() / n2) * d.tail() -
                                               (2.0 * d.head() / n2) * w.tail();
                const double eq_scale = std::max(1.0, pair_scale(d, w) * pair_scale(d, w) / n2 +
                                                          p.norm());
                ok = in_bd_tangent2_K(pair.y, w, q, tol) &&
                     (p.tail() - pinned).norm() <= tol.membership(eq_scale);
            }
            break;
        }

        case PairCase::Zero_Zero: {
            // T2_Omega((0,0); (d,w)) = T_Omega(d, w).
            r = "zero/zero: (p,q) in T_Omega(d,w)";
            try {
                const CompPair base = classify_pair(d, w, tol);
                const char* inner = nullptr;
                ok = in_tangent_Omega(base, p, q, tol, &inner);
            } catch (const NotInOmega&) {
                throw NotInTangent(
                    "in_tangent2_Omega: (d, w) does not classify as a pair at the origin");
            }
            break;
        }
    }
    if (rule) *rule = r;
    return ok;
}

bool in_regular_normal_Omega(const CompPair& pair, const SocVector& u, const SocVector& v,
                             const TolerancePolicy& tol, const char** rule) {
    if (u.dim() != pair.x.dim() || v.dim() != pair.x.dim())
        throw DimensionMismatch("in_regular_normal_Omega: dimension mismatch");
    const char* r = "";
    bool ok = false;
    const double uv_scale = pair_scale(u, v);

    switch (pair.case_tag) {
        case PairCase::IntK_Zero:
            r = "intK/zero: u=0";
            ok = is_zero(u, uv_scale, tol);
            break;
        case PairCase::Zero_IntK:
            r = "zero/intK: v=0";
            ok = is_zero(v, uv_scale, tol);
            break;
        case PairCase::Zero_Zero:
            r = "zero/zero: u,v in -K";
            ok = classify_region(-u, tol).in_K() && classify_region(-v, tol).in_K();
            break;
        case PairCase::Bd_Zero:
            r = "bd/zero: u in R- x-hat; <v, x-hat> <= 0";
            ok = nonpos_ray_coeff(u, pair.x.hat(), tol).has_value() &&
                 v.dot(pair.x.hat()) <= tol.membership(v.norm() * pair.x.norm());
            break;
        case PairCase::Zero_Bd:
            r = "zero/bd: v in R- y-hat; <u, y-hat> <= 0";
            ok = nonpos_ray_coeff(v, pair.y.hat(), tol).has_value() &&
                 u.dot(pair.y.hat()) <= tol.membership(u.norm() * pair.y.norm());
            break;
        case PairCase::Bd_Bd: {
            // Polar of a subspace: orthogonal complement of lin T_Omega.
            r = "bd/bd: orthogonal to lin T_Omega";
            Eigen::VectorXd uv(2 * pair.x.dim());
            uv.head(pair.x.dim()) = u.vec();
            uv.tail(pair.x.dim()) = v.vec();
            ok = true;
            for (const Eigen::VectorXd& b : lin_tangent_basis(pair, tol))
                if (std::abs(uv.dot(b)) > tol.membership(uv_scale)) {
                    ok = false;
                    break;
                }
            break;
        }
    }
    if (rule) *rule = r;
    return ok;
}

BlockStructure::BlockStructure(std::vector<Eigen::Index> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionMismatch("BlockStructure: no blocks");
    for (Eigen::Index d : dims_) {
        if (d < 2) throw DimensionMismatch("BlockStructure: every block dimension must be >= 2");
        total_ += d;
    }
}

SocVector BlockStructure::block(const Eigen::VectorXd& stacked, std::size_t i) const {
    if (stacked.size() != total_) throw DimensionMismatch("BlockStructure: stacked vector size");
    Eigen::Index offset = 0;
    for (std::size_t j = 0; j < i; ++j) offset += dims_[j];
    return SocVector(stacked.segment(offset, dims_[i]));
}

bool blockwise(const BlockStructure& structure, const std::vector<Eigen::VectorXd>& stacked_args,
               const std::function<bool(const std::vector<SocVector>&)>& test) {
    for (const auto& arg : stacked_args)
        if (arg.size() != structure.total())
            throw DimensionMismatch("blockwise: stacked argument size mismatch");
    for (std::size_t i = 0; i < structure.count(); ++i) {
        std::vector<SocVector> slices;
        slices.reserve(stacked_args.size());
        for (const auto& arg : stacked_args) slices.push_back(structure.block(arg, i));
        if (!test(slices)) return false;
    }
    return true;
}

bool blockwise_in_tangent_Omega(const BlockStructure& structure, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& d,
                                const Eigen::VectorXd& w, const TolerancePolicy& tol) {
    return blockwise(structure, {x, y, d, w}, [&](const std::vector<SocVector>& b) {
        return in_tangent_Omega(classify_pair(b[0], b[1], tol), b[2], b[3], tol);
    });
}

bool blockwise_in_tangent2_Omega(const BlockStructure& structure, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, const Eigen::VectorXd& d,
                                 const Eigen::VectorXd& w, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& q, const TolerancePolicy& tol) {
    return blockwise(structure, {x, y, d, w, p, q}, [&](const std::vector<SocVector>& b) {
        return in_tangent2_Omega(classify_pair(b[0], b[1], tol), b[2], b[3], b[4], b[5], tol);
    });
}

}  // namespace socvc
