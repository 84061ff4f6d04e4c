#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

// Core vector algebra for the second-order cone
//   K = { (z1, z2) in R x R^{m-1} : ||z2|| <= z1 },  m >= 2.
// Everything here is a pure function of its inputs; values are immutable
// after construction and safe to share across threads.

namespace socvc {

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NearZeroVector : Error {
    using Error::Error;
};

struct NotInCone : Error {
    using Error::Error;
};

struct NotInTangent : Error {
    using Error::Error;
};

struct NotInOmega : Error {
    explicit NotInOmega(const std::string& what, double violation_)
        : Error(what), violation(violation_) {}
    double violation = 0.0;
};

struct PreconditionViolated : Error {
    using Error::Error;
};

struct NoMultiplier : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Tolerances
//
// Both tolerances are absolute and get scaled by max(1, data norm) at the
// point of use. Classification snaps |lambda| <= tol to zero before the
// sign table, so downstream case formulas can branch on exact-zero
// conditions.

struct TolerancePolicy {
    double class_tol = 1e-9;
    double membership_tol = 1e-9;

    TolerancePolicy() = default;
    TolerancePolicy(double class_t, double membership_t)
        : class_tol(class_t), membership_tol(membership_t) {
        if (!(class_tol > 0.0) || !(membership_tol > 0.0))
            throw Error("TolerancePolicy: tolerances must be strictly positive");
    }

    // tol * max(1, scale)
    double classify(double scale) const { return class_tol * std::max(1.0, scale); }
    double membership(double scale) const { return membership_tol * std::max(1.0, scale); }
};

// ---------------------------------------------------------------------------
// SocVector: a point of R^m split as (head, tail) = (z1, z2), m >= 2.

class SocVector {
  public:
    explicit SocVector(Eigen::VectorXd v) : v_(std::move(v)) { validate(); }
    SocVector(double head, const Eigen::VectorXd& tail) : v_(tail.size() + 1) {
        v_[0] = head;
        v_.tail(tail.size()) = tail;
        validate();
    }

    static SocVector Zero(Eigen::Index m) {
        if (m < 2) throw DimensionMismatch("SocVector: dimension must be >= 2");
        return SocVector(Eigen::VectorXd::Zero(m));
    }

    Eigen::Index dim() const { return v_.size(); }
    double head() const { return v_[0]; }
    Eigen::VectorXd tail() const { return v_.tail(v_.size() - 1); }
    double tail_norm() const { return v_.tail(v_.size() - 1).norm(); }
    const Eigen::VectorXd& vec() const { return v_; }

    double norm() const { return v_.norm(); }
    double dot(const SocVector& o) const {
        check_same_dim(o);
        return v_.dot(o.v_);
    }

    // The reflection (z1, -z2).
    SocVector hat() const {
        Eigen::VectorXd r = v_;
        r.tail(r.size() - 1) *= -1.0;
        return SocVector(std::move(r));
    }

    SocVector operator+(const SocVector& o) const {
        check_same_dim(o);
        return SocVector(v_ + o.v_);
    }
    SocVector operator-(const SocVector& o) const {
        check_same_dim(o);
        return SocVector(v_ - o.v_);
    }
    SocVector operator-() const { return SocVector(-v_); }
    friend SocVector operator*(double s, const SocVector& z) { return SocVector(s * z.v_); }

  private:
    void validate() const {
        if (v_.size() < 2) throw DimensionMismatch("SocVector: dimension must be >= 2");
        if (!v_.allFinite()) throw Error("SocVector: entries must be finite");
    }
    void check_same_dim(const SocVector& o) const {
        if (o.dim() != dim()) throw DimensionMismatch("SocVector: dimension mismatch");
    }

    Eigen::VectorXd v_;
};

inline SocVector reflect_hat(const SocVector& z) { return z.hat(); }

// ---------------------------------------------------------------------------
// Spectral decomposition z = lambda1 * u1 + lambda2 * u2 with
// lambda_i = z1 + (-1)^i ||z2|| and u_i = (1/2)(1, (-1)^i z2/||z2||).
// For z2 = 0 the fixed unit tail direction (1, 0, ..., 0) is used, which
// keeps the decomposition deterministic.

struct SpectralDecomp {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    SocVector u1;
    SocVector u2;
};

SpectralDecomp spectral_decompose(const SocVector& z);

// ---------------------------------------------------------------------------
// Region of a point relative to K and its polar K-degree = -K.
// Tags follow the sign pattern of the snapped spectral values:
//   lambda1 > 0            -> IntK
//   lambda1 = 0 < lambda2  -> BdKNonzero
//   lambda1 = lambda2 = 0  -> Zero
//   lambda2 < 0            -> IntKPolar
//   lambda1 < 0 = lambda2  -> BdKPolarNonzero
//   lambda1 < 0 < lambda2  -> Outside

enum class RegionTag { IntK, BdKNonzero, Zero, IntKPolar, BdKPolarNonzero, Outside };

const char* to_string(RegionTag tag);

struct ConeRegion {
    RegionTag tag = RegionTag::Zero;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double tol_used = 0.0;

    bool in_K() const {
        return tag == RegionTag::IntK || tag == RegionTag::BdKNonzero || tag == RegionTag::Zero;
    }
    bool in_polar() const {
        return tag == RegionTag::IntKPolar || tag == RegionTag::BdKPolarNonzero ||
               tag == RegionTag::Zero;
    }
};

ConeRegion classify_region(const SocVector& z, const TolerancePolicy& tol = {});

// ---------------------------------------------------------------------------
// The normalization map Phi(x) = x / ||x|| on tails (plain Eigen vectors)
// and its first two derivatives:
//   DPhi(x) d      = (I - xb xb^T) d / ||x||,            xb = x/||x||
//   D2Phi(x)(d,d)  = -2 (xb^T d / ||x||^2) d + d^T((3 xb xb^T - I)/||x||^3)d x

struct PhiDerivatives {
    Eigen::VectorXd value;      // Phi(x)
    Eigen::VectorXd jac_d;      // DPhi(x) d
    Eigen::VectorXd second_dd;  // D2Phi(x)(d,d)
};

// Throws NearZeroVector when ||x2|| <= membership tolerance.
PhiDerivatives phi_derivatives(const Eigen::VectorXd& x2, const Eigen::VectorXd& d,
                               const TolerancePolicy& tol = {});

}  // namespace socvc
