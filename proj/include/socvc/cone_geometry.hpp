#pragma once

#include "socvc/soc_core.hpp"

#include <functional>
#include <optional>
#include <vector>

// Membership tests and generators for the cone objects attached to K and to
// the complementarity set
//   Omega = { (x, y) : x in K, y in K, <x, y> = 0 }.
// Covers T_K, T2_K (and the polar-cone variants), the pair classification of
// Omega, T_Omega, lin T_Omega, T2_Omega, the regular normal cone of Omega,
// and blockwise products.

namespace socvc {

// ---------------------------------------------------------------------------
// Tangent cone and second-order tangent set of K (or K-polar when `polar`).

// Membership of d in T_K(x) (resp. T_{K-polar}(x)). Throws NotInCone when x
// fails the cone precondition.
bool in_tangent_K(const SocVector& x, const SocVector& d, bool polar = false,
                  const TolerancePolicy& tol = {});

// Membership of w in T2_K(x; d) (resp. polar variant). With boundary_only,
// tests membership in the boundary of the set instead. Throws NotInCone /
// NotInTangent on precondition failure.
bool in_tangent2_K(const SocVector& x, const SocVector& d, const SocVector& w, bool polar = false,
                   bool boundary_only = false, const TolerancePolicy& tol = {});

// ---------------------------------------------------------------------------
// Complementarity pairs.

enum class PairCase { IntK_Zero, Zero_IntK, Bd_Bd, Bd_Zero, Zero_Bd, Zero_Zero };

const char* to_string(PairCase c);

struct CompPair {
    SocVector x;
    SocVector y;
    PairCase case_tag;
    std::optional<double> k_ratio;  // y = k * x-hat in the Bd_Bd case
};

// Verifies (x, y) in Omega via the projection identity and assigns the
// six-way case tag. Throws NotInOmega carrying the violation magnitude.
CompPair classify_pair(const SocVector& x, const SocVector& y, const TolerancePolicy& tol = {});

// A direction pair certified against the CompPair it was tested on.
struct TangentPair {
    SocVector d;
    SocVector w;
    CompPair certified_for;
};

TangentPair make_tangent_pair(const CompPair& pair, const SocVector& d, const SocVector& w,
                              const TolerancePolicy& tol = {});

// ---------------------------------------------------------------------------
// Tangent cone, regular tangent subspace, and second-order tangent set of
// Omega. `rule` (optional) receives a static string naming the case row that
// decided the answer.

bool in_tangent_Omega(const CompPair& pair, const SocVector& d, const SocVector& w,
                      const TolerancePolicy& tol = {}, const char** rule = nullptr);

// Orthonormal basis of lin T_Omega(x, y) as stacked (d, w) vectors in R^{2m}.
std::vector<Eigen::VectorXd> lin_tangent_basis(const CompPair& pair,
                                               const TolerancePolicy& tol = {});

bool in_tangent2_Omega(const CompPair& pair, const SocVector& d, const SocVector& w,
                       const SocVector& p, const SocVector& q, const TolerancePolicy& tol = {},
                       const char** rule = nullptr);

// Case rows: intK/zero -> u = 0; zero/intK -> v = 0; zero/zero -> u, v in -K;
// bd/zero -> u on the nonpositive reflected ray and <v, x-hat> <= 0. The
// zero/bd row is the bd/zero one mirrored through the (x, y) swap symmetry
// of Omega (no independent closed form; the polarity spot checks in the test
// suite guard the mirrored row). bd/bd -> orthogonal complement of
// lin T_Omega, the polar of a subspace.
bool in_regular_normal_Omega(const CompPair& pair, const SocVector& u, const SocVector& v,
                             const TolerancePolicy& tol = {}, const char** rule = nullptr);

// ---------------------------------------------------------------------------
// Small helpers shared by the membership tests (exposed for generators and
// tests).

// Least-squares coefficient t of v against span{x} and the residual
// ||v - t x||. x must be nonzero.
struct SpanFit {
    double coeff;
    double residual;
};
SpanFit span_fit(const Eigen::VectorXd& v, const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Blockwise products Omega_1 x ... x Omega_l.

class BlockStructure {
  public:
    explicit BlockStructure(std::vector<Eigen::Index> dims);

    const std::vector<Eigen::Index>& dims() const { return dims_; }
    Eigen::Index total() const { return total_; }
    std::size_t count() const { return dims_.size(); }

    // Slice block i out of a stacked vector of size total().
    SocVector block(const Eigen::VectorXd& stacked, std::size_t i) const;

  private:
    std::vector<Eigen::Index> dims_;
    Eigen::Index total_ = 0;
};

// Conjunction of a per-block test over stacked argument vectors. Every
// stacked argument must have size structure.total(); the callback receives
// the per-block slices in the same order.
bool blockwise(const BlockStructure& structure, const std::vector<Eigen::VectorXd>& stacked_args,
               const std::function<bool(const std::vector<SocVector>&)>& test);

bool blockwise_in_tangent_Omega(const BlockStructure& structure, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& d,
                                const Eigen::VectorXd& w, const TolerancePolicy& tol = {});

bool blockwise_in_tangent2_Omega(const BlockStructure& structure, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, const Eigen::VectorXd& d,
                                 const Eigen::VectorXd& w, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& q, const TolerancePolicy& tol = {});

}  // namespace socvc
