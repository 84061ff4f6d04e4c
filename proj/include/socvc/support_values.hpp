#pragma once

#include "socvc/cone_geometry.hpp"

// Closed-form support values of the second-order tangent sets of Omega,
//   sigma((u, v) | T2_Omega((x, y); (d, w))),
// for admissible data: (d, w) tangent, (u, v) in the regular normal cone,
// and <(u, v), (d, w)> = 0. The hypotheses are enforced, not assumed; the
// closed forms are invalid outside them.

namespace socvc {

struct SupportResult {
    double value;
    const char* case_label;
};

// Throws PreconditionViolated naming the failed hypothesis. All in-scope
// cases yield finite values.
SupportResult support_tangent2_traced(const CompPair& pair, const SocVector& d, const SocVector& w,
                                      const SocVector& u, const SocVector& v,
                                      const TolerancePolicy& tol = {});

inline double support_tangent2(const CompPair& pair, const SocVector& d, const SocVector& w,
                               const SocVector& u, const SocVector& v,
                               const TolerancePolicy& tol = {}) {
    return support_tangent2_traced(pair, d, w, u, v, tol).value;
}

}  // namespace socvc
