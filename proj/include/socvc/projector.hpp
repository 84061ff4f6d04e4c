#pragma once

#include "socvc/soc_core.hpp"

// Euclidean projection onto K and its first- and second-order directional
// derivatives. The second derivative is evaluated by exact case dispatch on
// the region of the base point, then on the sub-conditions of each case;
// the long closed-form expressions are evaluated term by term as stated.

namespace socvc {

// Spectral projection: clip both spectral values at zero.
SocVector project(const SocVector& z);

// One-sided directional derivative t -> 0+ of the projection at z along h.
SocVector dir_deriv(const SocVector& z, const SocVector& h, const TolerancePolicy& tol = {});

struct SecondDirDerivResult {
    SocVector value;
    const char* case_label;  // which case/sub-case fired (static string)
};

// Parabolic second-order directional derivative of the projection at z
// along (xi, eta), in the Hadamard sense.
SecondDirDerivResult second_dir_deriv_traced(const SocVector& z, const SocVector& xi,
                                             const SocVector& eta,
                                             const TolerancePolicy& tol = {});

inline SocVector second_dir_deriv(const SocVector& z, const SocVector& xi, const SocVector& eta,
                                  const TolerancePolicy& tol = {}) {
    return second_dir_deriv_traced(z, xi, eta, tol).value;
}

}  // namespace socvc
