#pragma once

#include "socvc/cone_geometry.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

// End-to-end second-order necessary-optimality checker for programs
//   min f(x)  s.t.  K ni G(x) perp H(x) in K
// with quadratic objective and affine maps G, H: feasibility, nondegeneracy,
// unique-multiplier recovery, critical-cone membership, and the per-direction
// second-order value Upsilon(d). The library-internal pipeline accepts
// precomputed derivative records, so callers with nonlinear data can reuse it;
// the serialized problem format stays quadratic/affine.

namespace socvc {

struct QuadraticAffineProblem {
    Eigen::Index n = 0;  // variables
    Eigen::Index m = 0;  // cone dimension
    Eigen::MatrixXd Q;   // n x n objective Hessian (symmetric)
    Eigen::VectorXd c;   // objective gradient at 0
    Eigen::MatrixXd A;   // G(x) = A x + a
    Eigen::VectorXd a;
    Eigen::MatrixXd B;   // H(x) = B x + b
    Eigen::VectorXd b;

    void validate() const;

    Eigen::VectorXd G(const Eigen::VectorXd& x) const { return A * x + a; }
    Eigen::VectorXd H(const Eigen::VectorXd& x) const { return B * x + b; }
    Eigen::VectorXd grad_f(const Eigen::VectorXd& x) const { return Q * x + c; }
};

// Derivative record at a candidate point: everything the pipeline needs.
// quad_G / quad_H supply the curvature actions d -> D2G(x*)(d, d); empty
// functions mean affine maps (zero curvature).
struct StationaryPointData {
    Eigen::VectorXd grad_f;  // n
    Eigen::MatrixXd hess_f;  // n x n
    Eigen::VectorXd G0, H0;  // values of G, H (each m)
    Eigen::MatrixXd jac_G, jac_H;  // m x n
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> quad_G;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> quad_H;
};

StationaryPointData make_point_data(const QuadraticAffineProblem& problem,
                                    const Eigen::VectorXd& xstar);

struct MultiplierTriple {
    Eigen::VectorXd lambda_g;
    Eigen::VectorXd lambda_h;
    double stationarity_residual = 0.0;
};

enum class Verdict { NecessaryConditionHolds, Violated, Inconclusive };
const char* to_string(Verdict v);

struct DirectionResult {
    Eigen::VectorXd d;
    bool in_critical_cone = false;
    std::optional<double> upsilon;
};

struct CertificateReport {
    bool feasible = false;
    double violation = 0.0;
    std::optional<PairCase> case_tag;
    bool nondegenerate = false;
    Eigen::Index rank = 0;
    Eigen::Index rank_required = 0;
    std::optional<MultiplierTriple> multiplier;
    std::string note;  // detail for the stage that stopped the pipeline
    std::vector<DirectionResult> directions;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Eigen::VectorXd> violating_direction;
};

// Pipeline stages. Each throws on its failure mode (NotInOmega,
// NoMultiplier, PreconditionViolated) as documented.
CompPair check_feasible(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
                        const TolerancePolicy& tol = {});

struct RankResult {
    bool nondegenerate;
    Eigen::Index rank;      // attained
    Eigen::Index required;  // 2m
    double threshold;       // relative singular-value cutoff used
};
// Singular values above rank_threshold * sigma_max count toward the rank;
// the cutoff is reported back so callers can re-run with a stricter one.
RankResult check_nondegeneracy(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
                               const TolerancePolicy& tol = {}, double rank_threshold = 1e-8);

MultiplierTriple solve_multiplier(const QuadraticAffineProblem& problem,
                                  const Eigen::VectorXd& xstar, const TolerancePolicy& tol = {});

bool in_critical_cone(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
                      const Eigen::VectorXd& d, const TolerancePolicy& tol = {});

double upsilon(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
               const MultiplierTriple& multiplier, const Eigen::VectorXd& d,
               const TolerancePolicy& tol = {});

// Record-based variants for callers with general derivative data.
CompPair check_feasible(const StationaryPointData& data, const TolerancePolicy& tol = {});
RankResult check_nondegeneracy(const StationaryPointData& data,
                               const TolerancePolicy& tol = {}, double rank_threshold = 1e-8);
MultiplierTriple solve_multiplier(const StationaryPointData& data,
                                  const TolerancePolicy& tol = {});
bool in_critical_cone(const StationaryPointData& data, const Eigen::VectorXd& d,
                      const TolerancePolicy& tol = {});
double upsilon(const StationaryPointData& data, const MultiplierTriple& multiplier,
               const Eigen::VectorXd& d, const TolerancePolicy& tol = {});

// Full pipeline; never throws on the documented stage failures, recording
// them in the report instead.
CertificateReport run_check(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
                            const std::vector<Eigen::VectorXd>& directions,
                            const TolerancePolicy& tol = {});

// ---------------------------------------------------------------------------
// Problem file: UTF-8 JSON with fields
//   {"n", "m", "Q", "c", "A", "a", "B", "b", "xstar", "directions"}
// where matrices are row-major dense arrays of decimal literals.

struct ProblemFile {
    QuadraticAffineProblem problem;
    Eigen::VectorXd xstar;
    std::vector<Eigen::VectorXd> directions;
};

ProblemFile parse_problem_file(const std::string& json_text);
ProblemFile load_problem_file(const std::string& path);

nlohmann::json report_to_json(const CertificateReport& report);

}  // namespace socvc
