#include "socvc/socmpcc_checker.hpp"

#include "socvc/support_values.hpp"

#include <Eigen/SVD>

#include <fstream>
#include <sstream>

namespace socvc {

void QuadraticAffineProblem::validate() const {
    if (n < 1) throw DimensionMismatch("problem: n must be >= 1");
    if (m < 2) throw DimensionMismatch("problem: m must be >= 2");
    if (Q.rows() != n || Q.cols() != n) throw DimensionMismatch("problem: Q must be n x n");
    if (c.size() != n) throw DimensionMismatch("problem: c must have length n");
    if (A.rows() != m || A.cols() != n) throw DimensionMismatch("problem: A must be m x n");
    if (a.size() != m) throw DimensionMismatch("problem: a must have length m");
    if (B.rows() != m || B.cols() != n) throw DimensionMismatch("problem: B must be m x n");
    if (b.size() != m) throw DimensionMismatch("problem: b must have length m");
    const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error("problem: Q must be symmetric");
}

StationaryPointData make_point_data(const QuadraticAffineProblem& problem,
                                    const Eigen::VectorXd& xstar) {
    problem.validate();
    if (xstar.size() != problem.n) throw DimensionMismatch("xstar: dimension mismatch");
    StationaryPointData data;
    data.grad_f = problem.grad_f(xstar);
    data.hess_f = problem.Q;
    data.G0 = problem.G(xstar);
    data.H0 = problem.H(xstar);
    data.jac_G = problem.A;
    data.jac_H = problem.B;
    return data;
}

CompPair check_feasible(const StationaryPointData& data, const TolerancePolicy& tol) {
    return classify_pair(SocVector(data.G0), SocVector(data.H0), tol);
}

namespace {

Eigen::MatrixXd stacked_jacobian(const StationaryPointData& data) {
    const Eigen::Index m = data.G0.size();
    const Eigen::Index n = data.jac_G.cols();
    Eigen::MatrixXd J(2 * m, n);
    J.topRows(m) = data.jac_G;
    J.bottomRows(m) = data.jac_H;
    return J;
}

Eigen::MatrixXd basis_matrix(const std::vector<Eigen::VectorXd>& basis, Eigen::Index rows) {
    Eigen::MatrixXd L(rows, static_cast<Eigen::Index>(basis.size()));
    for (Eigen::Index j = 0; j < L.cols(); ++j) L.col(j) = basis[static_cast<std::size_t>(j)];
    return L;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& M, double threshold = 1e-8) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold * sv(0)) ++rank;
    return rank;
}

// Orthonormal basis of the orthogonal complement of span(columns of L).
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& L, Eigen::Index dim) {
    if (L.cols() == 0) return Eigen::MatrixXd::Identity(dim, dim);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullU);
    const Eigen::Index rank = numerical_rank(L);
    return svd.matrixU().rightCols(dim - rank);
}

}  // namespace

RankResult check_nondegeneracy(const StationaryPointData& data, const TolerancePolicy& tol,
                               double rank_threshold) {
    const CompPair pair = check_feasible(data, tol);
    const Eigen::Index two_m = 2 * data.G0.size();
    const auto basis = lin_tangent_basis(pair, tol);

    Eigen::MatrixXd M(two_m, data.jac_G.cols() + static_cast<Eigen::Index>(basis.size()));
    M.leftCols(data.jac_G.cols()) = stacked_jacobian(data);
    M.rightCols(static_cast<Eigen::Index>(basis.size())) = basis_matrix(basis, two_m);

    const Eigen::Index rank = numerical_rank(M, rank_threshold);
    return RankResult{rank == two_m, rank, two_m, rank_threshold};
}

MultiplierTriple solve_multiplier(const StationaryPointData& data, const TolerancePolicy& tol) {
    const CompPair pair = check_feasible(data, tol);
    const RankResult rk = check_nondegeneracy(data, tol);
    if (!rk.nondegenerate)
        throw PreconditionViolated("solve_multiplier: nondegeneracy fails, rank " +
                                   std::to_string(rk.rank) + " of " +
                                   std::to_string(rk.required));

    // The multiplier lies in the polar of the regular tangent subspace, i.e.
    // the orthogonal complement of lin T_Omega. Restricting the stationarity
    // system to that complement makes the least-squares solution unique
    // under nondegeneracy.
    const Eigen::Index m = data.G0.size();
    const Eigen::MatrixXd L = basis_matrix(lin_tangent_basis(pair, tol), 2 * m);
    const Eigen::MatrixXd N = orthogonal_complement(L, 2 * m);
    const Eigen::MatrixXd Jt = stacked_jacobian(data).transpose();  // n x 2m

    const Eigen::VectorXd mu =
        (Jt * N).jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-data.grad_f);
    const Eigen::VectorXd lambda = N * mu;

    MultiplierTriple result;
    result.lambda_g = lambda.head(m);
    result.lambda_h = lambda.tail(m);
    result.stationarity_residual = (data.grad_f + Jt * lambda).norm();

    if (result.stationarity_residual > tol.membership(data.grad_f.norm()))
        throw NoMultiplier("solve_multiplier: stationarity residual " +
                           std::to_string(result.stationarity_residual));
    if (!in_regular_normal_Omega(pair, SocVector(result.lambda_g), SocVector(result.lambda_h),
                                 tol))
        throw NoMultiplier("solve_multiplier: solution violates the normal-cone conditions");
    return result;
}

namespace {

bool critical_cone_impl(const StationaryPointData& data, const CompPair& pair,
                        bool multiplier_exists, const Eigen::VectorXd& d,
                        const TolerancePolicy& tol) {
    if (d.size() != data.jac_G.cols()) throw DimensionMismatch("in_critical_cone: dimension");
    const double slope = data.grad_f.dot(d);
    const double slope_tol = tol.membership(data.grad_f.norm() * d.norm());
    if (multiplier_exists ? std::abs(slope) > slope_tol : slope > slope_tol) return false;
    return in_tangent_Omega(pair, SocVector(data.jac_G * d), SocVector(data.jac_H * d), tol);
}

double upsilon_impl(const StationaryPointData& data, const CompPair& pair,
                    const MultiplierTriple& multiplier, const Eigen::VectorXd& d,
                    const TolerancePolicy& tol) {
    double hessian_term = d.dot(data.hess_f * d);
    if (data.quad_G) hessian_term += multiplier.lambda_g.dot(data.quad_G(d));
    if (data.quad_H) hessian_term += multiplier.lambda_h.dot(data.quad_H(d));
    const double support =
        support_tangent2(pair, SocVector(data.jac_G * d), SocVector(data.jac_H * d),
                         SocVector(multiplier.lambda_g), SocVector(multiplier.lambda_h), tol);
    return hessian_term - support;
}

}  // namespace

bool in_critical_cone(const StationaryPointData& data, const Eigen::VectorXd& d,
                      const TolerancePolicy& tol) {
    const CompPair pair = check_feasible(data, tol);
    bool multiplier_exists = false;
    try {
        (void)solve_multiplier(data, tol);
        multiplier_exists = true;
    } catch (const Error&) {
        // fall back to the inequality form of the slope condition
    }
    return critical_cone_impl(data, pair, multiplier_exists, d, tol);
}

double upsilon(const StationaryPointData& data, const MultiplierTriple& multiplier,
               const Eigen::VectorXd& d, const TolerancePolicy& tol) {
    const CompPair pair = check_feasible(data, tol);
    if (!critical_cone_impl(data, pair, true, d, tol))
        throw PreconditionViolated("upsilon: direction not in the critical cone");
    return upsilon_impl(data, pair, multiplier, d, tol);
}

CompPair check_feasible(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
                        const TolerancePolicy& tol) {
    return check_feasible(make_point_data(problem, xstar), tol);
}

RankResult check_nondegeneracy(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
                               const TolerancePolicy& tol, double rank_threshold) {
    return check_nondegeneracy(make_point_data(problem, xstar), tol, rank_threshold);
}

MultiplierTriple solve_multiplier(const QuadraticAffineProblem& problem,
                                  const Eigen::VectorXd& xstar, const TolerancePolicy& tol) {
    return solve_multiplier(make_point_data(problem, xstar), tol);
}

bool in_critical_cone(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
                      const Eigen::VectorXd& d, const TolerancePolicy& tol) {
    return in_critical_cone(make_point_data(problem, xstar), d, tol);
}

double upsilon(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
               const MultiplierTriple& multiplier, const Eigen::VectorXd& d,
               const TolerancePolicy& tol) {
    return upsilon(make_point_data(problem, xstar), multiplier, d, tol);
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::NecessaryConditionHolds: return "NecessaryConditionHolds";
        case Verdict::Violated: return "Violated";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

CertificateReport run_check(const QuadraticAffineProblem& problem, const Eigen::VectorXd& xstar,
                            const std::vector<Eigen::VectorXd>& directions,
                            const TolerancePolicy& tol) {
    CertificateReport report;
    const StationaryPointData data = make_point_data(problem, xstar);

    CompPair pair{SocVector::Zero(problem.m), SocVector::Zero(problem.m), PairCase::Zero_Zero,
                  std::nullopt};
    try {
        pair = check_feasible(data, tol);
    } catch (const NotInOmega& e) {
        report.feasible = false;
        report.violation = e.violation;
        report.note = e.what();
        return report;
    }
    report.feasible = true;
    report.case_tag = pair.case_tag;

    const RankResult rk = check_nondegeneracy(data, tol);
    report.nondegenerate = rk.nondegenerate;
    report.rank = rk.rank;
    report.rank_required = rk.required;
    if (!rk.nondegenerate) {
        report.note = "nondegeneracy fails";
        return report;
    }

    try {
        report.multiplier = solve_multiplier(data, tol);
    } catch (const Error& e) {
        report.note = e.what();
        return report;
    }

    bool any_critical = false;
    bool violated = false;
    for (const Eigen::VectorXd& d : directions) {
        DirectionResult res;
        res.d = d;
        res.in_critical_cone = critical_cone_impl(data, pair, true, d, tol);
        if (res.in_critical_cone) {
            any_critical = true;
            res.upsilon = upsilon_impl(data, pair, *report.multiplier, d, tol);
            if (*res.upsilon < -tol.membership(1.0) && !violated) {
                violated = true;
                report.violating_direction = d;
            }
        }
        report.directions.push_back(std::move(res));
    }

    if (violated)
        report.verdict = Verdict::Violated;
    else if (any_critical)
        report.verdict = Verdict::NecessaryConditionHolds;
    else {
        report.verdict = Verdict::Inconclusive;
        report.note = "no supplied direction lies in the critical cone";
    }
    return report;
}

namespace {

Eigen::VectorXd json_vector(const nlohmann::json& j, const std::string& key, Eigen::Index size) {
    if (!j.contains(key)) throw Error("problem file: missing field \"" + key + "\"");
    const auto& arr = j.at(key);
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != size)
        throw Error("problem file: field \"" + key + "\" must be an array of length " +
                    std::to_string(size));
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) v[i] = arr.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

Eigen::MatrixXd json_matrix(const nlohmann::json& j, const std::string& key, Eigen::Index rows,
                            Eigen::Index cols) {
    const Eigen::VectorXd flat = json_vector(j, key, rows * cols);
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = flat[r * cols + c];  // row-major
    return M;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

}  // namespace

ProblemFile parse_problem_file(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("problem file: JSON parse error: ") + e.what());
    }

    ProblemFile file;
    try {
        file.problem.n = j.at("n").get<Eigen::Index>();
        file.problem.m = j.at("m").get<Eigen::Index>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("problem file: bad `n`/`m`: ") + e.what());
    }
    const Eigen::Index n = file.problem.n;
    const Eigen::Index m = file.problem.m;
    if (n < 1 || m < 2) throw Error("problem file: need n >= 1 and m >= 2");

    file.problem.Q = json_matrix(j, "Q", n, n);
    file.problem.c = json_vector(j, "c", n);
    file.problem.A = json_matrix(j, "A", m, n);
    file.problem.a = json_vector(j, "a", m);
    file.problem.B = json_matrix(j, "B", m, n);
    file.problem.b = json_vector(j, "b", m);
    file.problem.validate();
    file.xstar = json_vector(j, "xstar", n);

    if (j.contains("directions")) {
        const auto& dirs = j.at("directions");
        if (!dirs.is_array()) throw Error("problem file: \"directions\" must be an array");
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const auto& entry = dirs.at(i);
            if (!entry.is_array() || static_cast<Eigen::Index>(entry.size()) != n)
                throw Error("problem file: direction " + std::to_string(i) +
                            " must have length n");
            Eigen::VectorXd d(n);
            for (Eigen::Index k = 0; k < n; ++k) d[k] = entry.at(static_cast<std::size_t>(k)).get<double>();
            file.directions.push_back(std::move(d));
        }
    }
    return file;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("problem file: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem_file(buffer.str());
}

nlohmann::json report_to_json(const CertificateReport& report) {
    nlohmann::json j;
    j["feasible"] = report.feasible;
    j["violation"] = report.violation;
    j["case"] = report.case_tag ? to_string(*report.case_tag) : nullptr;
    j["nondegenerate"] = report.nondegenerate;
    j["rank"] = report.rank;
    j["rank_required"] = report.rank_required;
    if (report.multiplier) {
        j["multiplier"] = {
            {"lambda_g", vector_to_json(report.multiplier->lambda_g)},
            {"lambda_h", vector_to_json(report.multiplier->lambda_h)},
            {"stationarity_residual", report.multiplier->stationarity_residual},
        };
    } else {
        j["multiplier"] = nullptr;
    }
    j["note"] = report.note;
    nlohmann::json dirs = nlohmann::json::array();
    for (const auto& res : report.directions) {
        nlohmann::json entry;
        entry["d"] = vector_to_json(res.d);
        entry["in_critical_cone"] = res.in_critical_cone;
        if (res.upsilon)
            entry["upsilon"] = *res.upsilon;
        else
            entry["upsilon"] = nullptr;
        dirs.push_back(std::move(entry));
    }
    j["directions"] = std::move(dirs);
    j["verdict"] = to_string(report.verdict);
    j["violating_direction"] =
        report.violating_direction ? vector_to_json(*report.violating_direction) : nlohmann::json();
    return j;
}

}  // namespace socvc
