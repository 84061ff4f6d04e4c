// Command-line front end: every analytic object and oracle of the library,
// with deterministic text output (17 significant digits) and machine-readable
// JSON. Exit codes: 0 success/true, 1 membership false, 2 parse or dimension
// error, 3 precondition failure; the mpcc subcommand extends the table with
// 3 infeasible, 4 degenerate, 5 no multiplier, 6 no critical direction.

#include "socvc/oracles.hpp"
#include "socvc/projector.hpp"
#include "socvc/socmpcc_checker.hpp"
#include "socvc/support_values.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace socvc;
using nlohmann::json;

constexpr int kExitFalse = 1;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitNoMultiplier = 5;
constexpr int kExitNoDirection = 6;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(const Eigen::VectorXd& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt(v[i]);
    }
    return out;
}

std::string fmt(const SocVector& v) { return fmt(v.vec()); }

json to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

// Comma-separated decimals, head component first.
SocVector parse_vector(const std::string& text) {
    std::vector<double> entries;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw DimensionMismatch("cannot parse number: \"" + tok + "\"");
        }
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw DimensionMismatch("cannot parse number: \"" + tok + "\"");
        entries.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (entries.size() < 2) throw DimensionMismatch("dimension must be >= 2");
    Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v[static_cast<Eigen::Index>(i)] = entries[i];
    return SocVector(std::move(v));
}

std::vector<double> parse_t_seq(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        out.push_back(std::stod(text.substr(pos, comma == std::string::npos ? comma : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct GlobalOptions {
    double tol = 1e-9;
    bool json_output = false;

    TolerancePolicy policy() const { return TolerancePolicy(tol, tol); }
};

void emit(const GlobalOptions& opts, const json& obj, const std::string& plain) {
    if (opts.json_output)
        std::cout << obj.dump() << "\n";
    else
        std::cout << plain;
}

int run_project(const GlobalOptions& opts, const std::string& z_text) {
    const SocVector z = parse_vector(z_text);
    const SocVector projected = project(z);
    const ConeRegion region = classify_region(z, opts.policy());
    const SpectralDecomp s = spectral_decompose(z);

    json j;
    j["projection"] = to_json(projected.vec());
    j["region"] = to_string(region.tag);
    j["lambda1"] = s.lambda1;
    j["lambda2"] = s.lambda2;
    j["u1"] = to_json(s.u1.vec());
    j["u2"] = to_json(s.u2.vec());
    std::string plain = fmt(projected) + "\n";
    plain += "region: " + std::string(to_string(region.tag)) + "\n";
    plain += "lambda1: " + fmt(s.lambda1) + "\nlambda2: " + fmt(s.lambda2) + "\n";
    emit(opts, j, plain);
    return 0;
}

int run_dd1(const GlobalOptions& opts, const std::string& z_text, const std::string& h_text) {
    const SocVector z = parse_vector(z_text);
    const SocVector h = parse_vector(h_text);
    const SocVector value = dir_deriv(z, h, opts.policy());
    const char* region = to_string(classify_region(z, opts.policy()).tag);
    json j;
    j["value"] = to_json(value.vec());
    j["region"] = region;
    emit(opts, j, fmt(value) + " (" + region + ")\n");
    return 0;
}

int run_dd2(const GlobalOptions& opts, const std::string& z_text, const std::string& xi_text,
            const std::string& eta_text) {
    const SocVector z = parse_vector(z_text);
    const SocVector xi = parse_vector(xi_text);
    const SocVector eta = parse_vector(eta_text);
    const SecondDirDerivResult res = second_dir_deriv_traced(z, xi, eta, opts.policy());
    json j;
    j["value"] = to_json(res.value.vec());
    j["case"] = res.case_label;
    emit(opts, j, fmt(res.value) + " (" + res.case_label + ")\n");
    return 0;
}

int emit_membership(const GlobalOptions& opts, bool member, const char* rule) {
    json j;
    j["member"] = member;
    j["case"] = rule;
    emit(opts, j, std::string(member ? "true" : "false") + " (" + rule + ")\n");
    return member ? 0 : kExitFalse;
}

int run_tangent(const GlobalOptions& opts, const std::string& x_text, const std::string& y_text,
                const std::string& d_text, const std::string& w_text, bool polar) {
    const SocVector x = parse_vector(x_text);
    const SocVector d = parse_vector(d_text);
    if (y_text.empty()) {
        const bool member = in_tangent_K(x, d, polar, opts.policy());
        return emit_membership(opts, member, polar ? "T of K-polar" : "T of K");
    }
    if (w_text.empty()) throw DimensionMismatch("tangent: --w is required with --y");
    const CompPair pair = classify_pair(x, parse_vector(y_text), opts.policy());
    const char* rule = nullptr;
    const bool member = in_tangent_Omega(pair, d, parse_vector(w_text), opts.policy(), &rule);
    return emit_membership(opts, member, rule);
}

int run_tangent2(const GlobalOptions& opts, const std::string& x_text, const std::string& y_text,
                 const std::string& d_text, const std::string& w_text, const std::string& p_text,
                 const std::string& q_text, bool polar, bool boundary) {
    const SocVector x = parse_vector(x_text);
    const SocVector d = parse_vector(d_text);
    if (y_text.empty()) {
        if (w_text.empty()) throw DimensionMismatch("tangent2: --w is required without --y");
        const bool member =
            in_tangent2_K(x, d, parse_vector(w_text), polar, boundary, opts.policy());
        return emit_membership(opts, member, polar ? "T2 of K-polar" : "T2 of K");
    }
    if (w_text.empty() || p_text.empty() || q_text.empty())
        throw DimensionMismatch("tangent2: --w, --p, --q are required with --y");
    const CompPair pair = classify_pair(x, parse_vector(y_text), opts.policy());
    const char* rule = nullptr;
    const bool member = in_tangent2_Omega(pair, d, parse_vector(w_text), parse_vector(p_text),
                                          parse_vector(q_text), opts.policy(), &rule);
    return emit_membership(opts, member, rule);
}

int run_normal(const GlobalOptions& opts, const std::string& x_text, const std::string& y_text,
               const std::string& u_text, const std::string& v_text) {
    const CompPair pair = classify_pair(parse_vector(x_text), parse_vector(y_text), opts.policy());
    const char* rule = nullptr;
    const bool member = in_regular_normal_Omega(pair, parse_vector(u_text), parse_vector(v_text),
                                                opts.policy(), &rule);
    return emit_membership(opts, member, rule);
}

int run_support(const GlobalOptions& opts, const std::string& x_text, const std::string& y_text,
                const std::string& d_text, const std::string& w_text, const std::string& u_text,
                const std::string& v_text) {
    const CompPair pair = classify_pair(parse_vector(x_text), parse_vector(y_text), opts.policy());
    const SupportResult res =
        support_tangent2_traced(pair, parse_vector(d_text), parse_vector(w_text),
                                parse_vector(u_text), parse_vector(v_text), opts.policy());
    json j;
    j["value"] = res.value;
    j["case"] = res.case_label;
    emit(opts, j, fmt(res.value) + " (" + std::string(res.case_label) + ")\n");
    return 0;
}

int run_oracle_dd2(const GlobalOptions& opts, const std::string& z_text,
                   const std::string& xi_text, const std::string& eta_text,
                   const std::string& t_text) {
    const SocVector z = parse_vector(z_text);
    const SocVector xi = parse_vector(xi_text);
    const SocVector eta = parse_vector(eta_text);
    const std::vector<double> t_seq =
        t_text.empty() ? oracle::default_t_seq() : parse_t_seq(t_text);
    const SocVector analytic = second_dir_deriv(z, xi, eta, opts.policy());
    const auto run = oracle::fd_second_deriv(z, xi, eta, t_seq, analytic, opts.policy());

    json j;
    j["analytic"] = to_json(analytic.vec());
    j["t"] = t_seq;
    j["estimates"] = json::array();
    j["errors"] = run.errors;
    std::string plain = "analytic: " + fmt(analytic) + "\n";
    for (std::size_t i = 0; i < t_seq.size(); ++i) {
        j["estimates"].push_back(to_json(run.estimates[i].vec()));
        plain += "t=" + fmt(t_seq[i]) + " estimate=" + fmt(run.estimates[i]) +
                 " error=" + fmt(run.errors[i]) + "\n";
    }
    emit(opts, j, plain);
    return 0;
}

int run_oracle_curve(const GlobalOptions& opts, const std::string& x_text,
                     const std::string& y_text, const std::string& d_text,
                     const std::string& w_text, const std::string& p_text,
                     const std::string& q_text, const std::string& t_text) {
    const CompPair pair = classify_pair(parse_vector(x_text), parse_vector(y_text), opts.policy());
    const std::vector<double> t_seq =
        t_text.empty() ? oracle::default_t_seq() : parse_t_seq(t_text);
    const auto ratios = oracle::curve_membership_ratio(
        pair, parse_vector(d_text), parse_vector(w_text), parse_vector(p_text),
        parse_vector(q_text), t_seq, opts.policy());

    json j;
    j["t"] = t_seq;
    j["ratios"] = ratios;
    std::string plain;
    for (std::size_t i = 0; i < t_seq.size(); ++i)
        plain += "t=" + fmt(t_seq[i]) + " ratio=" + fmt(ratios[i]) + "\n";
    emit(opts, j, plain);
    return 0;
}

int run_mpcc(const GlobalOptions& opts, const std::string& path, bool with_oracle) {
    ProblemFile file;
    try {
        file = load_problem_file(path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }

    const CertificateReport report =
        run_check(file.problem, file.xstar, file.directions, opts.policy());
    json j = report_to_json(report);

    if (with_oracle && report.feasible) {
        json oracle_block;
        oracle_block["dist_omega"] = oracle::dist_Omega(
            SocVector(file.problem.G(file.xstar)), SocVector(file.problem.H(file.xstar)));
        json per_direction = json::array();
        if (report.multiplier) {
            const CompPair pair = check_feasible(file.problem, file.xstar, opts.policy());
            for (const auto& res : report.directions) {
                if (!res.in_critical_cone) continue;
                json entry;
                entry["d"] = to_json(res.d);
                const SocVector gd(file.problem.A * res.d);
                const SocVector hd(file.problem.B * res.d);
                json ratios = json::array();
                for (double t : oracle::default_t_seq())
                    ratios.push_back(oracle::dist_Omega(pair.x + t * gd, pair.y + t * hd) / t);
                entry["tangent_ratios"] = ratios;
                entry["support_closed_form"] =
                    support_tangent2(pair, gd, hd, SocVector(report.multiplier->lambda_g),
                                     SocVector(report.multiplier->lambda_h), opts.policy());
                entry["support_sampled"] = oracle::sampled_support(
                    pair, gd, hd, SocVector(report.multiplier->lambda_g),
                    SocVector(report.multiplier->lambda_h), 500, 2024, opts.policy());
                per_direction.push_back(std::move(entry));
            }
        }
        oracle_block["directions"] = std::move(per_direction);
        j["oracle"] = std::move(oracle_block);
    }

    std::cout << j.dump(2) << "\n";

    if (!report.feasible) return kExitPrecondition;
    if (!report.nondegenerate) return kExitDegenerate;
    if (!report.multiplier) return kExitNoMultiplier;
    switch (report.verdict) {
        case Verdict::NecessaryConditionHolds: return 0;
        case Verdict::Violated: return kExitFalse;
        case Verdict::Inconclusive: return kExitNoDirection;
    }
    return kExitNoDirection;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"second-order cone complementarity calculus"};
    app.require_subcommand(1);
    // Let global flags (--tol, --json) appear after the subcommand too.
    app.fallthrough();
    GlobalOptions opts;
    app.add_option("--tol", opts.tol, "absolute tolerance, scaled by data norms")
        ->check(CLI::PositiveNumber);
    app.add_flag("--json", opts.json_output, "machine-readable output");

    std::string z, h, xi, eta, x, y, d, w, p, q, u, v, t_seq, path;
    bool polar = false, boundary = false, with_oracle = false;

    auto* cmd_project = app.add_subcommand("project", "project onto the cone");
    cmd_project->fallthrough();
    cmd_project->add_option("--z", z, "point, comma-separated, head first")->required();

    auto* cmd_dd1 = app.add_subcommand("dd1", "directional derivative of the projection");
    cmd_dd1->fallthrough();
    cmd_dd1->add_option("--z", z)->required();
    cmd_dd1->add_option("--d", h)->required();

    auto* cmd_dd2 = app.add_subcommand("dd2", "second directional derivative of the projection");
    cmd_dd2->fallthrough();
    cmd_dd2->add_option("--z", z)->required();
    cmd_dd2->add_option("--xi", xi)->required();
    cmd_dd2->add_option("--eta", eta)->required();

    auto* cmd_tangent = app.add_subcommand("tangent", "tangent-cone membership");
    cmd_tangent->fallthrough();
    cmd_tangent->add_option("--x", x)->required();
    cmd_tangent->add_option("--y", y, "second pair component (tests the complementarity set)");
    cmd_tangent->add_option("--d", d)->required();
    cmd_tangent->add_option("--w", w);
    cmd_tangent->add_flag("--polar", polar, "test against the polar cone");

    auto* cmd_tangent2 = app.add_subcommand("tangent2", "second-order tangent membership");
    cmd_tangent2->fallthrough();
    cmd_tangent2->add_option("--x", x)->required();
    cmd_tangent2->add_option("--y", y);
    cmd_tangent2->add_option("--d", d)->required();
    cmd_tangent2->add_option("--w", w);
    cmd_tangent2->add_option("--p", p);
    cmd_tangent2->add_option("--q", q);
    cmd_tangent2->add_flag("--polar", polar);
    cmd_tangent2->add_flag("--boundary", boundary, "test the boundary of the set");

    auto* cmd_normal = app.add_subcommand("normal", "regular normal cone membership");
    cmd_normal->fallthrough();
    cmd_normal->add_option("--x", x)->required();
    cmd_normal->add_option("--y", y)->required();
    cmd_normal->add_option("--u", u)->required();
    cmd_normal->add_option("--v", v)->required();

    auto* cmd_support = app.add_subcommand("support", "support value of the second-order set");
    cmd_support->fallthrough();
    cmd_support->add_option("--x", x)->required();
    cmd_support->add_option("--y", y)->required();
    cmd_support->add_option("--d", d)->required();
    cmd_support->add_option("--w", w)->required();
    cmd_support->add_option("--u", u)->required();
    cmd_support->add_option("--v", v)->required();

    auto* cmd_mpcc = app.add_subcommand("mpcc", "second-order necessary-condition check");
    cmd_mpcc->fallthrough();
    cmd_mpcc->add_option("file", path, "problem file (JSON)")->required();
    cmd_mpcc->add_flag("--oracle", with_oracle, "append oracle cross-checks");

    auto* cmd_oracle_dd2 = app.add_subcommand("oracle-dd2", "parabola difference quotients");
    cmd_oracle_dd2->fallthrough();
    cmd_oracle_dd2->add_option("--z", z)->required();
    cmd_oracle_dd2->add_option("--xi", xi)->required();
    cmd_oracle_dd2->add_option("--eta", eta)->required();
    cmd_oracle_dd2->add_option("--t-seq", t_seq, "comma-separated decreasing steps");

    auto* cmd_oracle_curve = app.add_subcommand("oracle-curve", "curve distance ratios");
    cmd_oracle_curve->fallthrough();
    cmd_oracle_curve->add_option("--x", x)->required();
    cmd_oracle_curve->add_option("--y", y)->required();
    cmd_oracle_curve->add_option("--d", d)->required();
    cmd_oracle_curve->add_option("--w", w)->required();
    cmd_oracle_curve->add_option("--p", p)->required();
    cmd_oracle_curve->add_option("--q", q)->required();
    cmd_oracle_curve->add_option("--t-seq", t_seq);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        if (*cmd_project) return run_project(opts, z);
        if (*cmd_dd1) return run_dd1(opts, z, h);
        if (*cmd_dd2) return run_dd2(opts, z, xi, eta);
        if (*cmd_tangent) return run_tangent(opts, x, y, d, w, polar);
        if (*cmd_tangent2) return run_tangent2(opts, x, y, d, w, p, q, polar, boundary);
        if (*cmd_normal) return run_normal(opts, x, y, u, v);
        if (*cmd_support) return run_support(opts, x, y, d, w, u, v);
        if (*cmd_mpcc) return run_mpcc(opts, path, with_oracle);
        if (*cmd_oracle_dd2) return run_oracle_dd2(opts, z, xi, eta, t_seq);
        if (*cmd_oracle_curve) return run_oracle_curve(opts, x, y, d, w, p, q, t_seq);
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }
    return kExitParse;
}
