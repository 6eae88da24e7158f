/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Command line front end. Subcommands:
//   realize     prescribe curvatures on a decorated cusp surface
//   uniformize  prescribe curvatures within a discrete conformal class
//   delaunay    flip a decorated surface convex and report the angles
//   check       validate a document and audit the numerical kernels
//
// Exit codes: 0 success, 1 bad input, 2 infeasible target, 3 no convergence.
// Errors go to stderr as one JSON object.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prismatic/prismatic.hpp"

namespace {

using namespace prismatic;

Vector to_vector(const std::vector<double>& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

std::vector<double> to_std(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

ResultDocument make_result(const ComplexState& st, const std::vector<int>& flips, int iterations,
                           double residual, const std::vector<double>& trace,
                           const std::optional<Vector>& conformal) {
    ResultDocument doc;
    const auto& s = st.metric.surface;
    doc.num_triangles = s.num_triangles();
    doc.gluings = s.gluing_pairs();
    doc.weights = to_std(st.weights);
    doc.residual = residual;
    doc.curvatures = to_std(st.kappa);
    doc.edge_lengths = to_std(st.metric.lengths);
    const auto pm = lower_metric(st);
    doc.lower_lengths = to_std(pm.lengths);
    doc.exterior_angles = to_std(st.theta);
    doc.cone_angles = to_std(st.omega);
    if (conformal) doc.conformal_factors = to_std(*conformal);
    doc.lower_area = pm.area;
    doc.gauss_bonnet_residual = gauss_bonnet_residual(st);
    doc.flips = flips;
    doc.iterations = iterations;
    doc.residual_trace = trace;
    return doc;
}

void emit(const ResultDocument& doc, const std::string& out_path) {
    const std::string text = serialize(doc);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

Vector resolve_target(const SurfaceDocument& doc, const std::vector<double>& kappa_flag,
                      bool kappa_zero, int num_cusps) {
    if (kappa_zero) return Vector::Zero(num_cusps);
    if (!kappa_flag.empty()) return to_vector(kappa_flag);
    if (doc.kappa_target) return to_vector(*doc.kappa_target);
    throw InfeasibleTargetError("no curvature target: pass --kappa/--kappa-zero or a kappa_target field");
}

Vector resolve_weights(const SurfaceDocument& doc, const std::vector<double>& weights_flag,
                       int num_cusps) {
    if (!weights_flag.empty()) return to_vector(weights_flag);
    if (doc.weights) return to_vector(*doc.weights);
    return Vector::Zero(num_cusps);
}

int run_realize(const std::string& surface_path, const std::vector<double>& kappa_flag,
                bool kappa_zero, double tol, int max_iter, const std::string& out_path) {
    const auto doc = parse_surface_document(read_file(surface_path));
    const auto metric = doc.metric();
    const int n = metric.surface.num_cusps();
    CurvatureTarget target{resolve_target(doc, kappa_flag, kappa_zero, n)};
    SolveOptions opts;
    opts.tol_resid = tol;
    opts.max_iterations = max_iter;
    const Vector r0 = resolve_weights(doc, {}, n);
    const auto rep = solve(metric, target, opts, r0);
    emit(make_result(rep.state, rep.flip_log, rep.iterations, rep.residual, rep.residual_trace,
                     std::nullopt),
         out_path);
    return 0;
}

int run_uniformize(const std::string& metric_path, const std::vector<double>& kappa_flag,
                   bool kappa_zero, double tol, int max_iter, const std::string& out_path) {
    const auto doc = parse_surface_document(read_file(metric_path));
    // lengths are lower-boundary lengths here
    auto s = doc.surface();
    if (static_cast<int>(doc.edge_lengths.size()) != s.num_edges())
        throw ParseError("edge_lengths count does not match edge count");
    const PolyhedralMetric pm(s, to_vector(doc.edge_lengths));
    const ComplexState before = from_polyhedral(pm);
    const int n = s.num_cusps();
    CurvatureTarget target{resolve_target(doc, kappa_flag, kappa_zero, n)};
    SolveOptions opts;
    opts.tol_resid = tol;
    opts.max_iterations = max_iter;
    const auto rep = solve(before.metric, target, opts, before.weights);
    const Vector u = conformal_factors(before, rep.state);
    const double audit = conformal_relation_residual(before, rep.state);
    if (!(audit <= 1e-12))
        throw Error("conformal edge relation audit failed: " + std::to_string(audit));
    emit(make_result(rep.state, rep.flip_log, rep.iterations, rep.residual, rep.residual_trace, u),
         out_path);
    return 0;
}

int run_delaunay(const std::string& surface_path, const std::vector<double>& weights_flag,
                 const std::string& out_path) {
    const auto doc = parse_surface_document(read_file(surface_path));
    const auto metric = doc.metric();
    const Vector r = resolve_weights(doc, weights_flag, metric.surface.num_cusps());
    const auto res = make_delaunay_traced(metric, r);
    emit(make_result(res.state, res.flips, 0, 0.0, {}, std::nullopt), out_path);
    return 0;
}

struct CheckTable {
    bool all_pass = true;
    void row(const std::string& name, bool pass, const std::string& note = "") {
        std::printf("%-28s %s%s%s\n", name.c_str(), pass ? "PASS" : "FAIL", note.empty() ? "" : "  ",
                    note.c_str());
        all_pass = all_pass && pass;
    }
};

int run_check(const std::string& surface_path, const std::vector<double>& weights_flag) {
    CheckTable table;
    SurfaceDocument doc;
    try {
        doc = parse_surface_document(read_file(surface_path));
    } catch (const Error& e) {
        table.row("parse", false, e.what());
        return 1;
    }
    table.row("parse", true);

    DecoratedMetric metric;
    try {
        metric = doc.metric();
        const auto r = validate(metric.surface);
        table.row("validate", true,
                  "g=" + std::to_string(r.genus) + " n=" + std::to_string(r.num_cusps) +
                      " F=" + std::to_string(r.num_triangles) + " E=" + std::to_string(r.num_edges));
    } catch (const Error& e) {
        table.row("validate", false, e.what());
        return 1;
    }

    const Vector r = resolve_weights(doc, weights_flag, metric.surface.num_cusps());

    bool admissible = true;
    std::string adm_note;
    for (int t = 0; t < metric.surface.num_triangles() && admissible; ++t) {
        const auto lt = detail::triangle_lengths(metric, t);
        const auto rt = detail::triangle_weights(metric, r, t);
        try {
            prism_angles(lt, rt);
        } catch (const InadmissiblePrismError& e) {
            admissible = false;
            adm_note = std::string("corner ") + std::to_string(e.corner()) + " of triangle " +
                       std::to_string(t);
        }
        if (admissible != admissible_prism(lt, rt)) {
            admissible = false;
            adm_note = "criteria disagree at triangle " + std::to_string(t);
        }
    }
    table.row("admissibility", admissible, adm_note);
    if (!admissible) return 1;

    // scalar-product route agrees with the closed forms
    double worst = 0.0;
    const auto st = assemble(metric, r);
    for (int t = 0; t < metric.surface.num_triangles(); ++t) {
        const auto lt = detail::triangle_lengths(metric, t);
        const auto rt = detail::triangle_weights(metric, r, t);
        const auto& hyp = st.prisms[t];
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, h = (i + 2) % 3;
            const auto c = embedded_corner(lt, rt, i);
            worst = std::max(worst, std::abs(c.omega - hyp.omega[i]));
            worst = std::max(worst, std::abs(c.phi_ij - hyp.phi[h]));
            worst = std::max(worst, std::abs(c.alpha_ij - hyp.alpha[i][j]));
            worst = std::max(worst, std::abs(c.lambda - hyp.lambda[i]));
        }
    }
    table.row("lorentz equivalence", worst <= 1e-8, "max deviation " + std::to_string(worst));

    try {
        const auto convex = make_delaunay_traced(metric, r).state;
        const auto X = hessian(convex);
        double fd_err = 0.0;
        const double h = 1e-6;
        for (int j = 0; j < convex.num_cusps(); ++j) {
            Vector rp = convex.weights, rm = convex.weights;
            rp[j] += h;
            rm[j] -= h;
            const Vector col = (make_delaunay_traced(convex.metric, rp).state.kappa -
                                make_delaunay_traced(convex.metric, rm).state.kappa) /
                               (2.0 * h);
            for (int i = 0; i < convex.num_cusps(); ++i)
                fd_err = std::max(fd_err,
                                  std::abs(X(i, j) - col[i]) / std::max(1.0, std::abs(X(i, j))));
        }
        table.row("hessian fd audit", fd_err <= 1e-5, "max rel err " + std::to_string(fd_err));
        const double gb = std::abs(gauss_bonnet_residual(convex));
        table.row("gauss-bonnet", gb <= 1e-9, "residual " + std::to_string(gb));
    } catch (const Error& e) {
        table.row("hessian fd audit", false, e.what());
        return 1;
    }

    return table.all_pass ? 0 : 1;
}

int error_exit(const char* kind, const std::string& message, int code) {
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex prismatic complexes over decorated cusp surfaces"};
    app.require_subcommand(1);

    std::string surface_path, out_path;
    std::vector<double> kappa_flag, weights_flag;
    bool kappa_zero = false;
    double tol = 1e-10;
    int max_iter = 100;

    auto add_common = [&](CLI::App* cmd, const char* input_name) {
        cmd->add_option(input_name, surface_path)->required();
        cmd->add_option("--out", out_path, "output file (stdout if omitted)");
    };

    auto* realize = app.add_subcommand("realize", "realize prescribed edge curvatures");
    add_common(realize, "--surface");
    auto* rk = realize->add_option("--kappa", kappa_flag, "target curvatures, comma separated")
                   ->delimiter(',');
    realize->add_flag("--kappa-zero", kappa_zero, "target zero curvature everywhere")
        ->excludes(rk);
    realize->add_option("--tol", tol, "residual tolerance");
    realize->add_option("--max-iter", max_iter, "iteration cap");

    auto* uniformize =
        app.add_subcommand("uniformize", "prescribed curvatures in a discrete conformal class");
    add_common(uniformize, "--metric");
    auto* uk = uniformize->add_option("--kappa", kappa_flag, "target curvatures, comma separated")
                   ->delimiter(',');
    uniformize->add_flag("--kappa-zero", kappa_zero, "target zero curvature everywhere")
        ->excludes(uk);
    uniformize->add_option("--tol", tol, "residual tolerance");
    uniformize->add_option("--max-iter", max_iter, "iteration cap");

    auto* delaunay = app.add_subcommand("delaunay", "flip convex and report angles");
    add_common(delaunay, "--surface");
    delaunay->add_option("--weights", weights_flag, "truncation weights, comma separated")
        ->delimiter(',');

    auto* check = app.add_subcommand("check", "validate and audit a document");
    check->add_option("--surface", surface_path)->required();
    check->add_option("--weights", weights_flag, "truncation weights, comma separated")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (realize->parsed())
            return run_realize(surface_path, kappa_flag, kappa_zero, tol, max_iter, out_path);
        if (uniformize->parsed())
            return run_uniformize(surface_path, kappa_flag, kappa_zero, tol, max_iter, out_path);
        if (delaunay->parsed()) return run_delaunay(surface_path, weights_flag, out_path);
        if (check->parsed()) return run_check(surface_path, weights_flag);
    } catch (const InfeasibleTargetError& e) {
        return error_exit("infeasible-target", e.what(), 2);
    } catch (const NoConvergenceError& e) {
        return error_exit("no-convergence", e.what(), 3);
    } catch (const StuckError& e) {
        return error_exit("stuck", e.what(), 3);
    } catch (const ParseError& e) {
        return error_exit("parse", e.what(), 1);
    } catch (const Error& e) {
        return error_exit("error", e.what(), 1);
    }
    return 1;
}
