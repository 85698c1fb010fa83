// Copyright 2026 The augsurf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command implementations behind the augsurf executable. Exit codes: 0 ok,
// 1 data or construction error, 2 usage error.

#pragma once

#include <augsurf/curve_metrics.hpp>
#include <augsurf/edge_params_json.hpp>
#include <augsurf/errors.hpp>
#include <augsurf/mesh_gen.hpp>
#include <augsurf/quad_mesh.hpp>
#include <augsurf/spline_core.hpp>
#include <augsurf/surface.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace augsurf::cli {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

/// Raised for contradictory or malformed options.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BuildConfig {
    std::string input;
    std::string family = "d5c2p2s4";
    std::string mode = "g2";
    std::string param = "centripetal";
    std::optional<double> alpha;
    int samples = 8;
    int r_degree = 2;
    int report_samples = 16;
    bool finite_differences = false;
    std::string out;    // PLY, default <input stem>.ply
    std::string report; // JSON, default <input stem>.report.json
    std::string obj;    // optional triangle OBJ
    std::string params; // optional edge-interval sidecar
};

struct CurveConfig {
    std::string input;
    std::string family = "d5c2p2s4";
    std::string param = "centripetal";
    std::optional<double> alpha;
    int samples = 200;
    bool open = false;
    std::string csv; // default <input stem>.csv
    std::string svg; // default <input stem>.svg
};

struct CompareConfig {
    std::string input;
    std::string family = "d5c2p2s4";
    std::string mode = "g2";
    std::string param = "centripetal";
    std::optional<double> alpha;
    int samples = 8;
    int section_samples = 32;
    std::string report; // default <input stem>.compare.json
};

struct GenConfig {
    std::string kind;
    std::string out;
    int n = 12;
    int m = 8;
    double major = 3.0;
    double minor = 1.0;
    double warp = 0.0;
    double jitter = 0.0;
    std::uint64_t seed = 1;
};

namespace detail {

inline std::string default_path(const std::string& input, const std::string& suffix) {
    std::filesystem::path p(input);
    return (p.parent_path() / p.stem()).string() + suffix;
}

inline SplineFamily parse_family(const std::string& s) {
    try {
        return family_from_name(s);
    }
    catch (const Error& e) {
        throw UsageError(e.message());
    }
}

inline ParamMethod parse_param(const std::string& s) {
    try {
        return param_method_from_name(s);
    }
    catch (const Error& e) {
        throw UsageError(e.message());
    }
}

inline PatchMode parse_mode(const std::string& s) {
    if (s == "g1") {
        return PatchMode::G1;
    }
    if (s == "g2") {
        return PatchMode::G2;
    }
    throw UsageError("unknown mode '" + s + "' (g1 or g2)");
}

inline void check_alpha(const std::optional<double>& alpha) {
    if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) {
        throw UsageError("--alpha must lie in [0, 1]");
    }
}

inline BuildOptions build_options(const std::string& family, const std::string& mode, const std::string& param,
                                  const std::optional<double>& alpha, int r_degree) {
    BuildOptions o;
    o.family = parse_family(family);
    o.mode = parse_mode(mode);
    o.param = parse_param(param);
    check_alpha(alpha);
    if (alpha) {
        if (o.param != ParamMethod::Centripetal) {
            throw UsageError("--alpha only applies to centripetal parameters");
        }
        o.alpha = *alpha;
    }
    if (o.mode == PatchMode::G2 && o.family.k < 2) {
        throw UsageError("g2 mode needs a family with k >= 2 (d5c2p2s4)");
    }
    if (r_degree != 1 && r_degree != 2) {
        throw UsageError("--r-degree must be 1 or 2");
    }
    o.r_degree = r_degree;
    return o;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
}

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct CurvatureSummary {
    double min = 0.0;
    double max = 0.0;
    double mean_abs = 0.0;
};

inline CurvatureSummary summarize(const std::vector<double>& h) {
    CurvatureSummary s;
    int n = 0;
    bool first = true;
    for (double x : h) {
        if (std::isnan(x)) {
            continue;
        }
        s.min = first ? x : std::min(s.min, x);
        s.max = first ? x : std::max(s.max, x);
        s.mean_abs += std::abs(x);
        first = false;
        ++n;
    }
    s.mean_abs = n ? s.mean_abs / n : 0.0;
    return s;
}

} // namespace detail

/// Applies keys of a JSON config file to options that were not given on the
/// command line.
inline void apply_config(CLI::App& app, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    }
    catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Io, std::string("cannot parse config: ") + e.what());
    }
    if (!j.is_object()) {
        throw UsageError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        std::string flag = "--" + key;
        for (char& c : flag) {
            c = c == '_' ? '-' : c;
        }
        CLI::Option* opt = nullptr;
        try {
            opt = app.get_option(flag);
        }
        catch (const CLI::OptionNotFound&) {
            throw UsageError("unknown config key '" + key + "'");
        }
        if (opt->count() > 0) {
            continue;
        }
        const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        opt->add_result(text);
        opt->run_callback();
    }
}

inline int cmd_build(const BuildConfig& cfg, std::ostream& out) {
    const BuildOptions opt0 = detail::build_options(cfg.family, cfg.mode, cfg.param, cfg.alpha, cfg.r_degree);
    if (cfg.samples < 1) {
        throw UsageError("--samples must be at least 1");
    }
    if (cfg.report_samples < 2) {
        throw UsageError("--report-samples must be at least 2");
    }
    BuildOptions opt = opt0;
    const QuadMesh mesh = build_connectivity(load_obj(cfg.input));
    if (!cfg.params.empty()) {
        opt.params = load_edge_params(mesh, cfg.params);
    }
    const CompositeSurface S = build_surface(mesh, opt);
    TriangleMesh T = tessellate(S, cfg.samples);
    AnalysisOptions ao;
    ao.finite_differences = cfg.finite_differences;
    const int degenerate = analysis_fields(S, T, ao);
    const ContinuityReport rep = continuity_report(S, cfg.report_samples);

    const std::string ply = cfg.out.empty() ? detail::default_path(cfg.input, ".ply") : cfg.out;
    const std::string json = cfg.report.empty() ? detail::default_path(cfg.input, ".report.json") : cfg.report;
    export_ply(T, ply);
    if (!cfg.obj.empty()) {
        export_obj(T, cfg.obj);
    }
    nlohmann::ordered_json j;
    j["build"] = build_stats_json(S);
    j["tessellation"] = {{"samples_per_edge", cfg.samples},
                         {"vertices", T.positions.size()},
                         {"triangles", T.triangles.size()},
                         {"weld_failures", T.weld_failures},
                         {"degenerate_normals", degenerate}};
    j["continuity"] = continuity_report_json(rep);
    detail::write_text(json, j.dump(2) + "\n");

    out << "patches: " << S.stats.regular_patches << " regular, " << S.stats.gregory_patches << " gregory\n";
    out << "tessellation: " << T.positions.size() << " vertices, " << T.triangles.size() << " triangles\n";
    out << "max position gap: " << detail::fmt_short(rep.max_position_gap()) << "\n";
    out << "wrote " << ply << ", " << json << (cfg.obj.empty() ? "" : ", " + cfg.obj) << "\n";
    return kOk;
}

/// Points, one per line, 2 or 3 coordinates; '#' starts a comment.
inline std::vector<Vec3> read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    }
    std::vector<Vec3> pts;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = line.substr(0, line.find('#'));
        for (char& c : line) {
            c = c == ',' ? ' ' : c;
        }
        std::istringstream ls(line);
        std::vector<double> v;
        double x = 0.0;
        while (ls >> x) {
            v.push_back(x);
        }
        if (!ls.eof()) {
            throw Error(ErrorKind::Io, path + ":" + std::to_string(line_no) + ": not a number");
        }
        if (v.empty()) {
            continue;
        }
        if (v.size() != 2 && v.size() != 3) {
            throw Error(ErrorKind::Io, path + ":" + std::to_string(line_no) + ": expected 2 or 3 coordinates");
        }
        pts.emplace_back(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
    }
    return pts;
}

struct CurveResult {
    std::vector<CurveSample> samples;
    Vec3 normal = Vec3::UnitZ();
    int sign_changes = 0;
};

inline CurveResult sample_polyline(const std::vector<Vec3>& pts, const SplineFamily& family, ParamMethod param,
                                   double alpha, bool closed, int samples) {
    if (param == ParamMethod::Mean) {
        throw UsageError("mean parameters apply to meshes, not single curves");
    }
    const std::size_t need = static_cast<std::size_t>(family.w);
    if (pts.size() < need) {
        throw UsageError("a curve needs at least " + std::to_string(need) + " points");
    }
    const auto curve = make_curve(pts, family, param_alpha(param, alpha), closed);
    CurveResult r;
    r.normal = best_fit_normal(pts);
    r.samples = sample_curve(curve, samples, r.normal);
    std::vector<double> k;
    for (const auto& s : r.samples) {
        k.push_back(s.kappa);
    }
    r.sign_changes = count_sign_changes(k, closed);
    return r;
}

inline std::string curve_svg(const std::vector<Vec3>& pts, const CurveResult& r, bool closed) {
    const Vec3 n = r.normal;
    const Vec3 e1 = (std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(n).cross(n).normalized() * -1.0;
    const Vec3 e2 = n.cross(e1);
    auto proj = [&](const Vec3& p) { return std::pair<double, double>{p.dot(e1), p.dot(e2)}; };
    double x0 = 1e300;
    double x1 = -1e300;
    double y0 = 1e300;
    double y1 = -1e300;
    double kmax = 0.0;
    for (const auto& s : r.samples) {
        const auto [x, y] = proj(s.p);
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
        kmax = std::max(kmax, std::abs(s.kappa));
    }
    for (const auto& p : pts) {
        const auto [x, y] = proj(p);
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    const double extent = std::max({x1 - x0, y1 - y0, 1e-12});
    const double comb = kmax > 0.0 ? 0.15 * extent / kmax : 0.0;
    const double pad = 0.2 * extent;
    const double size = 800.0;
    const double scale = size / (extent + 2.0 * pad);
    auto sx = [&](double x) { return detail::fmt_short((x - x0 + pad) * scale); };
    auto sy = [&](double y) { return detail::fmt_short((y1 + pad - y) * scale); };
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    svg << "<polyline fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 4\" points=\"";
    for (std::size_t i = 0; i < pts.size() + (closed ? 1 : 0); ++i) {
        const auto [x, y] = proj(pts[i % pts.size()]);
        svg << sx(x) << ',' << sy(y) << ' ';
    }
    svg << "\"/>\n<g stroke=\"#c33\" stroke-width=\"0.6\">\n";
    std::ostringstream tips;
    for (const auto& s : r.samples) {
        const Vec3 t = s.d1.normalized();
        const Vec3 inward = n.cross(t);
        const Vec3 q = s.p - comb * s.kappa * inward;
        const auto [ax, ay] = proj(s.p);
        const auto [bx, by] = proj(q);
        svg << "<line x1=\"" << sx(ax) << "\" y1=\"" << sy(ay) << "\" x2=\"" << sx(bx) << "\" y2=\"" << sy(by) << "\"/>\n";
        tips << sx(bx) << ',' << sy(by) << ' ';
    }
    svg << "</g>\n<polyline fill=\"none\" stroke=\"#c33\" points=\"" << tips.str() << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\" points=\"";
    for (const auto& s : r.samples) {
        const auto [x, y] = proj(s.p);
        svg << sx(x) << ',' << sy(y) << ' ';
    }
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

inline int cmd_curve(const CurveConfig& cfg, std::ostream& out) {
    const SplineFamily family = detail::parse_family(cfg.family);
    const ParamMethod param = detail::parse_param(cfg.param);
    detail::check_alpha(cfg.alpha);
    if (cfg.samples < 2) {
        throw UsageError("--samples must be at least 2");
    }
    const auto pts = read_points(cfg.input);
    const auto r = sample_polyline(pts, family, param, cfg.alpha.value_or(0.5), !cfg.open, cfg.samples);
    std::ostringstream csv;
    csv << "x,px,py,pz,curvature\n";
    for (const auto& s : r.samples) {
        csv << detail::fmt(s.x) << ',' << detail::fmt(s.p.x()) << ',' << detail::fmt(s.p.y()) << ','
            << detail::fmt(s.p.z()) << ',' << detail::fmt(s.kappa) << '\n';
    }
    const std::string csv_path = cfg.csv.empty() ? detail::default_path(cfg.input, ".csv") : cfg.csv;
    const std::string svg_path = cfg.svg.empty() ? detail::default_path(cfg.input, ".svg") : cfg.svg;
    detail::write_text(csv_path, csv.str());
    detail::write_text(svg_path, curve_svg(pts, r, !cfg.open));
    out << "samples: " << r.samples.size() << "\n";
    out << "curvature sign changes: " << r.sign_changes << "\n";
    out << "wrote " << csv_path << ", " << svg_path << "\n";
    return kOk;
}

struct CompareResult {
    nlohmann::ordered_json report;
    int augmented_sign_changes = 0;
    int mean_sign_changes = 0;
    double max_position_delta = 0.0;
    double augmented_gap = 0.0;
    double mean_gap = 0.0;
};

/// Builds the surface twice, with the chosen intervals and with mean
/// intervals, on the same tessellation.
inline CompareResult compare_parametrizations(const QuadMesh& input, const BuildOptions& aug, int samples,
                                              int section_samples) {
    const QuadMesh mesh = input.has_connectivity() ? input : build_connectivity(input);
    BuildOptions mean = aug;
    mean.param = ParamMethod::Mean;
    mean.params.reset();
    const CompositeSurface Sm = build_surface(mesh, mean);
    const CompositeSurface Sa = build_surface(mesh, aug);
    TriangleMesh Ta = tessellate(Sa, samples);
    TriangleMesh Tm = tessellate(Sm, samples);
    analysis_fields(Sa, Ta);
    analysis_fields(Sm, Tm);
    if (Ta.positions.size() != Tm.positions.size()) {
        throw Error(ErrorKind::Construction, "tessellations of the two builds differ in size");
    }
    CompareResult r;
    double sum = 0.0;
    for (std::size_t i = 0; i < Ta.positions.size(); ++i) {
        const double d = (Ta.positions[i] - Tm.positions[i]).norm();
        r.max_position_delta = std::max(r.max_position_delta, d);
        sum += d;
    }
    const double mean_delta = Ta.positions.empty() ? 0.0 : sum / static_cast<double>(Ta.positions.size());
    auto side = [&](const CompositeSurface& S, const TriangleMesh& T, int& sign_changes, double& gap) {
        const auto sec = section_curvature_stats(S.mesh, S.params, S.options.family, section_samples);
        const auto h = detail::summarize(T.channel("mean_curvature")->values);
        const auto rep = continuity_report(S, 16);
        sign_changes = sec.sign_changes;
        gap = rep.max_position_gap();
        nlohmann::ordered_json j;
        j["param"] = std::string(param_method_name(S.options.param));
        j["section_curves"] = sec.curves;
        j["section_sign_changes"] = sec.sign_changes;
        j["section_curvature_min"] = sec.min_curvature;
        j["section_curvature_max"] = sec.max_curvature;
        j["mean_curvature_min"] = h.min;
        j["mean_curvature_max"] = h.max;
        j["mean_curvature_mean_abs"] = h.mean_abs;
        j["max_position_gap"] = gap;
        return j;
    };
    r.report["samples_per_edge"] = samples;
    r.report["vertices"] = Ta.positions.size();
    r.report["augmented"] = side(Sa, Ta, r.augmented_sign_changes, r.augmented_gap);
    r.report["mean"] = side(Sm, Tm, r.mean_sign_changes, r.mean_gap);
    r.report["position_delta"] = {{"max", r.max_position_delta}, {"mean", mean_delta}};
    return r;
}

inline int cmd_compare(const CompareConfig& cfg, std::ostream& out) {
    const BuildOptions opt = detail::build_options(cfg.family, cfg.mode, cfg.param, cfg.alpha, 2);
    if (opt.param == ParamMethod::Mean) {
        throw UsageError("compare needs a non-mean parametrization for the augmented surface");
    }
    if (cfg.samples < 1 || cfg.section_samples < 1) {
        throw UsageError("sample counts must be positive");
    }
    const auto r = compare_parametrizations(load_obj(cfg.input), opt, cfg.samples, cfg.section_samples);
    const std::string path = cfg.report.empty() ? detail::default_path(cfg.input, ".compare.json") : cfg.report;
    detail::write_text(path, r.report.dump(2) + "\n");
    out << "max position delta: " << detail::fmt_short(r.max_position_delta) << "\n";
    out << "section sign changes: augmented " << r.augmented_sign_changes << ", mean " << r.mean_sign_changes << "\n";
    out << "wrote " << path << "\n";
    return kOk;
}

inline QuadMesh generate(const GenConfig& cfg) {
    if (cfg.n < 1 || cfg.m < 1) {
        throw UsageError("--n and --m must be positive");
    }
    QuadMesh m;
    if (cfg.kind == "plane") {
        m = gen::plane_grid(cfg.n, cfg.m);
    }
    else if (cfg.kind == "torus") {
        if (cfg.n < 3 || cfg.m < 3 || !(cfg.warp >= 0.0 && cfg.warp < 1.0)) {
            throw UsageError("torus needs n, m >= 3 and warp in [0, 1)");
        }
        m = gen::torus_grid(cfg.n, cfg.m, cfg.major, cfg.minor, cfg.warp);
    }
    else if (cfg.kind == "torus-uneven") {
        if (cfg.n < 3 || cfg.m < 3 || !(cfg.warp >= 0.0 && cfg.warp < 1.0)) {
            throw UsageError("torus-uneven needs n, m >= 3 and warp in [0, 1)");
        }
        m = gen::torus_uneven(cfg.n, cfg.m, cfg.warp, cfg.major, cfg.minor);
    }
    else if (cfg.kind == "cube") {
        m = gen::cube();
    }
    else if (cfg.kind == "sphere") {
        m = gen::quad_sphere(cfg.n);
    }
    else if (cfg.kind == "planar-irregular") {
        if (cfg.n < 4) {
            throw UsageError("planar-irregular needs n >= 4");
        }
        m = gen::planar_irregular(cfg.n);
    }
    else if (cfg.kind == "torus-irregular") {
        if (cfg.n < 6 || cfg.m < 6) {
            throw UsageError("torus-irregular needs n, m >= 6");
        }
        m = gen::torus_irregular(cfg.n, cfg.m, cfg.major, cfg.minor);
    }
    else {
        throw UsageError("unknown mesh kind '" + cfg.kind + "'");
    }
    if (cfg.jitter > 0.0) {
        m = gen::jitter(std::move(m), cfg.jitter, cfg.seed);
    }
    m.halfedges.clear();
    m.edges.clear();
    m.fans.clear();
    m.boundary_vertex.clear();
    return m;
}

inline int cmd_gen(const GenConfig& cfg, std::ostream& out) {
    const QuadMesh m = generate(cfg);
    save_obj(m, cfg.out);
    out << "wrote " << cfg.out << ": " << m.vertices.size() << " vertices, " << m.faces.size() << " faces\n";
    return kOk;
}

/// Parses the command line and runs one command.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local interpolating surfaces on quad meshes with augmented parametrization"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    BuildConfig bc;
    std::string build_config;
    auto* b = app.add_subcommand("build", "Build, tessellate and audit a surface from an OBJ quad mesh");
    b->add_option("input", bc.input, "input OBJ")->required();
    b->add_option("--family", bc.family, "d3c1p2s4 or d5c2p2s4")->capture_default_str();
    b->add_option("--mode", bc.mode, "g1 or g2")->capture_default_str();
    b->add_option("--param", bc.param, "uniform, chordal, centripetal or mean")->capture_default_str();
    b->add_option("--alpha", bc.alpha, "centripetal exponent override");
    b->add_option("--samples", bc.samples, "tessellation samples per patch edge")->capture_default_str();
    b->add_option("--r-degree", bc.r_degree, "degree of the transversal field, 1 or 2")->capture_default_str();
    b->add_option("--report-samples", bc.report_samples, "continuity samples per edge")->capture_default_str();
    b->add_flag("--fd", bc.finite_differences, "finite-difference curvature instead of exact partials");
    b->add_option("--out", bc.out, "PLY output");
    b->add_option("--report", bc.report, "continuity report JSON");
    b->add_option("--obj", bc.obj, "triangle OBJ output");
    b->add_option("--params", bc.params, "edge interval JSON sidecar");
    b->add_option("--config", build_config, "JSON config; flags win");

    CurveConfig cc;
    auto* c = app.add_subcommand("curve", "Sample a local interpolating curve with its curvature comb");
    c->add_option("input", cc.input, "points file, 2 or 3 coordinates per line")->required();
    c->add_option("--family", cc.family)->capture_default_str();
    c->add_option("--param", cc.param, "uniform, chordal or centripetal")->capture_default_str();
    c->add_option("--alpha", cc.alpha, "centripetal exponent override");
    c->add_option("--samples", cc.samples, "number of samples")->capture_default_str();
    c->add_flag("--open", cc.open, "open polyline (closed by default)");
    c->add_option("--out", cc.csv, "CSV output");
    c->add_option("--svg", cc.svg, "SVG output");

    CompareConfig pc;
    auto* p = app.add_subcommand("compare", "Compare a parametrization against mean parameters on a regular mesh");
    p->add_option("input", pc.input, "input OBJ")->required();
    p->add_option("--family", pc.family)->capture_default_str();
    p->add_option("--mode", pc.mode)->capture_default_str();
    p->add_option("--param", pc.param, "parametrization of the augmented surface")->capture_default_str();
    p->add_option("--alpha", pc.alpha, "centripetal exponent override");
    p->add_option("--samples", pc.samples, "tessellation samples per patch edge")->capture_default_str();
    p->add_option("--section-samples", pc.section_samples, "curvature samples per section segment")
        ->capture_default_str();
    p->add_option("--report", pc.report, "report JSON");

    GenConfig gc;
    auto* g = app.add_subcommand("gen", "Write a test mesh");
    g->add_option("kind", gc.kind, "plane, torus, torus-uneven, cube, sphere, planar-irregular, torus-irregular")->required();
    g->add_option("out", gc.out, "output OBJ")->required();
    g->add_option("--n", gc.n)->capture_default_str();
    g->add_option("--m", gc.m)->capture_default_str();
    g->add_option("--major", gc.major)->capture_default_str();
    g->add_option("--minor", gc.minor)->capture_default_str();
    g->add_option("--warp", gc.warp, "uneven angular sampling (torus, torus-uneven), in [0, 1)")->capture_default_str();
    g->add_option("--jitter", gc.jitter, "uniform noise amplitude")->capture_default_str();
    g->add_option("--seed", gc.seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsageError;
    }
    try {
        if (b->parsed()) {
            if (!build_config.empty()) {
                apply_config(*b, build_config);
            }
            return cmd_build(bc, out);
        }
        if (c->parsed()) {
            return cmd_curve(cc, out);
        }
        if (p->parsed()) {
            return cmd_compare(pc, out);
        }
        return cmd_gen(gc, out);
    }
    catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }
    catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }
    catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
}

} // namespace augsurf::cli
