#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "warpcone/cat_verify.hpp"
#include "warpcone/errors.hpp"
#include "warpcone/filling_conditions.hpp"
#include "warpcone/glue_model.hpp"
#include "warpcone/json_io.hpp"
#include "warpcone/warp_synth.hpp"
#include "warpcone/warped_cone.hpp"

namespace {

using warpcone::io::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitSolverFailure = 3;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << warpcone::io::dump(j);
    } else {
        warpcone::io::save_file(out_path, j);
    }
}

bool parse_point(const std::string& s, warpcone::cone::ConePoint& p) {
    auto comma = s.find(',');
    if (comma == std::string::npos) return false;
    try {
        p.t = std::stod(s.substr(0, comma));
        p.theta = std::stod(s.substr(comma + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

void write_csv(const std::string& path,
               const warpcone::cone::GeodesicPath& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw warpcone::invalid_input("cannot-open: " + path);
    out << "t,theta,s\n";
    char buf[160];
    for (std::size_t i = 0; i < g.samples.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", g.samples[i].t,
                      g.samples[i].theta, g.cum_length[i]);
        out << buf;
    }
}

int cmd_synth(double b, double delta, const std::string& profile,
              const std::string& out) {
    auto f = warpcone::warp::synthesize(
        b, delta, warpcone::warp::profile_from_name(profile));
    auto cert_ae = warpcone::warp::check_fk_convex_ae(f, f.K(), 1 << 12);
    auto cert_barrier = warpcone::warp::check_fk_convex_barrier(
        f, f.K(), {{f.t0(), f.b()}, {f.b(), f.b() + 5.0}});
    json j = warpcone::io::warping_to_json(f);
    json cert;
    cert["fk_ae_pass"] = cert_ae.pass;
    cert["fk_barrier_pass"] = cert_barrier.pass;
    j["certificate"] = cert;
    emit(j, out);
    std::cerr << "synthesized warping function: b=" << f.b()
              << " delta=" << f.delta() << " K=" << f.K()
              << " certificates=" << (cert_ae.pass && cert_barrier.pass
                                          ? "pass"
                                          : "FAIL")
              << "\n";
    return cert_ae.pass && cert_barrier.pass ? kExitOk : kExitCheckFailed;
}

int cmd_geodesic(const std::string& cone_path, const std::string& from_s,
                 const std::string& to_s, bool use_oracle,
                 const std::string& out, const std::string& csv) {
    warpcone::cone::ConeSpace cone =
        warpcone::io::cone_from_json(warpcone::io::load_file(cone_path));
    warpcone::cone::ConePoint a, b;
    if (!parse_point(from_s, a) || !parse_point(to_s, b))
        throw warpcone::invalid_input("bad-point: expected t,theta");
    auto g = warpcone::cone::geodesic(cone, a, b);
    json j;
    j["schema"] = warpcone::io::kSchema;
    j["type"] = "GeodesicReport";
    j["length"] = g.length;
    j["through_tip"] = g.through_tip;
    j["min_t"] = g.min_t;
    j["oracle_fallback"] = g.oracle_fallback;
    if (g.clairaut) j["clairaut"] = *g.clairaut;
    if (use_oracle) {
        double oracle =
            warpcone::cone::distance_oracle(cone, a, b, 400, 800);
        j["oracle_length"] = oracle;
        j["oracle_rel_error"] =
            std::abs(oracle - g.length) / std::max(g.length, 1e-12);
    }
    if (!csv.empty()) write_csv(csv, g);
    emit(j, out);
    return kExitOk;
}

int cmd_cat(const std::string& cone_path, const std::string& K_arg,
            int triangles, std::uint64_t seed, const std::string& out) {
    warpcone::cone::ConeSpace cone =
        warpcone::io::cone_from_json(warpcone::io::load_file(cone_path));
    double K;
    if (K_arg == "auto") {
        K = cone.f.K();
    } else {
        try {
            K = std::stod(K_arg);
        } catch (const std::exception&) {
            throw warpcone::invalid_input("bad-K");
        }
    }
    auto rep = warpcone::cat::cat_test(cone, K, triangles, 8, seed);
    json j;
    j["schema"] = warpcone::io::kSchema;
    j["type"] = "CatReport";
    j["K_tested"] = rep.K_tested;
    j["triangles_sampled"] = rep.triangles_sampled;
    j["triangles_skipped"] = rep.triangles_skipped;
    j["comparisons"] = rep.comparisons;
    j["max_violation"] = rep.max_violation;
    j["pass"] = rep.pass;
    j["seed"] = rep.seed;
    if (triangles <= 0)
        j["warning"] = "no triangles sampled; pass is vacuous";
    emit(j, out);
    return rep.pass ? kExitOk : kExitCheckFailed;
}

int cmd_check(const std::string& manifold_path,
              const std::string& subspace_path, const std::string& out) {
    auto m = warpcone::io::manifold_from_json(
        warpcone::io::load_file(manifold_path));
    json j;
    j["schema"] = warpcone::io::kSchema;
    j["type"] = "ConditionReport";
    auto a = warpcone::fill::check_condition_A(m);
    json ja;
    ja["feasible"] = a.feasible;
    ja["margin"] = a.margin;
    ja["witness_b"] = a.witness_b;
    ja["witness_c"] = a.witness_c;
    j["condition_A"] = ja;
    j["clubsuit"] = warpcone::fill::check_clubsuit(m);
    if (m.surface) {
        auto g = warpcone::fill::genus_obstruction(m);
        json jg;
        jg["area"] = g.area;
        jg["passes_area_bound"] = g.passes_area_bound;
        jg["genus_ok"] = g.genus_ok;
        jg["hyperbolic_valid"] = g.hyperbolic_valid;
        j["genus_obstruction"] = jg;
    }
    bool ok = a.feasible;
    if (!subspace_path.empty()) {
        auto s = warpcone::io::subspace_from_json(
            warpcone::io::load_file(subspace_path));
        auto b = warpcone::fill::check_condition_B(m, s);
        json jb;
        jb["B1"] = b.B1;
        jb["B2"] = b.B2;
        jb["B3"] = b.B3;
        jb["detail"] = b.detail;
        j["condition_B"] = jb;
        ok = ok && b.B1 && b.B2 && b.B3;
    }
    emit(j, out);
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_oracle(const std::string& cone_path, const std::string& from_s,
               const std::string& to_s, int n_t, int n_theta,
               const std::string& out) {
    warpcone::cone::ConeSpace cone =
        warpcone::io::cone_from_json(warpcone::io::load_file(cone_path));
    warpcone::cone::ConePoint a, b;
    if (!parse_point(from_s, a) || !parse_point(to_s, b))
        throw warpcone::invalid_input("bad-point: expected t,theta");
    double d = warpcone::cone::distance_oracle(cone, a, b, n_t, n_theta);
    json j;
    j["schema"] = warpcone::io::kSchema;
    j["type"] = "OracleReport";
    j["length"] = d;
    j["n_t"] = n_t;
    j["n_theta"] = n_theta;
    emit(j, out);
    return kExitOk;
}

int cmd_seam(const std::string& manifold_path, double b, double delta,
             double b_prime, int pairs, std::uint64_t seed,
             const std::string& out) {
    auto m = warpcone::io::manifold_from_json(
        warpcone::io::load_file(manifold_path));
    auto f = warpcone::warp::synthesize(b, delta);
    warpcone::glue::GluedSpace g(m, f, b_prime);
    json j;
    j["schema"] = warpcone::io::kSchema;
    j["type"] = "SeamReport";
    bool all_pass = true;
    json comps = json::array();
    for (std::size_t c = 0; c < g.cones.size(); ++c) {
        auto rep = warpcone::glue::seam_isometry_check(g, c, pairs, seed);
        json jc;
        jc["component"] = c;
        jc["pairs_tested"] = rep.pairs_tested;
        jc["pairs_rejected"] = rep.pairs_rejected;
        jc["max_rel_error"] = rep.max_rel_error;
        jc["pass"] = rep.pass;
        comps.push_back(jc);
        all_pass = all_pass && rep.pass;
    }
    j["components"] = comps;
    j["seed"] = seed;
    j["pass"] = all_pass;
    emit(j, out);
    return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_probe(const std::string& manifold_path,
              const std::string& subspace_path, int pairs,
              std::uint64_t seed, double lcr, const std::string& out) {
    auto m = warpcone::io::manifold_from_json(
        warpcone::io::load_file(manifold_path));
    auto s = warpcone::io::subspace_from_json(
        warpcone::io::load_file(subspace_path));
    s.validate(m);
    auto f = warpcone::warp::synthesize(s.b, warpcone::warp::delta_from_c(s.c));
    json j;
    j["schema"] = warpcone::io::kSchema;
    j["type"] = "ProbeReport";
    bool all_pass = true;
    json comps = json::array();
    for (std::size_t c = 0; c < m.boundary_lengths.size(); ++c) {
        warpcone::cone::Fiber fib{warpcone::cone::Fiber::Kind::Circle,
                                  m.boundary_lengths[c]};
        warpcone::cone::ConeSpace cone(f, fib, m.w);
        auto rep =
            warpcone::fill::local_convexity_probe(cone, s, pairs, seed, lcr, c);
        json jc;
        jc["component"] = c;
        jc["pairs_tested"] = rep.pairs_tested;
        jc["pairs_skipped"] = rep.pairs_skipped;
        jc["exits_detected"] = rep.exits_detected;
        jc["pass"] = rep.pass;
        comps.push_back(jc);
        all_pass = all_pass && rep.pass;
    }
    j["components"] = comps;
    j["seed"] = seed;
    j["pass"] = all_pass;
    emit(j, out);
    return all_pass ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"warpcone: warped-cone synthesis, geodesics, and curvature "
                 "condition checks"};
    app.require_subcommand(1);

    std::string out, csv, cone_path, from_s, to_s, manifold_path,
        subspace_path;
    std::string profile = "linear-derivative";
    std::string K_arg = "auto";
    double b = 1.0, delta = 0.5, b_prime = 0.0, lcr = 1.0;
    int triangles = 200, pairs = 100, n_t = 400, n_theta = 800;
    std::uint64_t seed = 0;

    auto* synth = app.add_subcommand("synth", "synthesize a warping function");
    synth->add_option("--b", b, "gluing point")->required();
    synth->add_option("--delta", delta, "apex slope")->required();
    synth->add_option("--profile", profile,
                      "interpolant profile: linear-derivative or smooth");
    synth->add_option("--out", out, "output JSON path (default stdout)");

    auto* geo = app.add_subcommand("geodesic", "solve a geodesic in a cone");
    geo->add_option("--cone", cone_path, "ConeSpace JSON")->required();
    geo->add_option("--from", from_s, "start point t,theta")->required();
    geo->add_option("--to", to_s, "end point t,theta")->required();
    bool use_oracle = false;
    geo->add_flag("--oracle", use_oracle, "cross-check with the mesh oracle");
    geo->add_option("--csv", csv, "polyline CSV output path");
    geo->add_option("--out", out, "output JSON path (default stdout)");

    auto* cat = app.add_subcommand("cat", "sampled CAT(K) comparison test");
    cat->add_option("--cone", cone_path, "ConeSpace JSON")->required();
    cat->add_option("--K", K_arg, "curvature bound, or 'auto'");
    cat->add_option("--triangles", triangles, "number of sampled triangles");
    cat->add_option("--seed", seed, "random seed");
    cat->add_option("--out", out, "output JSON path (default stdout)");

    auto* check = app.add_subcommand("check", "audit filling conditions");
    check->add_option("--manifold", manifold_path, "ManifoldDescriptor JSON")
        ->required();
    check->add_option("--subspace", subspace_path, "SubspaceDescriptor JSON");
    check->add_option("--out", out, "output JSON path (default stdout)");

    auto* oracle = app.add_subcommand("oracle", "mesh distance oracle");
    oracle->add_option("--cone", cone_path, "ConeSpace JSON")->required();
    oracle->add_option("--from", from_s, "start point t,theta")->required();
    oracle->add_option("--to", to_s, "end point t,theta")->required();
    oracle->add_option("--nt", n_t, "radial mesh resolution");
    oracle->add_option("--ntheta", n_theta, "fiber mesh resolution");
    oracle->add_option("--out", out, "output JSON path (default stdout)");

    auto* seam = app.add_subcommand("seam", "collar-band isometry check");
    seam->add_option("--manifold", manifold_path, "ManifoldDescriptor JSON")
        ->required();
    seam->add_option("--b", b, "gluing point")->required();
    seam->add_option("--delta", delta, "apex slope")->required();
    seam->add_option("--bprime", b_prime, "outer gluing point")->required();
    seam->add_option("--pairs", pairs, "number of sampled pairs");
    seam->add_option("--seed", seed, "random seed");
    seam->add_option("--out", out, "output JSON path (default stdout)");

    auto* probe = app.add_subcommand("probe", "local-convexity probe");
    probe->add_option("--manifold", manifold_path, "ManifoldDescriptor JSON")
        ->required();
    probe->add_option("--subspace", subspace_path, "SubspaceDescriptor JSON")
        ->required();
    probe->add_option("--pairs", pairs, "number of sampled pairs");
    probe->add_option("--seed", seed, "random seed");
    probe->add_option("--lcr", lcr, "local convexity radius constant");
    probe->add_option("--out", out, "output JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (synth->parsed()) return cmd_synth(b, delta, profile, out);
        if (geo->parsed())
            return cmd_geodesic(cone_path, from_s, to_s, use_oracle, out, csv);
        if (cat->parsed())
            return cmd_cat(cone_path, K_arg, triangles, seed, out);
        if (check->parsed()) return cmd_check(manifold_path, subspace_path, out);
        if (oracle->parsed())
            return cmd_oracle(cone_path, from_s, to_s, n_t, n_theta, out);
        if (seam->parsed())
            return cmd_seam(manifold_path, b, delta, b_prime, pairs, seed, out);
        if (probe->parsed())
            return cmd_probe(manifold_path, subspace_path, pairs, seed, lcr,
                             out);
    } catch (const warpcone::invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const warpcone::solver_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    return kExitOk;
}
