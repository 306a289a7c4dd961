#include "warpcone/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "warpcone/errors.hpp"

namespace warpcone::io {

namespace {

void require_schema(const json& j) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != kSchema)
        throw invalid_input("bad-schema");
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    if (std::isnan(v)) return "\"nan\"";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    // Guarantee a JSON number token that parses back as floating point.
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void dump_rec(const json& j, std::ostream& os) {
    switch (j.type()) {
    case json::value_t::object: {
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ',';
            first = false;
            os << json(it.key()).dump() << ':';
            dump_rec(it.value(), os);
        }
        os << '}';
        break;
    }
    case json::value_t::array: {
        os << '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) os << ',';
            first = false;
            dump_rec(v, os);
        }
        os << ']';
        break;
    }
    case json::value_t::number_float:
        os << format_double(j.get<double>());
        break;
    default:
        os << j.dump();
        break;
    }
}

} // namespace

std::string dump(const json& j) {
    std::ostringstream os;
    dump_rec(j, os);
    os << '\n';
    return os.str();
}

json warping_to_json(const warp::WarpFunction& f) {
    json j;
    j["schema"] = kSchema;
    j["type"] = "WarpingFunction";
    j["t0"] = f.t0();
    j["b"] = f.b();
    j["delta"] = f.delta();
    j["mu"] = f.mu();
    j["K"] = f.K();
    j["profile"] = warp::profile_name(f.profile());
    j["knots"] = f.knots();
    return j;
}

warp::WarpFunction warping_from_json(const json& j) {
    require_schema(j);
    try {
        return warp::WarpFunction::from_parameters(
            warp::profile_from_name(j.at("profile").get<std::string>()),
            j.at("t0").get<double>(), j.at("b").get<double>(),
            j.at("delta").get<double>(), j.at("mu").get<double>(),
            j.at("K").get<double>());
    } catch (const json::exception&) {
        throw invalid_input("bad-warping-json");
    }
}

json cone_to_json(const cone::ConeSpace& c) {
    json j;
    j["schema"] = kSchema;
    j["type"] = "ConeSpace";
    j["warping"] = warping_to_json(c.f);
    json fib;
    fib["kind"] =
        c.fiber.kind == cone::Fiber::Kind::Circle ? "circle" : "interval";
    fib["L"] = c.fiber.L;
    j["fiber"] = fib;
    j["t_max"] = c.t_max;
    return j;
}

cone::ConeSpace cone_from_json(const json& j) {
    require_schema(j);
    try {
        warp::WarpFunction f = warping_from_json(j.at("warping"));
        const json& fib = j.at("fiber");
        std::string kind = fib.at("kind").get<std::string>();
        cone::Fiber fiber;
        if (kind == "circle") fiber.kind = cone::Fiber::Kind::Circle;
        else if (kind == "interval") fiber.kind = cone::Fiber::Kind::Interval;
        else throw invalid_input("bad-fiber-kind");
        fiber.L = fib.at("L").get<double>();
        return cone::ConeSpace(f, fiber, j.at("t_max").get<double>());
    } catch (const json::exception&) {
        throw invalid_input("bad-cone-json");
    }
}

json manifold_to_json(const fill::ManifoldDescriptor& m) {
    json j;
    j["schema"] = kSchema;
    j["type"] = "ManifoldDescriptor";
    j["dimension"] = m.dimension;
    j["boundary_lengths"] = m.boundary_lengths;
    j["w"] = m.w;
    if (m.surface) {
        json s;
        s["genus"] = m.surface->genus;
        s["boundary_count"] = m.surface->boundary_count;
        j["surface"] = s;
    }
    return j;
}

fill::ManifoldDescriptor manifold_from_json(const json& j) {
    require_schema(j);
    fill::ManifoldDescriptor m;
    try {
        m.dimension = j.at("dimension").get<int>();
        m.boundary_lengths =
            j.at("boundary_lengths").get<std::vector<double>>();
        m.w = j.at("w").get<double>();
        if (j.contains("surface")) {
            fill::SurfaceData s;
            s.genus = j["surface"].at("genus").get<int>();
            s.boundary_count = j["surface"].at("boundary_count").get<int>();
            m.surface = s;
        }
    } catch (const json::exception&) {
        throw invalid_input("bad-manifold-json");
    }
    m.validate();
    return m;
}

namespace {

json arcs_to_json(const fill::ArcFamily& fam) {
    json j;
    j["full_circle"] = fam.full_circle;
    json arr = json::array();
    for (const auto& a : fam.arcs) {
        json e;
        e["center"] = a.center;
        e["half_length"] = a.half_length;
        arr.push_back(e);
    }
    j["arcs"] = arr;
    return j;
}

fill::ArcFamily arcs_from_json(const json& j) {
    fill::ArcFamily fam;
    fam.full_circle = j.value("full_circle", false);
    if (j.contains("arcs")) {
        for (const auto& e : j["arcs"]) {
            fill::Arc a;
            a.center = e.at("center").get<double>();
            a.half_length = e.at("half_length").get<double>();
            fam.arcs.push_back(a);
        }
    }
    return fam;
}

} // namespace

json subspace_to_json(const fill::SubspaceDescriptor& s) {
    json j;
    j["schema"] = kSchema;
    j["type"] = "SubspaceDescriptor";
    j["grid"] = s.grid;
    json levels = json::array();
    for (const auto& level : s.levels) {
        json comps = json::array();
        for (const auto& fam : level) comps.push_back(arcs_to_json(fam));
        levels.push_back(comps);
    }
    j["levels"] = levels;
    j["b"] = s.b;
    j["b_prime"] = s.b_prime;
    j["c"] = s.c;
    return j;
}

fill::SubspaceDescriptor subspace_from_json(const json& j) {
    require_schema(j);
    fill::SubspaceDescriptor s;
    try {
        s.grid = j.at("grid").get<std::vector<double>>();
        for (const auto& level : j.at("levels")) {
            std::vector<fill::ArcFamily> comps;
            for (const auto& fam : level) comps.push_back(arcs_from_json(fam));
            s.levels.push_back(std::move(comps));
        }
        s.b = j.at("b").get<double>();
        s.b_prime = j.at("b_prime").get<double>();
        s.c = j.at("c").get<double>();
    } catch (const json::exception&) {
        throw invalid_input("bad-subspace-json");
    }
    return s;
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot-open: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        throw invalid_input("bad-json: " + path);
    }
    return j;
}

void save_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input("cannot-open: " + path);
    out << dump(j);
}

} // namespace warpcone::io
