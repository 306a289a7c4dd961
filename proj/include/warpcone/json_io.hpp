#pragma once

#include <string>

#include <json.hpp>

#include "warpcone/filling_conditions.hpp"
#include "warpcone/warped_cone.hpp"

namespace warpcone::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "warpcone/1";

// Serializes with fixed key order (insertion order of ordered_json) and
// floating-point values at 17 significant digits, so identical inputs give
// byte-identical output.
std::string dump(const json& j);

json warping_to_json(const warp::WarpFunction& f);
warp::WarpFunction warping_from_json(const json& j);

json cone_to_json(const cone::ConeSpace& c);
cone::ConeSpace cone_from_json(const json& j);

json manifold_to_json(const fill::ManifoldDescriptor& m);
fill::ManifoldDescriptor manifold_from_json(const json& j);

json subspace_to_json(const fill::SubspaceDescriptor& s);
fill::SubspaceDescriptor subspace_from_json(const json& j);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

} // namespace warpcone::io
