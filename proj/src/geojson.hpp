#pragma once

// Internal helpers shared by the GeoJSON readers.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "saef/geometry.hpp"

namespace saef {

nlohmann::json read_feature_collection(const std::filesystem::path& path);

/// Outer ring of a Polygon geometry without the repeated closing vertex.
Ring read_geojson_outer_ring(const nlohmann::json& geometry, const std::string& where);

}  // namespace saef
