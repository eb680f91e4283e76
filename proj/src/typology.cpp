#include "saef/typology.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "geojson.hpp"
#include "saef/csv.hpp"

namespace saef {

std::string_view to_string(StreetType t) {
  switch (t) {
    case StreetType::NeighborhoodResidential: return "NeighborhoodResidential";
    case StreetType::ResidentialThroughway: return "ResidentialThroughway";
    case StreetType::NeighborhoodCommercial: return "NeighborhoodCommercial";
    case StreetType::CommercialThroughway: return "CommercialThroughway";
    case StreetType::Industrial: return "Industrial";
    case StreetType::PSP: return "PSP";
    case StreetType::Highway: return "Highway";
    case StreetType::Others: return "Others";
  }
  return "Others";
}

std::string_view to_string(TransportContext c) {
  switch (c) {
    case TransportContext::Highway: return "Highway";
    case TransportContext::Throughway: return "Throughway";
    case TransportContext::NeighborhoodStreet: return "NeighborhoodStreet";
  }
  return "NeighborhoodStreet";
}

std::string_view to_string(LandUse u) {
  switch (u) {
    case LandUse::Residential: return "R";
    case LandUse::Commercial: return "C";
    case LandUse::Industrial: return "I";
    case LandUse::PublicSemiPublic: return "P";
    case LandUse::Other: return "O";
  }
  return "O";
}

StreetType parse_street_type(std::string_view s) {
  for (StreetType t : kAllStreetTypes) {
    if (to_string(t) == s) return t;
  }
  throw std::invalid_argument("unknown street type '" + std::string(s) + "'");
}

LandUse parse_land_use_code(std::string_view code) {
  if (code == "R") return LandUse::Residential;
  if (code == "C") return LandUse::Commercial;
  if (code == "I") return LandUse::Industrial;
  if (code == "P") return LandUse::PublicSemiPublic;
  if (code == "O") return LandUse::Other;
  throw std::invalid_argument("unknown land use code '" + std::string(code) + "'");
}

ParcelSet::ParcelSet(std::vector<Parcel> p) : parcels(std::move(p)) {
  std::vector<Box> boxes;
  boxes.reserve(parcels.size());
  for (const Parcel& q : parcels) boxes.push_back(bounding_box(q.ring));
  index = SpatialIndex(boxes);
}

ParcelSet load_parcels(const std::filesystem::path& path) {
  const auto doc = read_feature_collection(path);
  std::vector<Parcel> parcels;
  std::size_t k = 0;
  for (const auto& f : doc.at("features")) {
    const std::string where = path.string() + ", feature " + std::to_string(k++);
    try {
      const auto& props = f.at("properties");
      Parcel p;
      p.id = props.at("parcel_id").get<std::int64_t>();
      p.land_use = parse_land_use_code(props.at("land_use").get<std::string>());
      p.ring = read_geojson_outer_ring(f.at("geometry"), where);
      p.area_m2 = ring_area(p.ring);
      if (!(p.area_m2 > 0.0)) throw LoadError(where + ": parcel has zero area");
      if (props.contains("area")) {
        const double declared = props.at("area").get<double>();
        if (std::abs(declared - p.area_m2) > 0.01 * p.area_m2) {
          throw LoadError(where + ": declared area differs from polygon area by more than 1%");
        }
      }
      parcels.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw LoadError(where + ": " + e.what());
    }
  }
  return ParcelSet(std::move(parcels));
}

TransportContext transport_context(const Link& link) {
  if (link.fclass <= 2) return TransportContext::Highway;
  if (link.fclass == 3 && link.speed_mph > 50.0) return TransportContext::Highway;
  if (link.fclass <= 4) return TransportContext::Throughway;
  return TransportContext::NeighborhoodStreet;
}

LandUse dominant_land_use(const Link& link, const ParcelSet& parcels, double buffer_m) {
  if (!(buffer_m > 0.0)) throw std::invalid_argument("adjacency buffer must be positive");
  Box window = bounding_box(link.geometry);
  window.min_x -= buffer_m;
  window.min_y -= buffer_m;
  window.max_x += buffer_m;
  window.max_y += buffer_m;

  const Parcel* best = nullptr;
  for (std::size_t i : parcels.index.query(window)) {
    const Parcel& p = parcels.parcels[i];
    if (polygon_polyline_distance(p.ring, link.geometry) > buffer_m) continue;
    if (!best || p.area_m2 > best->area_m2 || (p.area_m2 == best->area_m2 && p.id < best->id)) best = &p;
  }
  return best ? best->land_use : LandUse::Other;
}

StreetType classify_street(TransportContext context, LandUse land_use) {
  if (context == TransportContext::Highway) return StreetType::Highway;
  const bool neighborhood = context == TransportContext::NeighborhoodStreet;
  switch (land_use) {
    case LandUse::Residential:
      return neighborhood ? StreetType::NeighborhoodResidential : StreetType::ResidentialThroughway;
    case LandUse::Commercial:
      return neighborhood ? StreetType::NeighborhoodCommercial : StreetType::CommercialThroughway;
    case LandUse::Industrial: return StreetType::Industrial;
    case LandUse::PublicSemiPublic: return StreetType::PSP;
    case LandUse::Other: return StreetType::Others;
  }
  return StreetType::Others;
}

std::vector<StreetType> classify_network(const Network& net, const ParcelSet& parcels, double buffer_m) {
  std::vector<StreetType> out;
  out.reserve(net.link_count());
  for (const Link& l : net.links()) {
    const TransportContext ctx = transport_context(l);
    // Highways collapse regardless of frontage, so skip the parcel lookup.
    out.push_back(ctx == TransportContext::Highway ? StreetType::Highway
                                                   : classify_street(ctx, dominant_land_use(l, parcels, buffer_m)));
  }
  return out;
}

void write_link_types(const Network& net, const std::vector<StreetType>& types, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "link_id,street_type\n";
  for (std::size_t i = 0; i < net.link_count(); ++i) {
    out << net.link(static_cast<LinkIndex>(i)).id << ',' << to_string(types.at(i)) << '\n';
  }
}

}  // namespace saef
