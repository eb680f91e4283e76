#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "saef/geo.hpp"
#include "saef/network.hpp"

namespace saef {

enum class LandUse { Residential, Commercial, Industrial, PublicSemiPublic, Other };

enum class TransportContext { Highway, Throughway, NeighborhoodStreet };

enum class StreetType {
  NeighborhoodResidential,
  ResidentialThroughway,
  NeighborhoodCommercial,
  CommercialThroughway,
  Industrial,
  PSP,
  Highway,
  Others,
};

inline constexpr std::array<StreetType, 8> kAllStreetTypes{
    StreetType::NeighborhoodResidential, StreetType::ResidentialThroughway,
    StreetType::NeighborhoodCommercial,  StreetType::CommercialThroughway,
    StreetType::Industrial,              StreetType::PSP,
    StreetType::Highway,                 StreetType::Others};

std::string_view to_string(StreetType t);
std::string_view to_string(TransportContext c);
std::string_view to_string(LandUse u);
StreetType parse_street_type(std::string_view s);  // throws std::invalid_argument
LandUse parse_land_use_code(std::string_view code);  // R, C, I, P, O

struct Parcel {
  std::int64_t id = 0;
  Ring ring;
  LandUse land_use = LandUse::Other;
  double area_m2 = 0.0;
};

struct ParcelSet {
  std::vector<Parcel> parcels;
  SpatialIndex index;

  ParcelSet() = default;
  explicit ParcelSet(std::vector<Parcel> p);
};

/// FeatureCollection of Polygons with `parcel_id` and `land_use` in {R,C,I,P,O}.
/// An optional `area` property must agree with the ring area within 1%.
ParcelSet load_parcels(const std::filesystem::path& path);

/// fclass 1-2 are always highways; fclass 3 only above 50 mph.
TransportContext transport_context(const Link& link);

inline constexpr double kDefaultAdjacencyBufferM = 20.0;

/// Land use of the largest parcel within `buffer_m` of the link; ties go to
/// the smaller parcel id. Other when nothing qualifies.
LandUse dominant_land_use(const Link& link, const ParcelSet& parcels, double buffer_m = kDefaultAdjacencyBufferM);

StreetType classify_street(TransportContext context, LandUse land_use);

/// Street type for every link, in link order.
std::vector<StreetType> classify_network(const Network& net, const ParcelSet& parcels,
                                         double buffer_m = kDefaultAdjacencyBufferM);

/// `link_id,street_type`
void write_link_types(const Network& net, const std::vector<StreetType>& types,
                      const std::filesystem::path& path);

}  // namespace saef
