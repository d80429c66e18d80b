// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "geodiverse/flight_network.hpp"
#include "geodiverse/geo.hpp"

#include <Eigen/Dense>

namespace geodiverse::geomap {

struct City {
    std::string id;
    std::string name;
    geo::LatLon pos;
    std::string country;
};

struct University {
    std::string name;
    int rank = 1; // world rank, 1..500
    geo::LatLon pos;
};

struct MappingParams {
    double radius_km = 100.0; // airport search radius around a city
    int top_k = 5;            // airports kept per city, ranked by weighted degree
};

/// How a city attaches to the flight network. `ranked` is the distance
/// mapping (top-k by weighted degree, or the single nearest airport as a
/// fallback); `within_radius` keeps every airport inside the radius for the
/// centrality aggregate, which is not truncated.
struct AirportAssignment {
    std::vector<std::string> ranked;
    std::vector<std::pair<std::string, double>> within_radius; // (id, km), nearest first
    bool used_fallback = false;
    double fallback_km = 0.0;
};

AirportAssignment map_city_to_airports(const City& city, const net::FlightGraph& g,
                                       const MappingParams& params = {});

/// Shared-airport correction: two cities each within ~100 km of a common
/// airport are at most ~200 km apart, so km/200 clamped to [0,1] keeps any
/// flightless trip below the cost of a single flight.
inline constexpr double kSharedAirportNormKm = 200.0;

/// Weighted network distance between two mapped cities: minimum effective
/// path over their airport pairs, replaced by the clamped Euclidean
/// correction whenever the airport sets intersect. Returns net::kUnreachable
/// when no airport pair connects.
double city_pair_distance(const City& a, const City& b,
                          const AirportAssignment& map_a, const AirportAssignment& map_b,
                          const net::FlightGraph& g);

/// Distance-decay centrality aggregate over the airports near a city:
/// sum of C(a) * d^-alpha with sub-1 km distances clamped to 1 km.
double city_centrality(const AirportAssignment& assignment,
                       const net::FlightGraph& g,
                       const net::CentralityResult& centrality,
                       double alpha = 2.0);

/// Sum of (1 + 1/sqrt(rank)) over ranked universities within radius_km;
/// 1.0 when there are none.
double university_rank_weight(const City& city, std::span<const University> universities,
                              double radius_km = 20.0);

struct CityProfile {
    std::string city_id;
    double rank_weight = 1.0;
    double centrality = 0.0;
};

/// One observation for the distance-measure comparison.
struct DistanceTriple {
    double hops;
    double weighted;
    double euclid_km;
};

struct CorrelationMatrix {
    // Order: hop distance, weighted network distance, Euclidean.
    Eigen::Matrix3d r;
    bool undefined[3] = {false, false, false}; // zero-variance columns
};

/// Pairwise Pearson correlations between the three distance measures.
/// Requires at least 3 rows; zero-variance columns are flagged and their
/// off-diagonal entries set to NaN.
CorrelationMatrix distance_correlation_matrix(std::span<const DistanceTriple> rows);

} // namespace geodiverse::geomap
