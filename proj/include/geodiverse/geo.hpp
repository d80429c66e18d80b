// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "geodiverse/errors.hpp"

namespace geodiverse::geo {

inline constexpr double kEarthRadiusKm = 6371.0;

struct LatLon {
    double lat = 0.0; // degrees, [-90, 90]
    double lon = 0.0; // degrees, [-180, 180]
};

inline bool coords_valid(const LatLon& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) &&
           p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

/// Great-circle distance in km on a sphere of radius kEarthRadiusKm.
double haversine_km(const LatLon& a, const LatLon& b);

/// Cell index of a point on a fixed lat/lon grid anchored at (-90, -180).
/// Longitude wraps (180 and -180 land in the same cell); latitude clamps at the poles.
struct GeoBinId {
    std::int32_t row = 0;
    std::int32_t col = 0;
    friend bool operator==(const GeoBinId&, const GeoBinId&) = default;
    friend auto operator<=>(const GeoBinId&, const GeoBinId&) = default;
};

GeoBinId geo_bin(const LatLon& p, double cell_deg);

struct GeoBinHash {
    std::size_t operator()(const GeoBinId& b) const {
        return std::hash<std::int64_t>{}((std::int64_t(b.row) << 32) ^ std::uint32_t(b.col));
    }
};

} // namespace geodiverse::geo
