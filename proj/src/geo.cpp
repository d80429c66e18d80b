// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#include "geodiverse/geo.hpp"

#include <algorithm>

namespace geodiverse::geo {

namespace {
constexpr double kDegToRad = M_PI / 180.0;

double hav(double angle_rad) {
    const double s = std::sin(0.5 * angle_rad);
    return s * s;
}
} // namespace

double haversine_km(const LatLon& a, const LatLon& b) {
    if (!coords_valid(a) || !coords_valid(b))
        throw ValidationError("haversine_km: coordinate out of range");
    const double la1 = a.lat * kDegToRad;
    const double la2 = b.lat * kDegToRad;
    const double h = hav((b.lat - a.lat) * kDegToRad) +
                     std::cos(la1) * std::cos(la2) * hav((b.lon - a.lon) * kDegToRad);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoBinId geo_bin(const LatLon& p, double cell_deg) {
    if (cell_deg <= 0.0)
        throw ValidationError("geo_bin: cell size must be positive");
    if (!coords_valid(p))
        throw ValidationError("geo_bin: coordinate out of range");
    const auto n_rows = static_cast<std::int32_t>(std::ceil(180.0 / cell_deg));
    const auto n_cols = static_cast<std::int32_t>(std::ceil(360.0 / cell_deg));
    auto row = static_cast<std::int32_t>(std::floor((p.lat + 90.0) / cell_deg));
    row = std::clamp(row, 0, n_rows - 1);
    double lon = p.lon + 180.0;
    if (lon >= 360.0) lon -= 360.0;
    auto col = static_cast<std::int32_t>(std::floor(lon / cell_deg));
    col = std::clamp(col, 0, n_cols - 1);
    return {row, col};
}

} // namespace geodiverse::geo
