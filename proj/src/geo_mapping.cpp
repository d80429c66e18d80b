// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#include "geodiverse/geo_mapping.hpp"

#include <algorithm>
#include <cmath>

#include "geodiverse/errors.hpp"

namespace geodiverse::geomap {

AirportAssignment map_city_to_airports(const City& city, const net::FlightGraph& g,
                                       const MappingParams& params) {
    if (g.airport_count() == 0)
        throw ValidationError("map_city_to_airports: empty flight graph");
    if (params.radius_km <= 0.0 || params.top_k < 1)
        throw ValidationError("map_city_to_airports: bad mapping parameters");

    AirportAssignment out;
    std::int32_t nearest = -1;
    double nearest_km = std::numeric_limits<double>::infinity();
    for (std::int32_t i = 0; i < std::int32_t(g.airport_count()); ++i) {
        const double km = geo::haversine_km(city.pos, g.airport(i).pos);
        if (km < nearest_km || (km == nearest_km && nearest >= 0 &&
                                g.airport(i).id < g.airport(nearest).id)) {
            nearest = i;
            nearest_km = km;
        }
        if (km <= params.radius_km)
            out.within_radius.emplace_back(g.airport(i).id, km);
    }
    std::sort(out.within_radius.begin(), out.within_radius.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
              });

    if (out.within_radius.empty()) {
        out.used_fallback = true;
        out.fallback_km = nearest_km;
        out.ranked.push_back(g.airport(nearest).id);
        return out;
    }

    std::vector<std::pair<double, std::string>> by_degree;
    by_degree.reserve(out.within_radius.size());
    for (const auto& [id, km] : out.within_radius)
        by_degree.emplace_back(weighted_degree(g, id), id);
    std::sort(by_degree.begin(), by_degree.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    const auto k = std::min<std::size_t>(by_degree.size(), std::size_t(params.top_k));
    for (std::size_t i = 0; i < k; ++i) out.ranked.push_back(by_degree[i].second);
    return out;
}

double city_pair_distance(const City& a, const City& b,
                          const AirportAssignment& map_a, const AirportAssignment& map_b,
                          const net::FlightGraph& g) {
    if (map_a.ranked.empty() || map_b.ranked.empty())
        throw ValidationError("city_pair_distance: city has no mapped airports");
    const bool shared = std::any_of(map_a.ranked.begin(), map_a.ranked.end(),
                                    [&](const std::string& id) {
                                        return std::find(map_b.ranked.begin(), map_b.ranked.end(),
                                                         id) != map_b.ranked.end();
                                    });
    if (shared) {
        const double km = geo::haversine_km(a.pos, b.pos);
        return std::min(1.0, km / kSharedAirportNormKm);
    }
    const auto result = net::shortest_effective_path(g, map_a.ranked, map_b.ranked);
    return result.distance;
}

double city_centrality(const AirportAssignment& assignment,
                       const net::FlightGraph& g,
                       const net::CentralityResult& centrality,
                       double alpha) {
    // d^-alpha blows up as d -> 0; clamp below 1 km.
    auto term = [&](const std::string& id, double km) {
        const double d = std::max(km, 1.0);
        return centrality.of(g, id) * std::pow(d, -alpha);
    };
    if (assignment.within_radius.empty()) {
        if (assignment.ranked.empty())
            throw ValidationError("city_centrality: city has no mapped airports");
        return term(assignment.ranked.front(), assignment.fallback_km);
    }
    double sum = 0.0;
    for (const auto& [id, km] : assignment.within_radius) sum += term(id, km);
    return sum;
}

double university_rank_weight(const City& city, std::span<const University> universities,
                              double radius_km) {
    double sum = 0.0;
    bool any = false;
    for (const auto& u : universities) {
        if (u.rank < 1)
            throw ValidationError("university " + u.name + ": rank must be >= 1");
        if (geo::haversine_km(city.pos, u.pos) <= radius_km) {
            sum += 1.0 + 1.0 / std::sqrt(double(u.rank));
            any = true;
        }
    }
    return any ? sum : 1.0;
}

CorrelationMatrix distance_correlation_matrix(std::span<const DistanceTriple> rows) {
    if (rows.size() < 3)
        throw ValidationError("distance_correlation_matrix: need at least 3 city pairs");
    Eigen::MatrixXd m(rows.size(), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!std::isfinite(rows[i].hops) || !std::isfinite(rows[i].weighted) ||
            !std::isfinite(rows[i].euclid_km))
            throw ValidationError("distance_correlation_matrix: non-finite value in row " +
                                  std::to_string(i));
        m(i, 0) = rows[i].hops;
        m(i, 1) = rows[i].weighted;
        m(i, 2) = rows[i].euclid_km;
    }
    const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
    const Eigen::Vector3d sd = centered.colwise().norm();

    CorrelationMatrix out;
    out.r.setIdentity();
    for (int c = 0; c < 3; ++c) out.undefined[c] = sd(c) == 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            double v = std::numeric_limits<double>::quiet_NaN();
            if (!out.undefined[i] && !out.undefined[j])
                v = centered.col(i).dot(centered.col(j)) / (sd(i) * sd(j));
            out.r(i, j) = out.r(j, i) = v;
        }
    }
    return out;
}

} // namespace geodiverse::geomap
