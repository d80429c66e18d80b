// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "geodiverse/geo.hpp"

namespace geodiverse::net {

struct Airport {
    std::string id;
    geo::LatLon pos;
};

/// Raw flight record as ingested; geometry and effective lengths are
/// derived at build time.
struct FlightEdgeInput {
    std::string src;
    std::string dst;
    double volume = 0.0;
};

struct EffectiveParams {
    double lambda = 1.0 / 10000.0;
};

/// Per-edge cost blending great-circle km with a per-hop unit:
/// lambda * d_km + (1 - lambda).
double effective_length(double d_km, const EffectiveParams& params);

struct BuildStats {
    std::size_t duplicates_collapsed = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t long_edges = 0; // legs beyond ~9000 km; kept, but worth a look
};

/// Immutable undirected air-transport graph. All queries are const and safe
/// to run concurrently.
class FlightGraph {
public:
    struct Edge {
        std::int32_t to;
        double volume;
        double euclid_km;
        double effective_len;
    };

    FlightGraph() = default;

    std::size_t airport_count() const { return airports_.size(); }
    std::size_t edge_count() const { return n_edges_; }
    double lambda() const { return params_.lambda; }
    const EffectiveParams& params() const { return params_; }

    /// -1 when the id is unknown.
    std::int32_t find(const std::string& id) const;
    /// Throws ValidationError on unknown id.
    std::int32_t index_of(const std::string& id) const;

    const Airport& airport(std::int32_t idx) const { return airports_[idx]; }
    std::span<const Edge> edges(std::int32_t idx) const { return adj_[idx]; }
    std::span<const Airport> airports() const { return airports_; }

    /// Fingerprint of airports, edges, and lambda; input-order independent.
    std::uint64_t content_hash() const { return hash_; }

    friend FlightGraph build_graph(std::vector<Airport> airports,
                                   const std::vector<FlightEdgeInput>& edges,
                                   EffectiveParams params, BuildStats* stats);

private:
    std::vector<Airport> airports_;
    std::vector<std::vector<Edge>> adj_;
    std::unordered_map<std::string, std::int32_t> index_;
    std::size_t n_edges_ = 0;
    EffectiveParams params_;
    std::uint64_t hash_ = 0;
};

/// Validates inputs, computes great-circle edge lengths and effective
/// lengths, and collapses duplicate undirected edges keeping the larger
/// volume. Rejects dangling endpoints, duplicate airport ids, bad
/// coordinates, negative volumes, and lambda outside (0,1).
FlightGraph build_graph(std::vector<Airport> airports,
                        const std::vector<FlightEdgeInput>& edges,
                        EffectiveParams params = {},
                        BuildStats* stats = nullptr);

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct PathResult {
    double distance = kUnreachable;
    std::vector<std::string> path; // empty when unreachable
    bool reachable() const { return distance != kUnreachable; }
};

/// Minimum effective-length path between any airport in `src_set` and any in
/// `dst_set`. Ties broken by fewer hops, then by lexicographically smallest
/// node-id sequence, so the returned path is deterministic.
PathResult shortest_effective_path(const FlightGraph& g,
                                   std::span<const std::string> src_set,
                                   std::span<const std::string> dst_set);

/// One multi-source Dijkstra sweep: element i is the minimum effective
/// distance from the source set to airport i (kUnreachable if none).
std::vector<double> effective_distances_from(const FlightGraph& g,
                                             std::span<const std::int32_t> sources);

/// BFS hop counts from a source set; -1 marks unreachable airports.
std::vector<std::int32_t> hop_distances_from(const FlightGraph& g,
                                             std::span<const std::int32_t> sources);

/// Sum of incident edge volumes.
double weighted_degree(const FlightGraph& g, const std::string& airport_id);
double weighted_degree(const FlightGraph& g, std::int32_t idx);

struct CentralityResult {
    std::vector<double> score;         // aligned with graph airport indices
    std::vector<char> minor_component; // 1 = scored on a non-largest component
    int n_components = 0;

    double of(const FlightGraph& g, const std::string& id) const;
};

/// Principal-eigenvector scores of the volume-weighted adjacency matrix.
/// Power iteration (spectral shift by +I so bipartite components converge),
/// relative tolerance 1e-10, at most 10^4 iterations, all-ones start.
/// Disconnected graphs are solved per component, each normalized to max 1;
/// non-largest components are flagged. Components with no positive-volume
/// edge score 0.
CentralityResult eigenvector_centrality(const FlightGraph& g);

} // namespace geodiverse::net
