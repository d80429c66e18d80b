// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "geodiverse/geo.hpp"
#include "geodiverse/geo_mapping.hpp"

namespace geodiverse::metrics {

/// The closed set of domain labels papers may carry.
std::span<const std::string> field_labels();
bool is_known_field(const std::string& field);

struct PaperRecord {
    std::string paper_id;
    double arc = 0.0;
    std::string field;
    std::vector<std::string> coauthor_cities; // one entry per coauthor, duplicates allowed
};

/// Distance lookup between two city ids. Returns net::kUnreachable when no
/// route exists. Must be symmetric.
using DistanceFn = std::function<double(const std::string&, const std::string&)>;

struct PairwiseDistances {
    std::vector<double> values; // one per reachable distinct-city pair
    std::size_t n_unreachable = 0;
    bool degenerate = false; // fewer than 2 distinct cities
};

/// Distances over the unordered pairs of the paper's *distinct* city set.
PairwiseDistances pairwise_distances(const PaperRecord& paper, const DistanceFn& dist);

/// Mean pairwise distance; empty when the paper has fewer than 2 distinct
/// cities or all its pairs are unreachable.
std::optional<double> avg_weighted_distance(const PaperRecord& paper, const DistanceFn& dist);

/// Histogram edges shared by every paper so entropies are comparable.
/// Built once from the corpus-wide pool of pair distances.
struct DistanceBins {
    std::vector<double> edges; // strictly increasing, size >= 2
    std::size_t index(double v) const;
    std::size_t count() const { return edges.size() - 1; }
};

/// Freedman-Diaconis width over the pooled distances; falls back to a
/// sqrt(n) rule when the IQR degenerates.
DistanceBins make_distance_bins(std::span<const double> pooled_distances);

struct EntropyOptions {
    double log_base = 0.0; // 0 = natural log
};

/// Shannon entropy of the paper's pair-distance bin distribution.
/// Exactly 2 distinct cities give 0 by definition; fewer give nullopt.
std::optional<double> distance_entropy(const PaperRecord& paper, const DistanceFn& dist,
                                       const DistanceBins& bins,
                                       const EntropyOptions& opts = {});

/// Corpus prepass for the location-entropy weights: per geographic cell,
/// mean university rank weight and mean city centrality over the distinct
/// cities observed in the corpus.
struct GeoBinWeights {
    double cell_deg = 5.0;
    struct Cell {
        double mean_rank_weight = 1.0;
        double mean_centrality = 0.0;
        std::size_t n_cities = 0;
    };
    std::unordered_map<geo::GeoBinId, Cell, geo::GeoBinHash> cells;
};

GeoBinWeights make_geo_bin_weights(std::span<const geomap::City> cities,
                                   const std::unordered_map<std::string, geomap::CityProfile>& profiles,
                                   double cell_deg);

struct WeightedEntropyResult {
    double value = 0.0;
    std::size_t bins_skipped = 0; // cells with no prepass data
};

/// Weighted entropy -sum w_i p_i log p_i over occupied geographic cells,
/// w_i = centrality^0.05 / rank weight, p_i = share of the paper's coauthors
/// in cell i (each coauthor counted, duplicates included).
std::optional<WeightedEntropyResult> weighted_location_entropy(
    const PaperRecord& paper,
    const std::unordered_map<std::string, geo::LatLon>& city_positions,
    const GeoBinWeights& weights, const EntropyOptions& opts = {});

/// Entropy of a histogram, 0 log 0 := 0. Exposed for reuse by the binning
/// paths above.
double shannon_entropy(std::span<const double> probabilities, const EntropyOptions& opts = {});

inline constexpr double kCentralityDamp = 0.05; // exponent taming the huge centrality range

struct DiversityScores {
    std::optional<double> avg_weighted_distance;
    std::optional<double> distance_entropy;
    std::optional<double> weighted_location_entropy;
    std::size_t n_distinct_cities = 0;
    std::size_t n_unreachable_pairs = 0;
};

DiversityScores score_paper(const PaperRecord& paper, const DistanceFn& dist,
                            const DistanceBins& bins,
                            const std::unordered_map<std::string, geo::LatLon>& city_positions,
                            const GeoBinWeights& weights, const EntropyOptions& opts = {});

} // namespace geodiverse::metrics
