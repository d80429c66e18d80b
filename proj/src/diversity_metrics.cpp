// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#include "geodiverse/diversity_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "geodiverse/errors.hpp"
#include "geodiverse/flight_network.hpp"

namespace geodiverse::metrics {

std::span<const std::string> field_labels() {
    static const std::vector<std::string> labels = {
        "Biology",
        "Biomedical Research",
        "Chemistry",
        "Clinical Medicine",
        "Earth and Space",
        "Engineering and Technology",
        "Health",
        "Mathematics",
        "Physics",
        "Professional Fields",
        "Psychology",
        "Social Sciences",
    };
    return labels;
}

bool is_known_field(const std::string& field) {
    const auto labels = field_labels();
    return std::find(labels.begin(), labels.end(), field) != labels.end();
}

namespace {

std::vector<std::string> distinct_cities(const PaperRecord& paper) {
    std::vector<std::string> cities = paper.coauthor_cities;
    std::sort(cities.begin(), cities.end());
    cities.erase(std::unique(cities.begin(), cities.end()), cities.end());
    return cities;
}

double log_scale(const EntropyOptions& opts) {
    if (opts.log_base == 0.0) return 1.0;
    if (!(opts.log_base > 0.0) || opts.log_base == 1.0)
        throw ValidationError("entropy log base must be positive and != 1");
    return 1.0 / std::log(opts.log_base);
}

} // namespace

PairwiseDistances pairwise_distances(const PaperRecord& paper, const DistanceFn& dist) {
    PairwiseDistances out;
    const auto cities = distinct_cities(paper);
    if (cities.size() < 2) {
        out.degenerate = true;
        return out;
    }
    out.values.reserve(cities.size() * (cities.size() - 1) / 2);
    for (std::size_t i = 0; i < cities.size(); ++i) {
        for (std::size_t j = i + 1; j < cities.size(); ++j) {
            const double d = dist(cities[i], cities[j]);
            if (d == net::kUnreachable) {
                ++out.n_unreachable;
            } else {
                out.values.push_back(d);
            }
        }
    }
    return out;
}

std::optional<double> avg_weighted_distance(const PaperRecord& paper, const DistanceFn& dist) {
    const auto pairs = pairwise_distances(paper, dist);
    if (pairs.degenerate || pairs.values.empty()) return std::nullopt;
    double sum = 0.0;
    for (double v : pairs.values) sum += v;
    return sum / double(pairs.values.size());
}

std::size_t DistanceBins::index(double v) const {
    // Half-open bins [e_i, e_{i+1}) with the last bin closed on the right;
    // values outside the corpus range clamp into the end bins.
    if (v <= edges.front()) return 0;
    if (v >= edges.back()) return count() - 1;
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    return std::size_t(it - edges.begin()) - 1;
}

DistanceBins make_distance_bins(std::span<const double> pooled) {
    if (pooled.empty())
        throw ValidationError("make_distance_bins: no distances to bin");
    std::vector<double> sorted(pooled.begin(), pooled.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    const auto n = sorted.size();

    if (lo == hi) return DistanceBins{{lo, lo + 1.0}};

    auto quantile = [&](double q) {
        const double pos = q * double(n - 1);
        const auto i = std::size_t(pos);
        const double frac = pos - double(i);
        return i + 1 < n ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac : sorted[i];
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    double width = 2.0 * iqr / std::cbrt(double(n));
    if (width <= 0.0)
        width = (hi - lo) / std::ceil(std::sqrt(double(n)));

    const auto n_bins = std::size_t(std::ceil((hi - lo) / width));
    DistanceBins bins;
    bins.edges.reserve(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i) bins.edges.push_back(lo + width * double(i));
    bins.edges.back() = std::max(bins.edges.back(), hi);
    return bins;
}

double shannon_entropy(std::span<const double> probabilities, const EntropyOptions& opts) {
    double h = 0.0;
    for (double p : probabilities) {
        if (p < 0.0 || p > 1.0 + 1e-12)
            throw ValidationError("shannon_entropy: probability outside [0,1]");
        if (p > 0.0) h -= p * std::log(p);
    }
    return h * log_scale(opts);
}

std::optional<double> distance_entropy(const PaperRecord& paper, const DistanceFn& dist,
                                       const DistanceBins& bins, const EntropyOptions& opts) {
    const auto n_cities = distinct_cities(paper).size();
    if (n_cities < 2) return std::nullopt;
    if (n_cities == 2) return 0.0; // a single distance carries no spread

    const auto pairs = pairwise_distances(paper, dist);
    if (pairs.values.empty()) return std::nullopt;

    std::map<std::size_t, std::size_t> counts;
    for (double v : pairs.values) ++counts[bins.index(v)];
    std::vector<double> p;
    p.reserve(counts.size());
    for (const auto& [bin, c] : counts) p.push_back(double(c) / double(pairs.values.size()));
    return shannon_entropy(p, opts);
}

GeoBinWeights make_geo_bin_weights(
    std::span<const geomap::City> cities,
    const std::unordered_map<std::string, geomap::CityProfile>& profiles, double cell_deg) {
    GeoBinWeights out;
    out.cell_deg = cell_deg;
    struct Acc {
        double rank = 0.0, cent = 0.0;
        std::size_t n = 0;
    };
    std::unordered_map<geo::GeoBinId, Acc, geo::GeoBinHash> acc;
    for (const auto& city : cities) {
        const auto it = profiles.find(city.id);
        if (it == profiles.end()) continue;
        auto& a = acc[geo::geo_bin(city.pos, cell_deg)];
        a.rank += it->second.rank_weight;
        a.cent += it->second.centrality;
        ++a.n;
    }
    for (const auto& [bin, a] : acc)
        out.cells[bin] = {a.rank / double(a.n), a.cent / double(a.n), a.n};
    return out;
}

std::optional<WeightedEntropyResult> weighted_location_entropy(
    const PaperRecord& paper,
    const std::unordered_map<std::string, geo::LatLon>& city_positions,
    const GeoBinWeights& weights, const EntropyOptions& opts) {
    if (distinct_cities(paper).size() < 2) return std::nullopt;

    // p_i is a distribution over coauthors, so duplicates count.
    std::map<geo::GeoBinId, std::size_t> occupancy;
    for (const auto& city : paper.coauthor_cities) {
        const auto it = city_positions.find(city);
        if (it == city_positions.end())
            throw ValidationError("weighted_location_entropy: unknown city id " + city);
        ++occupancy[geo::geo_bin(it->second, weights.cell_deg)];
    }

    WeightedEntropyResult result;
    const double scale = log_scale(opts);
    const double total = double(paper.coauthor_cities.size());
    for (const auto& [bin, count] : occupancy) {
        const auto cell = weights.cells.find(bin);
        if (cell == weights.cells.end()) {
            ++result.bins_skipped;
            continue;
        }
        const double w = std::pow(cell->second.mean_centrality, kCentralityDamp) /
                         cell->second.mean_rank_weight;
        const double p = double(count) / total;
        if (p > 0.0) result.value -= w * p * std::log(p) * scale;
    }
    return result;
}

DiversityScores score_paper(const PaperRecord& paper, const DistanceFn& dist,
                            const DistanceBins& bins,
                            const std::unordered_map<std::string, geo::LatLon>& city_positions,
                            const GeoBinWeights& weights, const EntropyOptions& opts) {
    DiversityScores s;
    s.n_distinct_cities = distinct_cities(paper).size();
    const auto pairs = pairwise_distances(paper, dist);
    s.n_unreachable_pairs = pairs.n_unreachable;
    if (!pairs.degenerate && !pairs.values.empty()) {
        double sum = 0.0;
        for (double v : pairs.values) sum += v;
        s.avg_weighted_distance = sum / double(pairs.values.size());
    }
    s.distance_entropy = distance_entropy(paper, dist, bins, opts);
    if (auto w = weighted_location_entropy(paper, city_positions, weights, opts))
        s.weighted_location_entropy = w->value;
    return s;
}

} // namespace geodiverse::metrics
