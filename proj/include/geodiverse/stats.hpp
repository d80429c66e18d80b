// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "geodiverse/student_t.hpp"

namespace geodiverse::stats {

struct BinnedSeries {
    std::vector<double> edges;        // strictly increasing, size = bins + 1
    std::vector<double> mean;         // NaN for empty bins
    std::vector<std::size_t> count;
    std::size_t rejected_rows = 0;    // non-finite inputs
};

/// Per-bin means of y over fixed-width bins of x aligned to `origin`.
BinnedSeries bin_series(std::span<const double> x, std::span<const double> y,
                        double width, double origin);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double se_slope = 0.0;
    double t = 0.0;
    double p_two_sided = 1.0;
    std::size_t n = 0;
};

/// Simple OLS of y on x with a two-sided slope p-value.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

struct PiecewiseFit {
    double x_star = 0.0; // breakpoint
    double a1 = 0.0;     // left intercept; a2 = a1 + (b1 - b2) * x_star
    double b1 = 0.0;     // left slope
    double b2 = 0.0;     // right slope
    double rss = 0.0;
    double p1 = 0.0; // one-sided, H1: b1 > 0
    double p2 = 0.0; // one-sided, H1: b2 < 0
    double p1_two_sided = 0.0;
    double p2_two_sided = 0.0;
    std::size_t n = 0;

    double a2() const { return a1 + (b1 - b2) * x_star; }
    double predict(double x) const {
        return x <= x_star ? a1 + b1 * x : a2() + b2 * x;
    }
};

/// Two-piece continuous linear model. The breakpoint grid is the observed
/// distinct x values inside the central 90% quantile range; each candidate is
/// an OLS fit on the basis {1, x, (x - c)+} (continuity built in) and the
/// candidate with the smallest residual sum of squares wins, ties going to
/// the smaller breakpoint. Collinear candidates are skipped; if every
/// candidate is skipped a ValidationError is thrown.
PiecewiseFit fit_piecewise(std::span<const double> x, std::span<const double> y);

/// y minus its OLS prediction from w. Residuals have mean 0 and zero sample
/// covariance with w. A zero-variance w degenerates to y - mean(y); the flag
/// reports that.
std::vector<double> residualize(std::span<const double> y, std::span<const double> w,
                                bool* degenerate = nullptr);

struct Stratum {
    double lo = 0.0; // half-open (lo, hi]
    double hi = 0.0;
    std::size_t n = 0;
    std::optional<PiecewiseFit> fit; // empty when the stratum lacks data
    std::string note;
};

/// Piecewise fits within strata of w. Strata with fewer than `min_n` points
/// (or otherwise unfittable data) are reported as insufficient.
std::vector<Stratum> stratified_piecewise(std::span<const double> x,
                                          std::span<const double> y,
                                          std::span<const double> w,
                                          std::span<const double> bounds,
                                          std::size_t min_n = 10);

/// Rank-weight strata covering (0, 3], finest where the mass concentrates.
std::span<const double> default_strata_bounds();

enum class GroupKey { field, city };

/// One analyzed paper, as consumed by the per-group fits.
struct PaperStat {
    std::string paper_id;
    std::string field;
    std::vector<std::string> cities; // distinct city ids
    double y = 0.0;                  // ARC, possibly rank-adjusted
    std::optional<double> avg_wdist;
    std::optional<double> dist_entropy;
};

struct GroupFit {
    std::string group;
    std::size_t n_dist = 0;
    std::size_t n_ent = 0;
    std::optional<PiecewiseFit> dist_fit;
    std::optional<LinearFit> ent_fit;
    std::string note;
};

/// Per-field or per-city fits: a piecewise fit of y on average weighted
/// distance and a linear fit of y on distance entropy. For city grouping a
/// paper belongs to every city in its coauthor set. Groups below `min_n`
/// observations are reported but not fitted.
std::vector<GroupFit> subgroup_analysis(std::span<const PaperStat> papers, GroupKey key,
                                        std::size_t min_n = 10);

struct RouteCount {
    std::vector<std::string> countries; // sorted within the tuple
    std::size_t count = 0;
};

/// Most frequent unordered country pairs (arity 2) or triples (arity 3)
/// across papers' distinct coauthor country sets. Descending by count, ties
/// broken lexicographically.
std::vector<RouteCount> top_routes(std::span<const std::vector<std::string>> countries_per_paper,
                                   std::size_t k, int arity);

struct NorthSouthShare {
    double nn = 0.0;
    double ns = 0.0;
    double ss = 0.0; // derived as 1 - nn - ns so the three sum to 1 exactly
    std::size_t n_pairs = 0;
};

/// Fraction of coauthor pairs (all unordered pairs within each paper's
/// coauthor list) whose endpoints are both north / mixed / both south.
/// Unclassified countries are a hard error listing the offenders.
NorthSouthShare north_south_share(
    std::span<const std::vector<std::string>> coauthor_countries_per_paper,
    const std::unordered_map<std::string, bool>& is_north);

struct DistanceArcRow {
    double network = 0.0;  // weighted network distance
    double euclid = 0.0;   // great-circle km
    double arc = 0.0;
};

struct NormalizedDifference {
    std::vector<double> standardized; // mean 0, variance 1 unless degenerate
    double mean_arc_low = 0.0;        // mean ARC where the difference < 0
    double mean_arc_high = 0.0;       // mean ARC where the difference > 0
    std::size_t n_low = 0;
    std::size_t n_high = 0;
    bool degenerate = false; // zero-variance difference, groups empty
};

/// Maps both distance columns to [0,1] by min-max, standardizes their
/// difference (network - Euclidean) to mean 0 / variance 1, and compares the
/// mean ARC of below-average vs above-average differences. Zero range in
/// either distance column is an error.
NormalizedDifference normalized_distance_difference(std::span<const DistanceArcRow> rows);

} // namespace geodiverse::stats
