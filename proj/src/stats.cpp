// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#include "geodiverse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "geodiverse/errors.hpp"

namespace geodiverse::stats {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_finite(std::span<const double> x, std::span<const double> y,
                         const char* who) {
    if (x.size() != y.size())
        throw ValidationError(std::string(who) + ": x and y differ in length");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw ValidationError(std::string(who) + ": non-finite value at row " +
                                  std::to_string(i));
}

double quantile_sorted(std::span<const double> sorted, double q) {
    const double pos = q * double(sorted.size() - 1);
    const auto i = std::size_t(pos);
    const double frac = pos - double(i);
    return i + 1 < sorted.size() ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
                                 : sorted[i];
}

/// p-value helpers tolerant of perfect fits (zero residual variance).
double p_greater_safe(double coef, double se, double dof) {
    if (se == 0.0) return coef > 0.0 ? 0.0 : 1.0;
    return p_value_greater(coef / se, dof);
}
double p_less_safe(double coef, double se, double dof) {
    if (se == 0.0) return coef < 0.0 ? 0.0 : 1.0;
    return p_value_less(coef / se, dof);
}
double p_two_sided_safe(double coef, double se, double dof) {
    if (se == 0.0) return coef == 0.0 ? 1.0 : 0.0;
    return p_value_two_sided(coef / se, dof);
}

} // namespace

BinnedSeries bin_series(std::span<const double> x, std::span<const double> y,
                        double width, double origin) {
    if (x.size() != y.size())
        throw ValidationError("bin_series: x and y differ in length");
    if (x.empty())
        throw ValidationError("bin_series: empty input");
    if (!(width > 0.0))
        throw ValidationError("bin_series: bin width must be positive");

    BinnedSeries out;
    std::vector<std::size_t> keep;
    keep.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isfinite(x[i]) && std::isfinite(y[i]))
            keep.push_back(i);
        else
            ++out.rejected_rows;
    }
    if (keep.empty())
        throw ValidationError("bin_series: no finite rows");

    auto bin_of = [&](double v) {
        return (long long)std::floor((v - origin) / width);
    };
    long long lo = bin_of(x[keep.front()]);
    long long hi = lo;
    for (auto i : keep) {
        lo = std::min(lo, bin_of(x[i]));
        hi = std::max(hi, bin_of(x[i]));
    }
    const auto n_bins = std::size_t(hi - lo + 1);
    out.edges.resize(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b)
        out.edges[b] = origin + width * double(lo + (long long)b);
    out.mean.assign(n_bins, kNaN);
    out.count.assign(n_bins, 0);
    std::vector<double> sum(n_bins, 0.0);
    for (auto i : keep) {
        const auto b = std::size_t(bin_of(x[i]) - lo);
        sum[b] += y[i];
        ++out.count[b];
    }
    for (std::size_t b = 0; b < n_bins; ++b)
        if (out.count[b]) out.mean[b] = sum[b] / double(out.count[b]);
    return out;
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    require_same_finite(x, y, "fit_linear");
    const auto n = x.size();
    if (n < 3)
        throw ValidationError("fit_linear: need at least 3 observations");

    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd Y(n);
    for (std::size_t i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = x[i];
        Y(i) = y[i];
    }
    const double var_x = (X.col(1).array() - X.col(1).mean()).square().sum();
    if (var_x == 0.0)
        throw ValidationError("fit_linear: x has zero variance");

    const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(Y);
    const double rss = (Y - X * beta).squaredNorm();
    const double dof = double(n - 2);
    const double sigma2 = rss / dof;
    const Eigen::Matrix2d xtx_inv = (X.transpose() * X).inverse();

    LinearFit fit;
    fit.intercept = beta(0);
    fit.slope = beta(1);
    fit.n = n;
    fit.se_slope = std::sqrt(std::max(0.0, sigma2 * xtx_inv(1, 1)));
    fit.t = fit.se_slope > 0.0
                ? fit.slope / fit.se_slope
                : (fit.slope == 0.0 ? 0.0
                                    : std::copysign(std::numeric_limits<double>::infinity(),
                                                    fit.slope));
    fit.p_two_sided = p_two_sided_safe(fit.slope, fit.se_slope, dof);
    return fit;
}

PiecewiseFit fit_piecewise(std::span<const double> x, std::span<const double> y) {
    require_same_finite(x, y, "fit_piecewise");
    const auto n = x.size();
    if (n < 10)
        throw ValidationError("fit_piecewise: need at least 10 observations");

    std::vector<double> sorted_x(x.begin(), x.end());
    std::sort(sorted_x.begin(), sorted_x.end());
    std::vector<double> distinct = sorted_x;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw ValidationError("fit_piecewise: need at least 3 distinct x values");

    const double q_lo = quantile_sorted(sorted_x, 0.05);
    const double q_hi = quantile_sorted(sorted_x, 0.95);
    std::vector<double> candidates;
    for (double v : distinct)
        if (v >= q_lo && v <= q_hi) candidates.push_back(v);
    if (candidates.empty()) {
        // Heavy repetition can push every distinct value outside the quantile
        // window; fall back to the interior values.
        candidates.assign(distinct.begin() + 1, distinct.end() - 1);
    }

    // Center, then scan candidates with suffix sums so each RSS is O(1).
    const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    std::vector<std::pair<double, double>> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {x[i] - mean_x, y[i] - mean_y};
    std::sort(pts.begin(), pts.end());

    long double Sxx = 0.0L, Sxy = 0.0L, Syy = 0.0L;
    for (const auto& [xi, yi] : pts) {
        Sxx += (long double)xi * xi;
        Sxy += (long double)xi * yi;
        Syy += (long double)yi * yi;
    }

    struct Suffix {
        long double n = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    };
    // suffix[i]: sums over points strictly after index i-1 (i.e. pts[i..)).
    std::vector<Suffix> suffix(n + 1);
    for (std::size_t i = n; i-- > 0;) {
        const auto [xi, yi] = pts[i];
        suffix[i] = suffix[i + 1];
        suffix[i].n += 1;
        suffix[i].sx += xi;
        suffix[i].sxx += (long double)xi * xi;
        suffix[i].sy += yi;
        suffix[i].sxy += (long double)xi * yi;
    }

    double best_c = kNaN;
    long double best_rss = std::numeric_limits<long double>::infinity();
    std::size_t n_skipped = 0;
    for (double c_raw : candidates) {
        const long double c = c_raw - mean_x;
        // First index with x > c.
        const auto it = std::upper_bound(pts.begin(), pts.end(),
                                         std::make_pair(double(c), std::numeric_limits<double>::infinity()));
        const Suffix& s = suffix[std::size_t(it - pts.begin())];
        const long double T1 = s.sx - c * s.n;          // sum u
        const long double T2 = s.sxx - 2 * c * s.sx + c * c * s.n; // sum u^2
        const long double Tx = s.sxx - c * s.sx;        // sum x*u
        const long double Ty = s.sxy - c * s.sy;        // sum u*y
        // Normal equations for beta = (a, b, g) on centered data:
        // [ n    0    T1 ] [a]   [ 0   ]
        // [ 0    Sxx  Tx ] [b] = [ Sxy ]
        // [ T1   Tx   T2 ] [g]   [ Ty  ]
        const long double nn = (long double)n;
        const long double det = nn * (Sxx * T2 - Tx * Tx) - T1 * (Sxx * T1) +
                                0 /* symmetric zeros */ - (-T1) * 0 -
                                nn * 0 + T1 * (0 * Tx - Sxx * T1) + T1 * 0;
        // Expanded determinant of the symmetric matrix above:
        const long double d = nn * (Sxx * T2 - Tx * Tx) - T1 * T1 * Sxx;
        (void)det;
        const long double scale = nn * Sxx * (T2 + 1e-300L);
        if (!(std::fabs((double)d) > 1e-12 * std::fabs((double)scale)) || s.n == 0) {
            ++n_skipped;
            continue;
        }
        // Solve by elimination (a depends only on g because of the zero block).
        // From row 1: a = -T1 * g / n. From row 2: b = (Sxy - Tx * g) / Sxx.
        // Substitute into row 3.
        const long double denom = T2 - T1 * T1 / nn - Tx * Tx / Sxx;
        if (denom <= 0.0L) {
            ++n_skipped;
            continue;
        }
        const long double g = (Ty - Tx * Sxy / Sxx) / denom;
        const long double b = (Sxy - Tx * g) / Sxx;
        const long double a = -T1 * g / nn;
        const long double rss = Syy - (b * Sxy + g * Ty + a * 0.0L) -
                                a * (a * nn + g * T1) - b * 0.0L -
                                g * (a * T1) - b * (g * Tx) - g * (b * Tx) +
                                (a * a * nn + b * b * Sxx + g * g * T2 +
                                 2 * a * g * T1 + 2 * b * g * Tx) -
                                (a * a * nn + b * b * Sxx + g * g * T2 +
                                 2 * a * g * T1 + 2 * b * g * Tx);
        // RSS = Syy - 2 beta'X'y + beta'X'X beta, with X'y = (0, Sxy, Ty):
        const long double bXy = b * Sxy + g * Ty;
        const long double bXXb = a * a * nn + b * b * Sxx + g * g * T2 +
                                 2 * a * g * T1 + 2 * b * g * Tx;
        const long double rss_c = Syy - 2 * bXy + bXXb;
        (void)rss;
        if (rss_c < best_rss - 0.0L ||
            (rss_c == best_rss && (std::isnan(best_c) || c_raw < best_c))) {
            best_rss = rss_c;
            best_c = c_raw;
        }
    }
    if (std::isnan(best_c))
        throw ValidationError("fit_piecewise: every breakpoint candidate was degenerate");

    // Full refit at the winning breakpoint for reported coefficients and
    // standard errors.
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd Y(n);
    for (std::size_t i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = x[i];
        X(i, 2) = std::max(0.0, x[i] - best_c);
        Y(i) = y[i];
    }
    const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(Y);
    const Eigen::VectorXd resid = Y - X * beta;
    const double rss = resid.squaredNorm();
    const double dof = double(n - 3);
    const double sigma2 = rss / dof;
    const Eigen::Matrix3d cov = sigma2 * (X.transpose() * X).inverse();

    PiecewiseFit fit;
    fit.x_star = best_c;
    fit.a1 = beta(0);
    fit.b1 = beta(1);
    fit.b2 = beta(1) + beta(2);
    fit.rss = rss;
    fit.n = n;
    const double se_b1 = std::sqrt(std::max(0.0, cov(1, 1)));
    const double se_b2 = std::sqrt(std::max(0.0, cov(1, 1) + cov(2, 2) + 2.0 * cov(1, 2)));
    fit.p1 = p_greater_safe(fit.b1, se_b1, dof);
    fit.p2 = p_less_safe(fit.b2, se_b2, dof);
    fit.p1_two_sided = p_two_sided_safe(fit.b1, se_b1, dof);
    fit.p2_two_sided = p_two_sided_safe(fit.b2, se_b2, dof);
    return fit;
}

std::vector<double> residualize(std::span<const double> y, std::span<const double> w,
                                bool* degenerate) {
    require_same_finite(w, y, "residualize");
    const auto n = y.size();
    if (n == 0)
        throw ValidationError("residualize: empty input");
    const double mean_w = std::accumulate(w.begin(), w.end(), 0.0) / double(n);
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sww = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sww += (w[i] - mean_w) * (w[i] - mean_w);
        swy += (w[i] - mean_w) * (y[i] - mean_y);
    }
    std::vector<double> out(n);
    if (sww == 0.0) {
        if (degenerate) *degenerate = true;
        for (std::size_t i = 0; i < n; ++i) out[i] = y[i] - mean_y;
        return out;
    }
    if (degenerate) *degenerate = false;
    const double slope = swy / sww;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] - mean_y - slope * (w[i] - mean_w);
    return out;
}

std::span<const double> default_strata_bounds() {
    static const std::vector<double> bounds = {0.0,  1.0,  1.02, 1.04, 1.06,
                                               1.08, 1.10, 1.15, 1.20, 1.25,
                                               1.50, 1.75, 2.0,  2.5,  3.0};
    return bounds;
}

std::vector<Stratum> stratified_piecewise(std::span<const double> x,
                                          std::span<const double> y,
                                          std::span<const double> w,
                                          std::span<const double> bounds,
                                          std::size_t min_n) {
    if (x.size() != y.size() || x.size() != w.size())
        throw ValidationError("stratified_piecewise: input lengths differ");
    if (bounds.size() < 2)
        throw ValidationError("stratified_piecewise: need at least one stratum");
    for (std::size_t i = 1; i < bounds.size(); ++i)
        if (!(bounds[i] > bounds[i - 1]))
            throw ValidationError("stratified_piecewise: bounds must be strictly increasing");

    std::vector<Stratum> out;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        Stratum st;
        st.lo = bounds[s];
        st.hi = bounds[s + 1];
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (w[i] > st.lo && w[i] <= st.hi) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
        }
        st.n = xs.size();
        if (st.n < min_n) {
            st.note = "insufficient data";
        } else {
            try {
                st.fit = fit_piecewise(xs, ys);
            } catch (const ValidationError& e) {
                st.note = e.what();
            }
        }
        out.push_back(std::move(st));
    }
    return out;
}

std::vector<GroupFit> subgroup_analysis(std::span<const PaperStat> papers, GroupKey key,
                                        std::size_t min_n) {
    std::map<std::string, std::vector<const PaperStat*>> groups;
    for (const auto& p : papers) {
        if (key == GroupKey::field) {
            groups[p.field].push_back(&p);
        } else {
            for (const auto& c : p.cities) groups[c].push_back(&p);
        }
    }

    std::vector<GroupFit> out;
    for (const auto& [name, members] : groups) {
        GroupFit gf;
        gf.group = name;
        std::vector<double> xd, yd, xe, ye;
        for (const auto* p : members) {
            if (p->avg_wdist) {
                xd.push_back(*p->avg_wdist);
                yd.push_back(p->y);
            }
            if (p->dist_entropy) {
                xe.push_back(*p->dist_entropy);
                ye.push_back(p->y);
            }
        }
        gf.n_dist = xd.size();
        gf.n_ent = xe.size();
        if (gf.n_dist >= min_n) {
            try {
                gf.dist_fit = fit_piecewise(xd, yd);
            } catch (const ValidationError& e) {
                gf.note = e.what();
            }
        } else {
            gf.note = "insufficient data";
        }
        if (gf.n_ent >= min_n) {
            try {
                gf.ent_fit = fit_linear(xe, ye);
            } catch (const ValidationError& e) {
                if (!gf.note.empty()) gf.note += "; ";
                gf.note += e.what();
            }
        }
        out.push_back(std::move(gf));
    }
    return out;
}

std::vector<RouteCount> top_routes(std::span<const std::vector<std::string>> countries_per_paper,
                                   std::size_t k, int arity) {
    if (arity != 2 && arity != 3)
        throw ValidationError("top_routes: arity must be 2 or 3");
    std::map<std::vector<std::string>, std::size_t> counts;
    for (const auto& raw : countries_per_paper) {
        std::vector<std::string> countries(raw.begin(), raw.end());
        std::sort(countries.begin(), countries.end());
        countries.erase(std::unique(countries.begin(), countries.end()), countries.end());
        const auto m = countries.size();
        if (m < std::size_t(arity)) continue;
        if (arity == 2) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j)
                    ++counts[{countries[i], countries[j]}];
        } else {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j)
                    for (std::size_t l = j + 1; l < m; ++l)
                        ++counts[{countries[i], countries[j], countries[l]}];
        }
    }
    std::vector<RouteCount> ranked;
    ranked.reserve(counts.size());
    for (const auto& [route, c] : counts) ranked.push_back({route, c});
    std::sort(ranked.begin(), ranked.end(), [](const RouteCount& a, const RouteCount& b) {
        return a.count != b.count ? a.count > b.count : a.countries < b.countries;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

NorthSouthShare north_south_share(
    std::span<const std::vector<std::string>> coauthor_countries_per_paper,
    const std::unordered_map<std::string, bool>& is_north) {
    std::set<std::string> unknown;
    for (const auto& paper : coauthor_countries_per_paper)
        for (const auto& c : paper)
            if (!is_north.contains(c)) unknown.insert(c);
    if (!unknown.empty()) {
        std::string msg = "north_south_share: unclassified countries:";
        std::size_t listed = 0;
        for (const auto& c : unknown) {
            msg += " " + c;
            if (++listed == 20) break;
        }
        throw ValidationError(msg);
    }

    std::size_t nn = 0, ns = 0, ss = 0;
    for (const auto& paper : coauthor_countries_per_paper) {
        for (std::size_t i = 0; i < paper.size(); ++i) {
            for (std::size_t j = i + 1; j < paper.size(); ++j) {
                const bool a = is_north.at(paper[i]);
                const bool b = is_north.at(paper[j]);
                if (a && b) ++nn;
                else if (!a && !b) ++ss;
                else ++ns;
            }
        }
    }
    NorthSouthShare out;
    out.n_pairs = nn + ns + ss;
    if (out.n_pairs == 0) return out;
    out.nn = double(nn) / double(out.n_pairs);
    out.ns = double(ns) / double(out.n_pairs);
    out.ss = 1.0 - out.nn - out.ns;
    return out;
}

NormalizedDifference normalized_distance_difference(std::span<const DistanceArcRow> rows) {
    if (rows.size() < 2)
        throw ValidationError("normalized_distance_difference: need at least 2 rows");
    double net_lo = rows[0].network, net_hi = rows[0].network;
    double euc_lo = rows[0].euclid, euc_hi = rows[0].euclid;
    for (const auto& r : rows) {
        if (!std::isfinite(r.network) || !std::isfinite(r.euclid) || !std::isfinite(r.arc))
            throw ValidationError("normalized_distance_difference: non-finite row");
        net_lo = std::min(net_lo, r.network);
        net_hi = std::max(net_hi, r.network);
        euc_lo = std::min(euc_lo, r.euclid);
        euc_hi = std::max(euc_hi, r.euclid);
    }
    if (net_hi == net_lo || euc_hi == euc_lo)
        throw ValidationError("normalized_distance_difference: zero range in a distance column");

    const auto n = rows.size();
    NormalizedDifference out;
    out.standardized.resize(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (rows[i].network - net_lo) / (net_hi - net_lo) -
                         (rows[i].euclid - euc_lo) / (euc_hi - euc_lo);
        out.standardized[i] = d;
        mean += d;
    }
    mean /= double(n);
    double var = 0.0;
    for (double& d : out.standardized) {
        d -= mean;
        var += d * d;
    }
    var /= double(n); // population variance: exact unit variance by construction
    if (var == 0.0) {
        out.degenerate = true;
        out.mean_arc_low = out.mean_arc_high = kNaN;
        return out;
    }
    const double sd = std::sqrt(var);
    double sum_low = 0.0, sum_high = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.standardized[i] /= sd;
        if (out.standardized[i] < 0.0) {
            sum_low += rows[i].arc;
            ++out.n_low;
        } else if (out.standardized[i] > 0.0) {
            sum_high += rows[i].arc;
            ++out.n_high;
        }
    }
    out.mean_arc_low = out.n_low ? sum_low / double(out.n_low) : kNaN;
    out.mean_arc_high = out.n_high ? sum_high / double(out.n_high) : kNaN;
    return out;
}

} // namespace geodiverse::stats
