// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#include "geodiverse/flight_network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <queue>

#include "geodiverse/errors.hpp"

namespace geodiverse::net {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t hash_double(double v, std::uint64_t h) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    return fnv1a(&bits, sizeof bits, h);
}

} // namespace

double effective_length(double d_km, const EffectiveParams& params) {
    if (!(params.lambda > 0.0 && params.lambda < 1.0))
        throw ValidationError("lambda must lie in (0,1)");
    if (!(d_km >= 0.0))
        throw ValidationError("effective_length: negative or non-finite distance");
    return params.lambda * d_km + (1.0 - params.lambda);
}

std::int32_t FlightGraph::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

std::int32_t FlightGraph::index_of(const std::string& id) const {
    const auto idx = find(id);
    if (idx < 0)
        throw ValidationError("unknown airport id: " + id);
    return idx;
}

FlightGraph build_graph(std::vector<Airport> airports,
                        const std::vector<FlightEdgeInput>& edges,
                        EffectiveParams params, BuildStats* stats) {
    if (!(params.lambda > 0.0 && params.lambda < 1.0))
        throw ValidationError("lambda must lie in (0,1)");

    FlightGraph g;
    g.params_ = params;
    std::sort(airports.begin(), airports.end(),
              [](const Airport& a, const Airport& b) { return a.id < b.id; });
    for (const auto& a : airports) {
        if (!geo::coords_valid(a.pos))
            throw ValidationError("airport " + a.id + ": coordinate out of range");
        if (!g.index_.emplace(a.id, std::int32_t(g.airports_.size())).second)
            throw ValidationError("duplicate airport id: " + a.id);
        g.airports_.push_back(a);
    }

    BuildStats local;
    // Canonical undirected key (min idx, max idx); duplicates keep max volume.
    std::map<std::pair<std::int32_t, std::int32_t>, double> collapsed;
    for (const auto& e : edges) {
        auto i = g.find(e.src);
        auto j = g.find(e.dst);
        if (i < 0 || j < 0)
            throw ValidationError("flight edge " + e.src + " -> " + e.dst +
                                  ": endpoint not in airport set");
        if (!(e.volume >= 0.0))
            throw ValidationError("flight edge " + e.src + " -> " + e.dst +
                                  ": negative or non-finite volume");
        if (i == j) {
            ++local.self_loops_dropped;
            continue;
        }
        if (i > j) std::swap(i, j);
        auto [it, inserted] = collapsed.emplace(std::make_pair(i, j), e.volume);
        if (!inserted) {
            ++local.duplicates_collapsed;
            it->second = std::max(it->second, e.volume);
        }
    }

    g.adj_.resize(g.airports_.size());
    std::uint64_t h = 1469598103934665603ULL;
    h = hash_double(params.lambda, h);
    for (const auto& a : g.airports_) {
        h = fnv1a(a.id.data(), a.id.size(), h);
        h = hash_double(a.pos.lat, h);
        h = hash_double(a.pos.lon, h);
    }
    for (const auto& [key, volume] : collapsed) {
        const auto [i, j] = key;
        const double km = geo::haversine_km(g.airports_[i].pos, g.airports_[j].pos);
        if (km > 9000.0) ++local.long_edges;
        const double eff = effective_length(km, params);
        g.adj_[i].push_back({j, volume, km, eff});
        g.adj_[j].push_back({i, volume, km, eff});
        h = fnv1a(g.airports_[i].id.data(), g.airports_[i].id.size(), h);
        h = fnv1a(g.airports_[j].id.data(), g.airports_[j].id.size(), h);
        h = hash_double(volume, h);
    }
    for (auto& nbrs : g.adj_)
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const FlightGraph::Edge& a, const FlightGraph::Edge& b) { return a.to < b.to; });
    g.n_edges_ = collapsed.size();
    g.hash_ = h;
    if (stats) *stats = local;
    return g;
}

namespace {

struct NodeState {
    double dist = kUnreachable;
    std::int32_t hops = 0;
    std::int32_t parent = -1; // -1: source or unseen
    bool seen = false;
};

std::vector<std::string> reconstruct(const FlightGraph& g,
                                     const std::vector<NodeState>& state,
                                     std::int32_t node) {
    std::vector<std::string> path;
    for (std::int32_t v = node; v != -1; v = state[v].parent)
        path.push_back(g.airport(v).id);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<std::int32_t> resolve(const FlightGraph& g, std::span<const std::string> ids) {
    std::vector<std::int32_t> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(g.index_of(id));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

PathResult shortest_effective_path(const FlightGraph& g,
                                   std::span<const std::string> src_set,
                                   std::span<const std::string> dst_set) {
    if (src_set.empty() || dst_set.empty())
        throw ValidationError("shortest_effective_path: empty airport set");
    const auto sources = resolve(g, src_set);
    const auto targets = resolve(g, dst_set);

    // Dijkstra ranked by (dist, hops); exact ties resolved by comparing the
    // full id sequences. Edge costs are strictly positive (lambda < 1), so
    // tie propagation cannot cycle.
    std::vector<NodeState> state(g.airport_count());
    using QItem = std::pair<double, std::int32_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> queue;
    for (auto s : sources) {
        // Source init in ascending id order; the lexicographic rule picks the
        // smallest source when several reach a node at the same cost.
        if (state[s].seen) continue;
        state[s] = {0.0, 0, -1, true};
        queue.push({0.0, s});
    }

    auto better = [&](std::int32_t node, double d, std::int32_t hops, std::int32_t parent) {
        NodeState& cur = state[node];
        if (!cur.seen || d < cur.dist) return true;
        if (d > cur.dist) return false;
        if (hops != cur.hops) return hops < cur.hops;
        if (parent == cur.parent) return false;
        auto candidate = reconstruct(g, state, parent);
        candidate.push_back(g.airport(node).id);
        return candidate < reconstruct(g, state, node);
    };

    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > state[u].dist) continue;
        for (const auto& e : g.edges(u)) {
            const double nd = state[u].dist + e.effective_len;
            if (better(e.to, nd, state[u].hops + 1, u)) {
                state[e.to] = {nd, state[u].hops + 1, u, true};
                queue.push({nd, e.to});
            }
        }
    }

    std::int32_t best = -1;
    for (auto t : targets) {
        if (!state[t].seen) continue;
        if (best == -1) {
            best = t;
            continue;
        }
        if (state[t].dist < state[best].dist ||
            (state[t].dist == state[best].dist &&
             (state[t].hops < state[best].hops ||
              (state[t].hops == state[best].hops &&
               reconstruct(g, state, t) < reconstruct(g, state, best)))))
            best = t;
    }
    if (best == -1) return {};
    return {state[best].dist, reconstruct(g, state, best)};
}

std::vector<double> effective_distances_from(const FlightGraph& g,
                                             std::span<const std::int32_t> sources) {
    std::vector<double> dist(g.airport_count(), kUnreachable);
    using QItem = std::pair<double, std::int32_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> queue;
    for (auto s : sources) {
        dist[s] = 0.0;
        queue.push({0.0, s});
    }
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (const auto& e : g.edges(u)) {
            const double nd = d + e.effective_len;
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                queue.push({nd, e.to});
            }
        }
    }
    return dist;
}

std::vector<std::int32_t> hop_distances_from(const FlightGraph& g,
                                             std::span<const std::int32_t> sources) {
    std::vector<std::int32_t> hops(g.airport_count(), -1);
    std::deque<std::int32_t> queue;
    for (auto s : sources) {
        if (hops[s] == 0) continue;
        hops[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (const auto& e : g.edges(u)) {
            if (hops[e.to] == -1) {
                hops[e.to] = hops[u] + 1;
                queue.push_back(e.to);
            }
        }
    }
    return hops;
}

double weighted_degree(const FlightGraph& g, std::int32_t idx) {
    double sum = 0.0;
    for (const auto& e : g.edges(idx)) sum += e.volume;
    return sum;
}

double weighted_degree(const FlightGraph& g, const std::string& airport_id) {
    return weighted_degree(g, g.index_of(airport_id));
}

double CentralityResult::of(const FlightGraph& g, const std::string& id) const {
    return score[g.index_of(id)];
}

CentralityResult eigenvector_centrality(const FlightGraph& g) {
    const std::size_t n = g.airport_count();
    if (n == 0)
        throw ValidationError("eigenvector_centrality: empty graph");

    // Connected components, then one power iteration per component.
    std::vector<std::int32_t> comp(n, -1);
    std::vector<std::vector<std::int32_t>> members;
    for (std::int32_t v = 0; v < std::int32_t(n); ++v) {
        if (comp[v] != -1) continue;
        const auto c = std::int32_t(members.size());
        members.emplace_back();
        std::deque<std::int32_t> queue{v};
        comp[v] = c;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            members[c].push_back(u);
            for (const auto& e : g.edges(u)) {
                if (comp[e.to] == -1) {
                    comp[e.to] = c;
                    queue.push_back(e.to);
                }
            }
        }
    }

    CentralityResult result;
    result.score.assign(n, 0.0);
    result.minor_component.assign(n, 0);
    result.n_components = int(members.size());

    std::size_t largest = 0;
    for (const auto& m : members) largest = std::max(largest, m.size());

    constexpr double tol = 1e-10;
    constexpr int max_iter = 10000;
    for (const auto& m : members) {
        double total_volume = 0.0;
        for (auto v : m)
            for (const auto& e : g.edges(v)) total_volume += e.volume;
        const bool minor = m.size() != largest;
        if (minor)
            for (auto v : m) result.minor_component[v] = 1;
        if (total_volume == 0.0) continue; // edgeless (or zero-volume): score 0

        std::vector<double> x(m.size(), 1.0), next(m.size());
        std::vector<std::int32_t> local(n, -1);
        for (std::size_t i = 0; i < m.size(); ++i) local[m[i]] = std::int32_t(i);
        for (int iter = 0; iter < max_iter; ++iter) {
            // x <- (A + I) x; the +I shift keeps bipartite components from
            // oscillating and leaves the principal eigenvector unchanged.
            for (std::size_t i = 0; i < m.size(); ++i) {
                double acc = x[i];
                for (const auto& e : g.edges(m[i])) acc += e.volume * x[local[e.to]];
                next[i] = acc;
            }
            const double norm = *std::max_element(next.begin(), next.end());
            double delta = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) {
                next[i] /= norm;
                delta = std::max(delta, std::fabs(next[i] - x[i]));
            }
            x.swap(next);
            if (delta < tol) break;
        }
        for (std::size_t i = 0; i < m.size(); ++i) result.score[m[i]] = x[i];
    }
    return result;
}

} // namespace geodiverse::net
