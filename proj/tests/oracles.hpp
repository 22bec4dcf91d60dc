#pragma once

// Brute-force references for the test suites. Nothing here calls into the
// code paths it is used to check.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "revcut/network.hpp"
#include "revcut/pattern.hpp"
#include "revcut/rng.hpp"

namespace oracle {

using Grid = std::vector<std::vector<std::uint32_t>>;

/// Rank over F_q as log_q of the size of the row space, by enumerating
/// every linear combination of the rows.
inline std::size_t rank_by_span(const Grid& rows, std::uint32_t q) {
    if (rows.empty()) return 0;
    const std::size_t n = rows.size(), w = rows[0].size();
    std::set<std::vector<std::uint32_t>> span;
    std::vector<std::uint32_t> coef(n, 0);
    while (true) {
        std::vector<std::uint32_t> v(w, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < w; ++j) v[j] = static_cast<std::uint32_t>((v[j] + std::uint64_t{coef[i]} * rows[i][j]) % q);
        span.insert(v);
        std::size_t i = n;
        while (i > 0 && ++coef[i - 1] == q) coef[--i] = 0;
        if (i == 0) break;
    }
    std::size_t r = 0;
    for (std::size_t size = 1; size < span.size(); size *= q) ++r;
    return r;
}

/// Largest set of 1-entries in distinct rows and columns, by trying every
/// choice row by row.
inline std::size_t term_rank_brute(const revcut::PatternMatrix& p, const std::vector<std::size_t>& rows) {
    std::vector<bool> used(p.cols(), false);
    std::function<std::size_t(std::size_t)> go = [&](std::size_t i) -> std::size_t {
        if (i == rows.size()) return 0;
        std::size_t best = go(i + 1);
        for (std::size_t c = 0; c < p.cols(); ++c) {
            if (!p(rows[i], c) || used[c]) continue;
            used[c] = true;
            best = std::max(best, 1 + go(i + 1));
            used[c] = false;
        }
        return best;
    };
    return go(0);
}

/// min over all partitions A = A1 + A2 of |f_A1| + |A2|, where f of a row
/// set is the union of the rows' supports.
inline std::size_t min_partition_witness(const revcut::PatternMatrix& ua) {
    const std::size_t n = ua.rows();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t a2 = 0; a2 < (1u << n); ++a2) {
        std::set<std::size_t> f;
        std::size_t t = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (a2 >> r & 1) {
                ++t;
                continue;
            }
            for (std::size_t c = 0; c < ua.cols(); ++c)
                if (ua(r, c)) f.insert(c);
        }
        best = std::min(best, f.size() + t);
    }
    return best;
}

/// Edmonds-Karp on unit capacities; parallel edges add up.
inline std::size_t max_flow(const revcut::net::Network& net) {
    const std::size_t n = net.nodes().size();
    std::vector<std::vector<long>> cap(n, std::vector<long>(n, 0));
    for (const auto& e : net.edges()) cap[e.tail][e.head] += e.unbounded ? 1'000'000 : 1;
    std::size_t flow = 0;
    while (true) {
        std::vector<long> parent(n, -1);
        parent[net.source()] = static_cast<long>(net.source());
        std::deque<std::size_t> queue{net.source()};
        while (!queue.empty() && parent[net.sink()] < 0) {
            auto v = queue.front();
            queue.pop_front();
            for (std::size_t u = 0; u < n; ++u)
                if (parent[u] < 0 && cap[v][u] > 0) {
                    parent[u] = static_cast<long>(v);
                    queue.push_back(u);
                }
        }
        if (parent[net.sink()] < 0) return flow;
        for (std::size_t v = net.sink(); v != net.source(); v = static_cast<std::size_t>(parent[v])) {
            --cap[static_cast<std::size_t>(parent[v])][v];
            ++cap[v][static_cast<std::size_t>(parent[v])];
        }
        ++flow;
    }
}

inline revcut::PatternMatrix random_pattern(revcut::Rng& rng, std::size_t rows, std::size_t cols, double density) {
    revcut::PatternMatrix p(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) p.set(r, c, rng.unit() < density);
    return p;
}

/// Random nonempty row subset of {0..n-1} of size at most `max_size`.
inline std::vector<std::size_t> random_subset(revcut::Rng& rng, std::size_t n, std::size_t max_size) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(all[i - 1], all[rng.uniform(i)]);
    const std::size_t k = 1 + rng.uniform(std::min(n, max_size));
    std::vector<std::size_t> out(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out.begin(), out.end());
    return out;
}

/// Acyclic network in which no backward edge of any cut can reach a
/// forward tail: every edge leaves the source, enters the sink, or enters a
/// dead-end node. Uniform wiretap model with the given z.
inline revcut::net::Instance random_plain_network(revcut::Rng& rng, std::size_t max_nodes, std::size_t z) {
    using namespace revcut::net;
    Instance inst;
    Network& net = inst.network;
    const std::size_t n = 2 + rng.uniform(max_nodes - 1);
    const std::size_t inner = n - 2;
    const std::size_t relays = inner == 0 ? 0 : rng.uniform(inner + 1);
    const auto s = net.add_node("S");
    std::vector<std::size_t> relay, dead;
    for (std::size_t i = 0; i < relays; ++i) relay.push_back(net.add_node("R" + std::to_string(i)));
    for (std::size_t i = relays; i < inner; ++i) dead.push_back(net.add_node("X" + std::to_string(i)));
    const auto d = net.add_node("D");
    net.set_terminals(s, d);
    std::size_t id = 0;
    auto edge = [&](std::size_t t, std::size_t h) { net.add_edge("e" + std::to_string(id++), t, h); };
    const std::size_t edges = 1 + rng.uniform(10);
    for (std::size_t k = 0; k < edges; ++k) {
        switch (rng.uniform(5)) {
            case 0: edge(s, d); break;
            case 1: if (!relay.empty()) edge(s, relay[rng.uniform(relay.size())]); break;
            case 2: if (!relay.empty()) edge(relay[rng.uniform(relay.size())], d); break;
            case 3:
                if (!dead.empty()) {
                    std::vector<std::size_t> from{s};
                    from.insert(from.end(), relay.begin(), relay.end());
                    edge(from[rng.uniform(from.size())], dead[rng.uniform(dead.size())]);
                }
                break;
            default:
                if (!relay.empty() && !dead.empty()) edge(relay[rng.uniform(relay.size())], dead[rng.uniform(dead.size())]);
                break;
        }
    }
    inst.wiretap = Uniform{z};
    return inst;
}

/// Upper-bounding-style network realizing a given cut profile: relays
/// t_i -> D (forward), D -> h_j (backward), unbounded S -> t_i and
/// h_j -> t_i wherever the connectivity matrix has a 1.
inline revcut::net::Instance profile_network(const revcut::PatternMatrix& c, std::size_t z) {
    using namespace revcut::net;
    Instance inst;
    inst.generated = true;
    Network& net = inst.network;
    const auto s = net.add_node("S");
    std::vector<std::size_t> t, h;
    for (std::size_t i = 0; i < c.rows(); ++i) t.push_back(net.add_node("t" + std::to_string(i + 1), false));
    for (std::size_t j = 0; j < c.cols(); ++j) h.push_back(net.add_node("h" + std::to_string(j + 1), false));
    const auto d = net.add_node("D");
    net.set_terminals(s, d);
    for (std::size_t i = 0; i < c.rows(); ++i) net.add_edge("f" + std::to_string(i + 1), t[i], d);
    for (std::size_t j = 0; j < c.cols(); ++j) net.add_edge("b" + std::to_string(j + 1), d, h[j]);
    for (std::size_t i = 0; i < c.rows(); ++i) net.add_edge("s" + std::to_string(i + 1), s, t[i], true);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            if (c(i, j)) net.add_edge("c" + std::to_string(i + 1) + "_" + std::to_string(j + 1), h[j], t[i], true);
    inst.wiretap = Uniform{z};
    return inst;
}

}  // namespace oracle
