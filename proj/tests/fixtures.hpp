#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "revcut/network.hpp"
#include "revcut/rng.hpp"

#ifndef REVCUT_FIXTURES
#error "REVCUT_FIXTURES must point at tests/fixtures"
#endif

inline std::string fixture_path(const std::string& name) { return std::string(REVCUT_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline revcut::net::Instance load_fixture(const std::string& name) {
    return revcut::net::parse_network(read_fixture(name));
}

/// Random directed multigraph with cycles, n nodes, unit edges.
inline revcut::net::Instance random_network(revcut::Rng& rng, std::size_t max_nodes, std::size_t max_edges,
                                            std::size_t z) {
    using namespace revcut::net;
    Instance inst;
    const std::size_t n = 2 + rng.uniform(max_nodes - 1);
    for (std::size_t v = 0; v < n; ++v) inst.network.add_node(v == 0 ? "S" : v == n - 1 ? "D" : "N" + std::to_string(v));
    inst.network.set_terminals(0, n - 1);
    const std::size_t m = 1 + rng.uniform(max_edges);
    for (std::size_t e = 0; e < m; ++e) {
        std::size_t t = rng.uniform(n), h = rng.uniform(n);
        if (t == h) h = (h + 1) % n;
        inst.network.add_edge("e" + std::to_string(e), t, h);
    }
    inst.wiretap = Uniform{z};
    return inst;
}
