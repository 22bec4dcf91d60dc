#include "revcut/network.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "revcut/error.hpp"

namespace revcut::net {

using nlohmann::json;

std::size_t Network::add_node(std::string id, bool can_generate_randomness) {
    if (node_index(id)) throw Error(ErrorCode::ValidationError, "duplicate node id '" + id + "'");
    nodes_.push_back(std::move(id));
    randomness_.push_back(can_generate_randomness);
    return nodes_.size() - 1;
}

std::size_t Network::add_edge(std::string id, std::size_t tail, std::size_t head, bool unbounded) {
    if (edge_index(id)) throw Error(ErrorCode::ValidationError, "duplicate edge id '" + id + "'");
    if (tail >= nodes_.size() || head >= nodes_.size())
        throw Error(ErrorCode::ValidationError, "edge '" + id + "' references a missing node");
    edges_.push_back({std::move(id), tail, head, unbounded});
    return edges_.size() - 1;
}

void Network::set_terminals(std::size_t source, std::size_t sink) {
    source_ = source;
    sink_ = sink;
}

std::optional<std::size_t> Network::node_index(std::string_view id) const {
    auto it = std::find(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::optional<std::size_t> Network::edge_index(std::string_view id) const {
    auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.id == id; });
    if (it == edges_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

void Network::validate() const {
    if (source_ >= nodes_.size()) throw Error(ErrorCode::ValidationError, "source is not a declared node");
    if (sink_ >= nodes_.size()) throw Error(ErrorCode::ValidationError, "sink is not a declared node");
    if (source_ == sink_) throw Error(ErrorCode::ValidationError, "source and sink coincide");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& msg) {
    throw Error(ErrorCode::ParseError, where + ": " + msg);
}

[[noreturn]] void invalid(const std::string& where, const std::string& msg) {
    throw Error(ErrorCode::ValidationError, where + ": " + msg);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) parse_fail(where, std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& v, const std::string& where) {
    if (!v.is_string()) parse_fail(where, "expected a string");
    return v.get<std::string>();
}

std::size_t lookup_node(const Network& net, const json& v, const std::string& where) {
    auto id = require_string(v, where);
    auto idx = net.node_index(id);
    if (!idx) parse_fail(where, "undeclared node '" + id + "'");
    return *idx;
}

std::size_t lookup_edge(const Network& net, const json& v, const std::string& where) {
    auto id = require_string(v, where);
    auto idx = net.edge_index(id);
    if (!idx) parse_fail(where, "undeclared edge '" + id + "'");
    return *idx;
}

}  // namespace

Instance parse_network(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                               ": malformed JSON");
    }
    if (!doc.is_object()) parse_fail("document", "expected a JSON object");

    Instance inst;
    inst.generated = doc.contains("derived");
    Network& net = inst.network;

    const json& nodes = require(doc, "nodes", "document");
    if (!nodes.is_array()) parse_fail("nodes", "expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto where = "nodes[" + std::to_string(i) + "]";
        auto id = require_string(nodes[i], where);
        if (net.node_index(id)) invalid(where, "duplicate node id '" + id + "'");
        net.add_node(id, true);
    }

    if (!doc.contains("source")) invalid("document", "missing source");
    if (!doc.contains("sink")) invalid("document", "missing sink");
    const std::size_t s = lookup_node(net, doc["source"], "source");
    const std::size_t d = lookup_node(net, doc["sink"], "sink");
    if (s == d) invalid("sink", "source and sink coincide");
    net.set_terminals(s, d);

    if (auto it = doc.find("randomness"); it != doc.end()) {
        if (!it->is_array()) parse_fail("randomness", "expected an array of node ids");
        for (std::size_t i = 0; i < net.nodes().size(); ++i) net.set_randomness(i, false);
        for (std::size_t i = 0; i < it->size(); ++i)
            net.set_randomness(lookup_node(net, (*it)[i], "randomness[" + std::to_string(i) + "]"), true);
    }

    const json& edges = require(doc, "edges", "document");
    if (!edges.is_array()) parse_fail("edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto where = "edges[" + std::to_string(i) + "]";
        const json& e = edges[i];
        if (!e.is_object()) parse_fail(where, "expected an object");
        auto id = require_string(require(e, "id", where), where + ".id");
        if (net.edge_index(id)) invalid(where + ".id", "duplicate edge id '" + id + "'");
        auto tail = lookup_node(net, require(e, "tail", where), where + ".tail");
        auto head = lookup_node(net, require(e, "head", where), where + ".head");
        bool unbounded = false;
        if (auto u = e.find("unbounded"); u != e.end()) {
            if (!u->is_boolean()) parse_fail(where + ".unbounded", "expected a boolean");
            unbounded = u->get<bool>();
            if (unbounded && !inst.generated)
                invalid(where + ".unbounded", "unbounded edges are only allowed in generated documents");
        }
        if (auto c = e.find("capacity"); c != e.end()) {
            if (!c->is_number_integer() || c->get<long long>() != 1)
                invalid(where + ".capacity", "capacity must be 1 (split larger capacities into parallel edges)");
            if (unbounded) invalid(where + ".capacity", "unbounded edges carry no capacity");
        }
        net.add_edge(id, tail, head, unbounded);
    }

    const json& wt = require(doc, "wiretap", "document");
    if (!wt.is_object()) parse_fail("wiretap", "expected an object");
    if (wt.contains("z") == wt.contains("sets")) parse_fail("wiretap", "expected exactly one of 'z' or 'sets'");
    if (wt.contains("z")) {
        const json& z = wt["z"];
        if (!z.is_number_integer() || z.get<long long>() < 0) invalid("wiretap.z", "expected a nonnegative integer");
        inst.wiretap = Uniform{static_cast<std::size_t>(z.get<long long>())};
    } else {
        const json& sets = wt["sets"];
        if (!sets.is_array()) parse_fail("wiretap.sets", "expected an array of arrays");
        Explicit ex;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            auto where = "wiretap.sets[" + std::to_string(i) + "]";
            if (!sets[i].is_array()) parse_fail(where, "expected an array of edge ids");
            std::vector<std::size_t> set;
            for (std::size_t k = 0; k < sets[i].size(); ++k) {
                auto idx = lookup_edge(net, sets[i][k], where + "[" + std::to_string(k) + "]");
                if (std::find(set.begin(), set.end(), idx) == set.end()) set.push_back(idx);
            }
            ex.sets.push_back(std::move(set));
        }
        inst.wiretap = std::move(ex);
    }
    net.validate();
    return inst;
}

// ---------------------------------------------------------------------------
// Cuts

std::vector<std::size_t> Cut::edges() const {
    std::vector<std::size_t> out(forward);
    out.insert(out.end(), backward.begin(), backward.end());
    return out;
}

std::optional<std::size_t> Cut::row_of(std::size_t edge) const {
    if (auto it = std::find(forward.begin(), forward.end(), edge); it != forward.end())
        return static_cast<std::size_t>(it - forward.begin());
    if (auto it = std::find(backward.begin(), backward.end(), edge); it != backward.end())
        return forward.size() + static_cast<std::size_t>(it - backward.begin());
    return std::nullopt;
}

bool Cut::crosses_unbounded(const Network& net) const {
    auto unb = [&](std::size_t e) { return net.edges()[e].unbounded; };
    return std::any_of(forward.begin(), forward.end(), unb) || std::any_of(backward.begin(), backward.end(), unb);
}

PatternMatrix connectivity_matrix(const Network& net, const std::vector<bool>& source_side,
                                  std::span<const std::size_t> forward, std::span<const std::size_t> backward) {
    const auto& edges = net.edges();
    PatternMatrix c(forward.size(), backward.size());
    for (std::size_t i = 0; i < forward.size(); ++i) c.labels[i] = edges[forward[i]].id;
    for (std::size_t j = 0; j < backward.size(); ++j) {
        std::vector<bool> seen(net.nodes().size(), false);
        std::deque<std::size_t> queue{edges[backward[j]].head};
        seen[queue.front()] = true;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (const auto& e : edges) {
                if (e.tail != v || !source_side[e.head] || seen[e.head]) continue;
                seen[e.head] = true;
                queue.push_back(e.head);
            }
        }
        for (std::size_t i = 0; i < forward.size(); ++i) c.set(i, j, seen[edges[forward[i]].tail]);
    }
    return c;
}

Cut make_cut(const Network& net, const std::vector<bool>& source_side) {
    if (source_side.size() != net.nodes().size()) throw Error(ErrorCode::ValidationError, "cut size mismatch");
    if (!source_side[net.source()]) throw Error(ErrorCode::ValidationError, "cut must contain the source");
    if (source_side[net.sink()]) throw Error(ErrorCode::ValidationError, "cut must not contain the sink");
    Cut cut;
    cut.source_side = source_side;
    std::uint64_t bit = 0;
    for (std::size_t v = 0; v < net.nodes().size(); ++v) {
        if (v == net.source() || v == net.sink()) continue;
        if (source_side[v] && bit < 64) cut.mask |= std::uint64_t{1} << bit;
        ++bit;
    }
    const auto& edges = net.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const bool t = source_side[edges[e].tail], h = source_side[edges[e].head];
        if (t && !h) cut.forward.push_back(e);
        if (!t && h) cut.backward.push_back(e);
    }
    cut.connectivity = connectivity_matrix(net, source_side, cut.forward, cut.backward);
    return cut;
}

Cut make_cut(const Network& net, std::span<const std::string> source_side_ids) {
    std::vector<bool> side(net.nodes().size(), false);
    for (const auto& id : source_side_ids) {
        auto idx = net.node_index(id);
        if (!idx) throw Error(ErrorCode::ValidationError, "cut names undeclared node '" + id + "'");
        side[*idx] = true;
    }
    return make_cut(net, side);
}

std::vector<Cut> enumerate_cuts(const Network& net, std::size_t node_cap) {
    net.validate();
    const std::size_t n = net.nodes().size();
    if (n > node_cap || n > 62)
        throw Error(ErrorCode::TooManyNodes,
                    std::to_string(n) + " nodes exceed the enumeration cap of " + std::to_string(node_cap));
    std::vector<std::size_t> inner;
    for (std::size_t v = 0; v < n; ++v)
        if (v != net.source() && v != net.sink()) inner.push_back(v);
    std::vector<Cut> cuts;
    const std::uint64_t count = std::uint64_t{1} << inner.size();
    cuts.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<bool> side(n, false);
        side[net.source()] = true;
        for (std::size_t b = 0; b < inner.size(); ++b)
            if (mask >> b & 1) side[inner[b]] = true;
        cuts.push_back(make_cut(net, side));
    }
    return cuts;
}

Cut canonical_cut(const Network& net) {
    net.validate();
    std::vector<bool> side(net.nodes().size(), true);
    side[net.sink()] = false;
    return make_cut(net, side);
}

// ---------------------------------------------------------------------------
// Upper-bounding network

namespace {

std::string fresh_id(const std::set<std::string>& taken, std::string base) {
    while (taken.count(base)) base += '\'';
    return base;
}

}  // namespace

Instance build_upper_bounding_network(const Network& net, const WiretapModel& model, const Cut& cut) {
    const auto& edges = net.edges();
    const auto& nodes = net.nodes();

    // Original node -> relay node in the new network.
    std::map<std::size_t, std::size_t> relay;
    std::vector<std::size_t> relay_order;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        const bool is_tail = std::any_of(cut.forward.begin(), cut.forward.end(),
                                         [&](std::size_t e) { return edges[e].tail == v; });
        const bool is_head = std::any_of(cut.backward.begin(), cut.backward.end(),
                                         [&](std::size_t e) { return edges[e].head == v; });
        if (is_tail || is_head) relay_order.push_back(v);
    }

    Instance out;
    out.generated = true;
    Network& g = out.network;
    std::set<std::string> node_ids{nodes[net.source()], nodes[net.sink()]};
    const auto s = g.add_node(nodes[net.source()], true);
    for (auto v : relay_order) {
        auto id = fresh_id(node_ids, nodes[v] + "'");
        node_ids.insert(id);
        relay[v] = g.add_node(id, false);
    }
    const auto d = g.add_node(nodes[net.sink()], true);
    g.set_terminals(s, d);

    std::set<std::string> edge_ids;
    for (const auto& e : edges) edge_ids.insert(e.id);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (auto r = cut.row_of(e)) {
            if (*r < cut.x())
                g.add_edge(edges[e].id, relay.at(edges[e].tail), d, edges[e].unbounded);
            else
                g.add_edge(edges[e].id, d, relay.at(edges[e].head), edges[e].unbounded);
        }
    }
    auto link = [&](std::size_t from, std::size_t to) {
        auto id = fresh_id(edge_ids, "inf(" + g.nodes()[from] + "," + g.nodes()[to] + ")");
        edge_ids.insert(id);
        g.add_edge(id, from, to, true);
    };
    std::vector<std::size_t> tails;
    for (auto e : cut.forward)
        if (std::find(tails.begin(), tails.end(), edges[e].tail) == tails.end()) tails.push_back(edges[e].tail);
    for (auto t : tails) link(s, relay.at(t));

    // Backward head u feeds forward tail v iff some backward edge into u has
    // a 1 against some forward edge out of v; reachability inside the source
    // side is transitive, so relay-to-relay links reproduce the matrix.
    std::set<std::pair<std::size_t, std::size_t>> linked;
    for (std::size_t j = 0; j < cut.y(); ++j)
        for (std::size_t i = 0; i < cut.x(); ++i) {
            if (!cut.connectivity(i, j)) continue;
            const auto u = edges[cut.backward[j]].head, v = edges[cut.forward[i]].tail;
            if (u == v || !linked.insert({u, v}).second) continue;
            link(relay.at(u), relay.at(v));
        }

    if (std::holds_alternative<Explicit>(model)) {
        Explicit restricted;
        for (const auto& set : restrict_wiretap_sets(net, model, cut)) {
            std::vector<std::size_t> mapped;
            for (auto e : set) mapped.push_back(*g.edge_index(edges[e].id));
            restricted.sets.push_back(std::move(mapped));
        }
        out.wiretap = std::move(restricted);
    } else {
        out.wiretap = model;
    }
    return out;
}

std::vector<std::vector<std::size_t>> restrict_wiretap_sets(const Network& net, const WiretapModel& model,
                                                            const Cut& cut) {
    std::vector<std::size_t> tappable;
    for (auto e : cut.edges())
        if (!net.edges()[e].unbounded) tappable.push_back(e);

    std::vector<std::vector<std::size_t>> out;
    if (const auto* u = std::get_if<Uniform>(&model)) {
        const std::size_t n = tappable.size();
        const std::size_t zmax = std::min(u->z, n);
        // Subsets by size, then lexicographically in row order.
        for (std::size_t k = 1; k <= zmax; ++k) {
            std::vector<std::size_t> pick(k);
            for (std::size_t i = 0; i < k; ++i) pick[i] = i;
            while (true) {
                std::vector<std::size_t> set;
                for (auto i : pick) set.push_back(tappable[i]);
                out.push_back(std::move(set));
                if (out.size() > 1'000'000) throw Error(ErrorCode::TooLarge, "more than 10^6 wiretap sets");
                std::size_t i = k;
                while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
                if (i == 0) break;
                ++pick[i - 1];
                for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
        return out;
    }
    std::set<std::vector<std::size_t>> seen;
    for (const auto& set : std::get<Explicit>(model).sets) {
        std::vector<std::size_t> inter;
        for (auto e : tappable)
            if (std::find(set.begin(), set.end(), e) != set.end()) inter.push_back(e);
        if (inter.empty() || !seen.insert(inter).second) continue;
        out.push_back(std::move(inter));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

json cut_to_json(const Network& net, const Cut& cut) {
    json side = json::array(), fwd = json::array(), bwd = json::array(), conn = json::array();
    for (std::size_t v = 0; v < net.nodes().size(); ++v)
        if (cut.source_side[v]) side.push_back(net.nodes()[v]);
    for (auto e : cut.forward) fwd.push_back(net.edges()[e].id);
    for (auto e : cut.backward) bwd.push_back(net.edges()[e].id);
    for (std::size_t i = 0; i < cut.x(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < cut.y(); ++j) row.push_back(cut.connectivity(i, j) ? 1 : 0);
        conn.push_back(std::move(row));
    }
    return {{"mask", cut.mask}, {"source_side", side}, {"forward", fwd}, {"backward", bwd}, {"connectivity", conn}};
}

json network_to_json(const Network& net, const WiretapModel& model, std::span<const Cut> derived_cuts) {
    json doc;
    doc["nodes"] = net.nodes();
    json edges = json::array();
    for (const auto& e : net.edges()) {
        json je = {{"id", e.id}, {"tail", net.nodes()[e.tail]}, {"head", net.nodes()[e.head]}};
        if (e.unbounded)
            je["unbounded"] = true;
        else
            je["capacity"] = 1;
        edges.push_back(std::move(je));
    }
    doc["edges"] = std::move(edges);
    doc["source"] = net.nodes()[net.source()];
    doc["sink"] = net.nodes()[net.sink()];
    json rnd = json::array();
    for (std::size_t v = 0; v < net.nodes().size(); ++v)
        if (net.can_generate_randomness(v)) rnd.push_back(net.nodes()[v]);
    doc["randomness"] = std::move(rnd);
    if (const auto* u = std::get_if<Uniform>(&model)) {
        doc["wiretap"] = {{"z", u->z}};
    } else {
        json sets = json::array();
        for (const auto& set : std::get<Explicit>(model).sets) {
            json js = json::array();
            for (auto e : set) js.push_back(net.edges()[e].id);
            sets.push_back(std::move(js));
        }
        doc["wiretap"] = {{"sets", std::move(sets)}};
    }
    if (!derived_cuts.empty()) {
        json cuts = json::array();
        for (const auto& c : derived_cuts) cuts.push_back(cut_to_json(net, c));
        doc["derived"] = {{"cuts", std::move(cuts)}};
    }
    return doc;
}

}  // namespace revcut::net
