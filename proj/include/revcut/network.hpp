#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "revcut/pattern.hpp"

namespace revcut::net {

struct Edge {
    std::string id;
    std::size_t tail;
    std::size_t head;
    /// Secure link of unlimited capacity; only appears in upper-bounding networks.
    bool unbounded = false;
};

/// Directed multigraph with unit-capacity edges and distinguished terminals.
/// Nodes and edges are indexed in declaration order.
class Network {
public:
    std::size_t add_node(std::string id, bool can_generate_randomness = true);
    std::size_t add_edge(std::string id, std::size_t tail, std::size_t head, bool unbounded = false);
    void set_terminals(std::size_t source, std::size_t sink);

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t source() const noexcept { return source_; }
    std::size_t sink() const noexcept { return sink_; }
    bool can_generate_randomness(std::size_t node) const { return randomness_.at(node); }
    void set_randomness(std::size_t node, bool flag) { randomness_.at(node) = flag; }

    std::optional<std::size_t> node_index(std::string_view id) const;
    std::optional<std::size_t> edge_index(std::string_view id) const;

    /// Throws ValidationError unless source and sink are set and distinct.
    void validate() const;

private:
    std::vector<std::string> nodes_;
    std::vector<bool> randomness_;
    std::vector<Edge> edges_;
    std::size_t source_ = SIZE_MAX;
    std::size_t sink_ = SIZE_MAX;
};

struct Uniform {
    std::size_t z = 0;
};

struct Explicit {
    std::vector<std::vector<std::size_t>> sets;  // edge indices
};

using WiretapModel = std::variant<Uniform, Explicit>;

struct Instance {
    Network network;
    WiretapModel wiretap;
    bool generated = false;  // document carried a `derived` block
};

/// Parses the JSON network document. Throws ParseError (syntax, unknown
/// references) or ValidationError (terminals, capacities).
Instance parse_network(std::string_view text);

/// A source-side vertex set with its crossing edges. Row i of
/// `connectivity` is forward edge i, column j is backward edge j.
struct Cut {
    std::uint64_t mask = 0;
    std::vector<bool> source_side;
    std::vector<std::size_t> forward;
    std::vector<std::size_t> backward;
    PatternMatrix connectivity;

    std::size_t x() const noexcept { return forward.size(); }
    std::size_t y() const noexcept { return backward.size(); }
    /// Cut edges in row order: forward edges, then backward edges.
    std::vector<std::size_t> edges() const;
    /// Position of an edge in `edges()`, if it crosses the cut.
    std::optional<std::size_t> row_of(std::size_t edge) const;
    bool crosses_unbounded(const Network& net) const;
};

/// Directed path (zero length allowed) from head of backward edge j to tail
/// of forward edge i that stays inside the source side.
PatternMatrix connectivity_matrix(const Network& net, const std::vector<bool>& source_side,
                                  std::span<const std::size_t> forward, std::span<const std::size_t> backward);

Cut make_cut(const Network& net, const std::vector<bool>& source_side);
Cut make_cut(const Network& net, std::span<const std::string> source_side_ids);

inline constexpr std::size_t default_node_cap = 20;

/// All 2^(n-2) cuts, ordered by the membership bitmask over non-terminal
/// nodes (bit i = i-th non-terminal node in declaration order).
std::vector<Cut> enumerate_cuts(const Network& net, std::size_t node_cap = default_node_cap);

/// The cut whose source side is every node except the sink.
Cut canonical_cut(const Network& net);

/// Upper-bounding network for a cut: downstream nodes merged into the sink,
/// one relay node `<id>'` per forward tail or backward head, unbounded links
/// from the source to every forward tail and from backward heads to the
/// forward tails they reach. Only source and sink generate randomness.
Instance build_upper_bounding_network(const Network& net, const WiretapModel& model, const Cut& cut);

/// Wiretap sets restricted to the cut edges, each sorted in row order.
/// Unbounded edges are never tapped and empty sets are dropped.
std::vector<std::vector<std::size_t>> restrict_wiretap_sets(const Network& net, const WiretapModel& model,
                                                            const Cut& cut);

nlohmann::json cut_to_json(const Network& net, const Cut& cut);
/// Document in the input schema; a nonempty `derived_cuts` adds the
/// `derived` block, which also marks the document as generated.
nlohmann::json network_to_json(const Network& net, const WiretapModel& model,
                               std::span<const Cut> derived_cuts = {});

}  // namespace revcut::net
