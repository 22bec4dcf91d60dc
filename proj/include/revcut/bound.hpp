#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revcut/gf.hpp"
#include "revcut/network.hpp"
#include "revcut/pattern.hpp"
#include "revcut/rankmax.hpp"
#include "revcut/rng.hpp"

namespace revcut::bound {

// ---------------------------------------------------------------------------
// Block-labeling partition certificate

enum class BlockLabel { CounterDiagonal, Zero, ZeroStar, NonZero, Arbitrary };

const char* to_string(BlockLabel label) noexcept;

/// Half-open rectangle in the permuted coordinates of U_A.
struct Block {
    BlockLabel label;
    std::size_t row_begin, row_end;
    std::size_t col_begin, col_end;
};

struct PartitionCertificate {
    std::size_t rank = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_perm;  // permuted position -> row of U_A
    std::vector<std::size_t> col_perm;  // permuted position -> column (signal index)
    std::vector<Block> blocks;
    std::size_t t = 0;                   // |A2|: the first t permuted rows
    std::vector<std::size_t> a2;         // rows of U_A
    std::vector<std::size_t> a_forward;  // A1 rows that are forward edges
    std::vector<std::size_t> a_backward; // A1 rows that are backward edges
    std::vector<std::size_t> f_a1;       // signals reaching A1, sorted
    bool verified = false;
};

/// Runs the recursive block-labeling procedure on U_A with r equal to its
/// term rank. Row kinds come from `ua.backward`. Throws MaximalityViolated
/// if a block that must be zero is not (r was not the maximum rank).
PartitionCertificate label_partition(const PatternMatrix& ua, std::size_t r);

/// Re-checks a certificate against U_A: exact tiling, literal labels, zero*
/// blocks zero and |f_A1| + |A2| == rank.
bool verify_certificate(const PatternMatrix& ua, const PartitionCertificate& cert);

struct EntropyCheck {
    std::size_t conditional_entropy = 0;  // H(f_AF | f_AB) in units of log q
    std::int64_t budget = 0;              // rank - |A_B| - |A2|
    bool holds = false;
};

/// Evaluates H(f_AF | f_AB) for uniform i.i.d. backward keys as a rank
/// difference of identity-row selections, and compares it to the budget.
EntropyCheck check_conditional_entropy(const PatternMatrix& ua, const PartitionCertificate& cert, const gf::Field& field);

// ---------------------------------------------------------------------------
// Cut-set bound

/// [C_{b->f}; I_y], rows labelled by edge id; identity rows flagged backward.
PatternMatrix stacked_pattern(const net::Network& net, const net::Cut& cut);

/// Backward signal indices observable through edge `e`. Throws NotACutEdge.
std::vector<std::size_t> edge_signals(const net::Cut& cut, std::size_t edge);
std::vector<std::size_t> edge_signals(const net::Cut& cut, std::span<const std::size_t> edges);

struct SetRecord {
    std::vector<std::size_t> edges;  // network edge indices
    std::vector<std::size_t> rows;   // rows of the stacked pattern
    std::size_t rank = 0;            // rank of the rank-maximized submatrix
    std::int64_t slack = 0;          // rank - |A|
    std::optional<PartitionCertificate> certificate;
};

struct CutBoundReport {
    net::Cut cut;
    bool finite = true;  // false when an unbounded edge crosses the cut
    std::uint32_t q = 0;
    std::vector<SetRecord> sets;
    std::int64_t bound_raw = 0;
    std::size_t bound = 0;  // clamped at zero
    std::optional<std::size_t> k_b;
    std::vector<std::size_t> k_b_rows;
    std::optional<rankmax::RankMaxMatrix> cbar;

    std::size_t x() const noexcept { return cut.x(); }
    std::size_t y() const noexcept { return cut.y(); }
};

/// Collection used to draw C-bar: one subset per wiretap set, plus the
/// backward rows so the identity part stays invertible.
rankmax::SubmatrixCollection cbar_collection(const net::Cut& cut, std::span<const std::vector<std::size_t>> rows);

/// Smallest prime above both the rank-maximization threshold |U|ab and the
/// code threshold |A| k_f (x+y).
std::uint32_t default_field_size(const net::Cut& cut, std::span<const std::vector<std::size_t>> rows,
                                 std::size_t k_f);

/// Cut-set bound for one cut: x + min over sets of (rank - |A|).
/// `sets` are edge-index lists as returned by restrict_wiretap_sets.
CutBoundReport cut_bound(const net::Network& net, const net::Cut& cut,
                         std::span<const std::vector<std::size_t>> sets, std::optional<std::uint32_t> q, Rng& rng);

/// Uniform-model form: k_b is the minimum F_q rank over all z-row
/// submatrices of C-bar; the bound is x + k_b - z.
CutBoundReport uniform_bound(const net::Network& net, const net::Cut& cut, std::size_t z,
                             std::optional<std::uint32_t> q, Rng& rng);

struct BestBound {
    std::size_t value = 0;
    std::int64_t raw = 0;
    std::size_t argmin = 0;  // index into `cuts`
    std::vector<CutBoundReport> cuts;
};

/// Minimum over all enumerated cuts; ties go to the lowest cut mask.
BestBound best_bound(const net::Network& net, const net::WiretapModel& model, std::optional<std::uint32_t> q,
                     const Rng& rng, std::size_t node_cap = net::default_node_cap);

nlohmann::json certificate_to_json(const PatternMatrix& ua, const PartitionCertificate& cert);
nlohmann::json report_to_json(const net::Network& net, const CutBoundReport& report);
nlohmann::json best_bound_to_json(const net::Network& net, const BestBound& best);

}  // namespace revcut::bound
