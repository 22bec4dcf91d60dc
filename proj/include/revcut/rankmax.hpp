#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "revcut/gf.hpp"
#include "revcut/pattern.hpp"
#include "revcut/rng.hpp"

namespace revcut::rankmax {

/// Row-index subsets; each names the submatrix made of those rows and all columns.
using SubmatrixCollection = std::vector<std::vector<std::size_t>>;

struct Matching {
    std::size_t size = 0;
    /// For each selected row (in the order given), its matched column.
    std::vector<std::optional<std::size_t>> col_of_row;
};

/// Maximum bipartite matching between the selected rows and all columns over
/// the 1-entries, found by augmenting paths in row order.
Matching maximum_matching(const PatternMatrix& p, std::span<const std::size_t> rows);

std::size_t term_rank(const PatternMatrix& p, std::span<const std::size_t> rows);
std::size_t term_rank(const PatternMatrix& p);

struct RankMaxMatrix {
    gf::Matrix matrix;
    PatternMatrix pattern;
    SubmatrixCollection collection;
    std::vector<std::size_t> ranks;  // achieved rank per subset
    std::size_t attempts = 0;
    bool below_threshold = false;  // q <= |collection| * rows * cols
};

inline constexpr std::size_t default_retry_cap = 64;
inline constexpr std::uint64_t default_enum_cap = 10'000'000;

/// |collection| * a * b; fields larger than this make a certified draw likely.
std::uint64_t field_threshold(const PatternMatrix& p, const SubmatrixCollection& coll);

/// Throws ValidationError on empty subsets or out-of-range rows.
void validate_collection(const PatternMatrix& p, const SubmatrixCollection& coll);

/// One draw: i.i.d. uniform F_q values at the 1-positions, zero elsewhere.
gf::Matrix sample_assignment(const PatternMatrix& p, const gf::Field& field, Rng& rng);

std::vector<std::size_t> subset_ranks(const gf::Matrix& m, const SubmatrixCollection& coll);

/// True iff every subset of `m` reaches its term rank.
bool is_certified(const gf::Matrix& m, const PatternMatrix& p, const SubmatrixCollection& coll);

/// Redraws until every subset reaches its term rank. Throws RetriesExhausted
/// with the per-subset shortfall of the last draw.
RankMaxMatrix rank_maximize(const PatternMatrix& p, const SubmatrixCollection& coll, const gf::Field& field,
                            Rng& rng, std::size_t retry_cap = default_retry_cap);

/// Brute-force counterpart. Each subset's maximum rank is found by its own
/// exhaustive search; then assignments are scanned in lexicographic order
/// for one that hits every maximum at once. Throws TooLarge when
/// q^(ones) > cap and NoSimultaneousMaximizer when the scan fails.
RankMaxMatrix rank_maximize_exhaustive(const PatternMatrix& p, const SubmatrixCollection& coll,
                                       const gf::Field& field, std::uint64_t cap = default_enum_cap);

}  // namespace revcut::rankmax
