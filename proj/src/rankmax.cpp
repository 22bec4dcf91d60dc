#include "revcut/rankmax.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "revcut/error.hpp"

namespace revcut::rankmax {

namespace {

bool augment(const PatternMatrix& p, std::span<const std::size_t> rows, std::size_t r, std::vector<bool>& visited,
             std::vector<std::optional<std::size_t>>& row_of_col, std::vector<std::optional<std::size_t>>& col_of_row) {
    for (std::size_t c = 0; c < p.cols(); ++c) {
        if (!p(rows[r], c) || visited[c]) continue;
        visited[c] = true;
        if (!row_of_col[c] || augment(p, rows, *row_of_col[c], visited, row_of_col, col_of_row)) {
            row_of_col[c] = r;
            col_of_row[r] = c;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> all_rows(const PatternMatrix& p) {
    std::vector<std::size_t> rows(p.rows());
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

// Odometer over values for `positions`, last position varying fastest.
bool advance(std::vector<gf::Elem>& digits, std::uint32_t q) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < q) return true;
        digits[i] = 0;
    }
    return false;
}

}  // namespace

Matching maximum_matching(const PatternMatrix& p, std::span<const std::size_t> rows) {
    Matching m;
    m.col_of_row.assign(rows.size(), std::nullopt);
    std::vector<std::optional<std::size_t>> row_of_col(p.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<bool> visited(p.cols(), false);
        if (augment(p, rows, r, visited, row_of_col, m.col_of_row)) ++m.size;
    }
    return m;
}

std::size_t term_rank(const PatternMatrix& p, std::span<const std::size_t> rows) {
    return maximum_matching(p, rows).size;
}

std::size_t term_rank(const PatternMatrix& p) { return term_rank(p, all_rows(p)); }

std::uint64_t field_threshold(const PatternMatrix& p, const SubmatrixCollection& coll) {
    return static_cast<std::uint64_t>(coll.size()) * p.rows() * p.cols();
}

void validate_collection(const PatternMatrix& p, const SubmatrixCollection& coll) {
    for (std::size_t i = 0; i < coll.size(); ++i) {
        if (coll[i].empty()) throw Error(ErrorCode::ValidationError, "subset " + std::to_string(i) + " is empty");
        for (auto r : coll[i])
            if (r >= p.rows())
                throw Error(ErrorCode::ValidationError, "subset " + std::to_string(i) + " names row " +
                                                            std::to_string(r) + " of a " +
                                                            std::to_string(p.rows()) + "-row pattern");
    }
}

gf::Matrix sample_assignment(const PatternMatrix& p, const gf::Field& field, Rng& rng) {
    gf::Matrix m(field, p.rows(), p.cols());
    for (std::size_t r = 0; r < p.rows(); ++r)
        for (std::size_t c = 0; c < p.cols(); ++c)
            if (p(r, c)) m.set(r, c, field.random(rng));
    return m;
}

std::vector<std::size_t> subset_ranks(const gf::Matrix& m, const SubmatrixCollection& coll) {
    std::vector<std::size_t> out;
    out.reserve(coll.size());
    for (const auto& rows : coll) out.push_back(gf::rank(m.select_rows(rows)));
    return out;
}

bool is_certified(const gf::Matrix& m, const PatternMatrix& p, const SubmatrixCollection& coll) {
    for (const auto& rows : coll)
        if (gf::rank(m.select_rows(rows)) != term_rank(p, rows)) return false;
    return true;
}

RankMaxMatrix rank_maximize(const PatternMatrix& p, const SubmatrixCollection& coll, const gf::Field& field,
                            Rng& rng, std::size_t retry_cap) {
    validate_collection(p, coll);
    std::vector<std::size_t> targets;
    for (const auto& rows : coll) targets.push_back(term_rank(p, rows));

    RankMaxMatrix out{gf::Matrix(field, p.rows(), p.cols()), p, coll, {}, 0,
                      field.modulus() <= field_threshold(p, coll)};
    std::vector<std::size_t> ranks;
    for (std::size_t attempt = 1; attempt <= std::max<std::size_t>(retry_cap, 1); ++attempt) {
        auto m = sample_assignment(p, field, rng);
        ranks = subset_ranks(m, coll);
        if (ranks == targets) {
            out.matrix = std::move(m);
            out.ranks = std::move(ranks);
            out.attempts = attempt;
            return out;
        }
    }
    std::ostringstream msg;
    msg << "no certified draw in " << retry_cap << " attempts at q=" << field.modulus() << " (threshold "
        << field_threshold(p, coll) << "); last draw:";
    for (std::size_t i = 0; i < coll.size(); ++i)
        if (ranks[i] != targets[i]) msg << " subset " << i << " rank " << ranks[i] << "/" << targets[i] << ";";
    throw Error(ErrorCode::RetriesExhausted, msg.str());
}

RankMaxMatrix rank_maximize_exhaustive(const PatternMatrix& p, const SubmatrixCollection& coll,
                                       const gf::Field& field, std::uint64_t cap) {
    validate_collection(p, coll);
    const std::uint32_t q = field.modulus();
    std::vector<std::pair<std::size_t, std::size_t>> positions;
    for (std::size_t r = 0; r < p.rows(); ++r)
        for (std::size_t c = 0; c < p.cols(); ++c)
            if (p(r, c)) positions.emplace_back(r, c);
    if (checked_power(q, positions.size(), cap) > cap)
        throw Error(ErrorCode::TooLarge, std::to_string(q) + "^" + std::to_string(positions.size()) +
                                             " assignments exceed the cap of " + std::to_string(cap));

    // Per-subset maxima, each from a search over that subset's own entries.
    std::vector<std::size_t> maxima;
    for (const auto& rows : coll) {
        auto sub = p.select_rows(rows);
        std::vector<std::pair<std::size_t, std::size_t>> pos;
        for (std::size_t r = 0; r < sub.rows(); ++r)
            for (std::size_t c = 0; c < sub.cols(); ++c)
                if (sub(r, c)) pos.emplace_back(r, c);
        std::vector<gf::Elem> digits(pos.size(), 0);
        std::size_t best = 0;
        const std::size_t ceiling = std::min(sub.rows(), sub.cols());
        do {
            gf::Matrix m(field, sub.rows(), sub.cols());
            for (std::size_t k = 0; k < pos.size(); ++k) m.set(pos[k].first, pos[k].second, digits[k]);
            best = std::max(best, gf::rank(m));
        } while (best < ceiling && advance(digits, q));
        maxima.push_back(best);
    }

    std::vector<gf::Elem> digits(positions.size(), 0);
    do {
        gf::Matrix m(field, p.rows(), p.cols());
        for (std::size_t k = 0; k < positions.size(); ++k) m.set(positions[k].first, positions[k].second, digits[k]);
        auto ranks = subset_ranks(m, coll);
        if (ranks == maxima) return {std::move(m), p, coll, std::move(ranks), 1, q <= field_threshold(p, coll)};
    } while (advance(digits, q));
    throw Error(ErrorCode::NoSimultaneousMaximizer,
                "no single assignment over F_" + std::to_string(q) + " maximizes every subset at once");
}

}  // namespace revcut::rankmax
