#include "revcut/bound.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "revcut/error.hpp"

namespace revcut::bound {

using nlohmann::json;

const char* to_string(BlockLabel label) noexcept {
    switch (label) {
        case BlockLabel::CounterDiagonal: return "counter-diagonal";
        case BlockLabel::Zero: return "zero";
        case BlockLabel::ZeroStar: return "zero*";
        case BlockLabel::NonZero: return "non-zero";
        case BlockLabel::Arbitrary: return "arbitrary";
    }
    return "?";
}

namespace {

// U_A viewed through the current row/column permutations.
struct Permuted {
    const PatternMatrix& ua;
    std::vector<std::size_t>& rp;
    std::vector<std::size_t>& cp;

    bool operator()(std::size_t i, std::size_t j) const { return ua(rp[i], cp[j]); }

    bool block_zero(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = c0; j < c1; ++j)
                if ((*this)(i, j)) return false;
        return true;
    }
    bool column_zero(std::size_t j, std::size_t r0, std::size_t r1) const { return block_zero(r0, r1, j, j + 1); }
};

std::vector<std::size_t> support_union(const PatternMatrix& ua, std::span<const std::size_t> rows) {
    std::set<std::size_t> out;
    for (auto r : rows)
        for (std::size_t c = 0; c < ua.cols(); ++c)
            if (ua(r, c)) out.insert(c);
    return {out.begin(), out.end()};
}

void push_block(std::vector<Block>& blocks, BlockLabel label, std::size_t r0, std::size_t r1, std::size_t c0,
                std::size_t c1) {
    if (r0 < r1 && c0 < c1) blocks.push_back({label, r0, r1, c0, c1});
}

void finish(const PatternMatrix& ua, PartitionCertificate& cert) {
    for (std::size_t i = 0; i < cert.rows; ++i) {
        const auto row = cert.row_perm[i];
        if (i < cert.t)
            cert.a2.push_back(row);
        else if (ua.backward.empty() || !ua.backward[row])
            cert.a_forward.push_back(row);
        else
            cert.a_backward.push_back(row);
    }
    std::vector<std::size_t> a1(cert.a_forward);
    a1.insert(a1.end(), cert.a_backward.begin(), cert.a_backward.end());
    cert.f_a1 = support_union(ua, a1);
}

}  // namespace

PartitionCertificate label_partition(const PatternMatrix& ua, std::size_t r) {
    PartitionCertificate cert;
    cert.rank = r;
    cert.rows = ua.rows();
    cert.cols = ua.cols();
    cert.row_perm.resize(ua.rows());
    cert.col_perm.resize(ua.cols());
    std::iota(cert.row_perm.begin(), cert.row_perm.end(), 0);
    std::iota(cert.col_perm.begin(), cert.col_perm.end(), 0);
    Permuted g{ua, cert.row_perm, cert.col_perm};

    if (r == 0) {
        if (!g.block_zero(0, ua.rows(), 0, ua.cols()))
            throw Error(ErrorCode::MaximalityViolated, "rank 0 claimed for a nonzero pattern");
        push_block(cert.blocks, BlockLabel::Zero, 0, ua.rows(), 0, ua.cols());
        cert.t = 0;
        finish(ua, cert);
        cert.verified = verify_certificate(ua, cert);
        return cert;
    }

    // r independent 1s, moved onto the counter-diagonal of the top-left r x r block.
    std::vector<std::size_t> all(ua.rows());
    std::iota(all.begin(), all.end(), 0);
    const auto matching = rankmax::maximum_matching(ua, all);
    if (matching.size < r)
        throw Error(ErrorCode::MaximalityViolated, "rank " + std::to_string(r) + " exceeds the term rank " +
                                                       std::to_string(matching.size));
    std::vector<std::size_t> mrows, mcols;
    for (std::size_t i = 0; i < ua.rows() && mrows.size() < r; ++i)
        if (matching.col_of_row[i]) {
            mrows.push_back(i);
            mcols.push_back(*matching.col_of_row[i]);
        }
    {
        std::vector<std::size_t> rp(r), cp(mcols);
        for (std::size_t i = 0; i < r; ++i) rp[r - 1 - i] = mrows[i];
        for (std::size_t i = 0; i < ua.rows(); ++i)
            if (std::find(mrows.begin(), mrows.end(), i) == mrows.end()) rp.push_back(i);
        for (std::size_t j = 0; j < ua.cols(); ++j)
            if (std::find(mcols.begin(), mcols.end(), j) == mcols.end()) cp.push_back(j);
        cert.row_perm = std::move(rp);
        cert.col_perm = std::move(cp);
    }

    const std::size_t height = ua.rows(), width = ua.cols();
    if (!g.block_zero(r, height, r, width))
        throw Error(ErrorCode::MaximalityViolated, "lower-right block is nonzero; rank is not maximal");
    push_block(cert.blocks, BlockLabel::Zero, r, height, r, width);

    // Window: rows [0, m), columns [offset, offset + k) on the left and the
    // shared right strip [r, width); the top-left k x k block of the window
    // carries 1s on its counter-diagonal.
    std::size_t m = height, offset = 0, k = r;
    while (true) {
        const std::size_t lo = offset, hi = offset + k;
        const bool ll_empty = m == k;
        std::vector<std::size_t> nonzero_cols, zero_cols;
        for (std::size_t j = lo; j < hi; ++j)
            (ll_empty || g.column_zero(j, k, m) ? zero_cols : nonzero_cols).push_back(j);

        if (nonzero_cols.empty()) {
            push_block(cert.blocks, BlockLabel::Zero, k, m, lo, hi);
            push_block(cert.blocks, BlockLabel::CounterDiagonal, 0, k, lo, hi);
            push_block(cert.blocks, BlockLabel::Arbitrary, 0, k, r, width);
            cert.t = k;
            break;
        }
        if (zero_cols.empty()) {
            push_block(cert.blocks, BlockLabel::NonZero, k, m, lo, hi);
            push_block(cert.blocks, BlockLabel::CounterDiagonal, 0, k, lo, hi);
            if (!g.block_zero(0, k, r, width))
                throw Error(ErrorCode::MaximalityViolated, "zero* block is nonzero; rank is not maximal");
            push_block(cert.blocks, BlockLabel::ZeroStar, 0, k, r, width);
            cert.t = 0;
            break;
        }

        // Non-zero columns of the lower-left block to the left, zero ones to
        // the right; rows of the top k follow so the counter-diagonal survives.
        const std::size_t u = nonzero_cols.size(), v = zero_cols.size();
        std::vector<std::size_t> order(nonzero_cols);
        order.insert(order.end(), zero_cols.begin(), zero_cols.end());
        std::vector<std::size_t> new_cp(cert.col_perm), new_rp(cert.row_perm);
        for (std::size_t c_new = 0; c_new < k; ++c_new) {
            const std::size_t c_old = order[c_new] - lo;
            new_cp[lo + c_new] = cert.col_perm[lo + c_old];
            new_rp[k - 1 - c_new] = cert.row_perm[k - 1 - c_old];
        }
        cert.col_perm = std::move(new_cp);
        cert.row_perm = std::move(new_rp);

        push_block(cert.blocks, BlockLabel::NonZero, k, m, lo, lo + u);
        push_block(cert.blocks, BlockLabel::Zero, k, m, lo + u, hi);
        push_block(cert.blocks, BlockLabel::CounterDiagonal, k - u, k, lo, lo + u);
        push_block(cert.blocks, BlockLabel::Arbitrary, 0, k - u, lo, lo + u);
        if (!g.block_zero(k - u, k, r, width))
            throw Error(ErrorCode::MaximalityViolated, "zero* block is nonzero; rank is not maximal");
        push_block(cert.blocks, BlockLabel::ZeroStar, k - u, k, r, width);

        m = k;
        offset += u;
        k = v;
    }

    finish(ua, cert);
    cert.verified = verify_certificate(ua, cert);
    return cert;
}

bool verify_certificate(const PatternMatrix& ua, const PartitionCertificate& cert) {
    if (cert.rows != ua.rows() || cert.cols != ua.cols()) return false;
    auto is_perm = [](std::vector<std::size_t> p, std::size_t n) {
        if (p.size() != n) return false;
        std::sort(p.begin(), p.end());
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] != i) return false;
        return true;
    };
    if (!is_perm(cert.row_perm, cert.rows) || !is_perm(cert.col_perm, cert.cols)) return false;
    auto at = [&](std::size_t i, std::size_t j) { return ua(cert.row_perm[i], cert.col_perm[j]); };

    std::vector<int> cover(cert.rows * cert.cols, 0);
    for (const auto& b : cert.blocks) {
        if (b.row_end > cert.rows || b.col_end > cert.cols || b.row_begin >= b.row_end || b.col_begin >= b.col_end)
            return false;
        for (std::size_t i = b.row_begin; i < b.row_end; ++i)
            for (std::size_t j = b.col_begin; j < b.col_end; ++j) ++cover[i * cert.cols + j];
        const std::size_t h = b.row_end - b.row_begin, w = b.col_end - b.col_begin;
        switch (b.label) {
            case BlockLabel::Zero:
            case BlockLabel::ZeroStar:
                for (std::size_t i = b.row_begin; i < b.row_end; ++i)
                    for (std::size_t j = b.col_begin; j < b.col_end; ++j)
                        if (at(i, j)) return false;
                break;
            case BlockLabel::CounterDiagonal:
                if (h != w) return false;
                for (std::size_t s = 0; s < h; ++s)
                    if (!at(b.row_begin + s, b.col_begin + h - 1 - s)) return false;
                break;
            case BlockLabel::NonZero:
                for (std::size_t j = b.col_begin; j < b.col_end; ++j) {
                    bool any = false;
                    for (std::size_t i = b.row_begin; i < b.row_end; ++i) any = any || at(i, j);
                    if (!any) return false;
                }
                break;
            case BlockLabel::Arbitrary: break;
        }
    }
    if (std::any_of(cover.begin(), cover.end(), [](int c) { return c != 1; })) return false;

    // The partition and the signal count, recomputed from the raw rows.
    if (cert.a2.size() != cert.t) return false;
    std::vector<std::size_t> a1;
    for (std::size_t i = cert.t; i < cert.rows; ++i) a1.push_back(cert.row_perm[i]);
    const auto f = support_union(ua, a1);
    if (f != cert.f_a1) return false;
    return f.size() + cert.t == cert.rank;
}

EntropyCheck check_conditional_entropy(const PatternMatrix& ua, const PartitionCertificate& cert, const gf::Field& field) {
    const auto f_fwd = support_union(ua, cert.a_forward);
    const auto f_bwd = support_union(ua, cert.a_backward);
    std::vector<std::size_t> both(f_fwd);
    both.insert(both.end(), f_bwd.begin(), f_bwd.end());
    std::sort(both.begin(), both.end());
    both.erase(std::unique(both.begin(), both.end()), both.end());

    const auto id = gf::Matrix::identity(field, ua.cols());
    EntropyCheck out;
    out.conditional_entropy = gf::rank(id.select_rows(both)) - gf::rank(id.select_rows(f_bwd));
    out.budget = static_cast<std::int64_t>(cert.rank) - static_cast<std::int64_t>(cert.a_backward.size()) -
                 static_cast<std::int64_t>(cert.a2.size());
    out.holds = static_cast<std::int64_t>(out.conditional_entropy) <= out.budget;
    return out;
}

// ---------------------------------------------------------------------------

PatternMatrix stacked_pattern(const net::Network& net, const net::Cut& cut) {
    PatternMatrix bottom = PatternMatrix::identity(cut.y());
    for (std::size_t j = 0; j < cut.y(); ++j) {
        bottom.labels[j] = net.edges()[cut.backward[j]].id;
        bottom.backward[j] = true;
    }
    PatternMatrix top = cut.connectivity;
    for (std::size_t i = 0; i < cut.x(); ++i) top.labels[i] = net.edges()[cut.forward[i]].id;
    return top.stack(bottom);
}

std::vector<std::size_t> edge_signals(const net::Cut& cut, std::size_t edge) {
    auto row = cut.row_of(edge);
    if (!row) throw Error(ErrorCode::NotACutEdge, "edge " + std::to_string(edge) + " does not cross the cut");
    if (*row >= cut.x()) return {*row - cut.x()};
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < cut.y(); ++j)
        if (cut.connectivity(*row, j)) out.push_back(j);
    return out;
}

std::vector<std::size_t> edge_signals(const net::Cut& cut, std::span<const std::size_t> edges) {
    std::set<std::size_t> out;
    for (auto e : edges)
        for (auto j : edge_signals(cut, e)) out.insert(j);
    return {out.begin(), out.end()};
}

rankmax::SubmatrixCollection cbar_collection(const net::Cut& cut, std::span<const std::vector<std::size_t>> rows) {
    rankmax::SubmatrixCollection coll(rows.begin(), rows.end());
    if (cut.y() > 0) {
        std::vector<std::size_t> bwd(cut.y());
        std::iota(bwd.begin(), bwd.end(), cut.x());
        if (std::find(coll.begin(), coll.end(), bwd) == coll.end()) coll.push_back(std::move(bwd));
    }
    return coll;
}

std::uint32_t default_field_size(const net::Cut& cut, std::span<const std::vector<std::size_t>> rows,
                                 std::size_t k_f) {
    const std::uint64_t a = cut.x() + cut.y(), b = cut.y();
    const std::uint64_t lemma = cbar_collection(cut, rows).size() * a * b;
    const std::uint64_t code = rows.size() * k_f * a;
    return gf::next_prime_above(std::max<std::uint64_t>({lemma, code, 1}));
}

namespace {

CutBoundReport evaluate(const net::Network& net, const net::Cut& cut, std::vector<std::vector<std::size_t>> set_edges,
                        std::vector<std::vector<std::size_t>> set_rows, std::optional<std::uint32_t> q, Rng& rng) {
    const auto pattern = stacked_pattern(net, cut);
    CutBoundReport rep;
    rep.cut = cut;

    std::size_t k_f = 0;
    std::vector<std::size_t> term(set_rows.size());
    for (std::size_t i = 0; i < set_rows.size(); ++i) {
        term[i] = rankmax::term_rank(pattern, set_rows[i]);
        k_f = std::max(k_f, set_rows[i].size() - term[i]);
    }
    rep.q = q ? *q : default_field_size(cut, set_rows, k_f);
    const gf::Field field(rep.q);
    rep.cbar = rankmax::rank_maximize(pattern, cbar_collection(cut, set_rows), field, rng);

    std::int64_t min_slack = 0;
    for (std::size_t i = 0; i < set_rows.size(); ++i) {
        SetRecord rec;
        rec.edges = std::move(set_edges[i]);
        rec.rows = std::move(set_rows[i]);
        rec.rank = term[i];
        rec.slack = static_cast<std::int64_t>(term[i]) - static_cast<std::int64_t>(rec.rows.size());
        rec.certificate = label_partition(pattern.select_rows(rec.rows), term[i]);
        min_slack = i == 0 ? rec.slack : std::min(min_slack, rec.slack);
        rep.sets.push_back(std::move(rec));
    }
    rep.bound_raw = static_cast<std::int64_t>(cut.x()) + min_slack;
    rep.bound = static_cast<std::size_t>(std::max<std::int64_t>(0, rep.bound_raw));
    return rep;
}

}  // namespace

CutBoundReport cut_bound(const net::Network& net, const net::Cut& cut,
                         std::span<const std::vector<std::size_t>> sets, std::optional<std::uint32_t> q, Rng& rng) {
    std::vector<std::vector<std::size_t>> edges, rows;
    for (const auto& set : sets) {
        std::vector<std::size_t> r;
        for (auto e : set) {
            auto row = cut.row_of(e);
            if (!row) throw Error(ErrorCode::NotACutEdge, "wiretap edge '" + net.edges().at(e).id + "' is not a cut edge");
            r.push_back(*row);
        }
        if (r.empty()) continue;
        edges.push_back(set);
        rows.push_back(std::move(r));
    }
    return evaluate(net, cut, std::move(edges), std::move(rows), q, rng);
}

CutBoundReport uniform_bound(const net::Network& net, const net::Cut& cut, std::size_t z,
                             std::optional<std::uint32_t> q, Rng& rng) {
    const std::size_t n = cut.x() + cut.y();
    if (z > n)
        throw Error(ErrorCode::ZTooLarge, "z=" + std::to_string(z) + " exceeds the " + std::to_string(n) + " cut edges");
    const auto all = cut.edges();
    std::vector<std::vector<std::size_t>> edges, rows;
    if (z > 0) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(z), true);
        do {
            std::vector<std::size_t> e, r;
            for (std::size_t i = 0; i < n; ++i)
                if (pick[i]) {
                    e.push_back(all[i]);
                    r.push_back(i);
                }
            edges.push_back(std::move(e));
            rows.push_back(std::move(r));
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    auto rep = evaluate(net, cut, std::move(edges), std::move(rows), q, rng);

    // k_b read off C-bar's own F_q ranks rather than the term ranks.
    std::size_t k_b = 0;
    for (std::size_t i = 0; i < rep.sets.size(); ++i) {
        const auto r = gf::rank(rep.cbar->matrix.select_rows(rep.sets[i].rows));
        if (i == 0 || r < k_b) {
            k_b = r;
            rep.k_b_rows = rep.sets[i].rows;
        }
    }
    rep.k_b = k_b;
    rep.bound_raw = static_cast<std::int64_t>(cut.x() + k_b) - static_cast<std::int64_t>(z);
    rep.bound = static_cast<std::size_t>(std::max<std::int64_t>(0, rep.bound_raw));
    return rep;
}

BestBound best_bound(const net::Network& net, const net::WiretapModel& model, std::optional<std::uint32_t> q,
                     const Rng& rng, std::size_t node_cap) {
    BestBound best;
    bool found = false;
    for (auto& cut : net::enumerate_cuts(net, node_cap)) {
        if (cut.crosses_unbounded(net)) {
            CutBoundReport rep;
            rep.cut = std::move(cut);
            rep.finite = false;
            best.cuts.push_back(std::move(rep));
            continue;
        }
        const auto sets = net::restrict_wiretap_sets(net, model, cut);
        Rng stream = rng.split(cut.mask);
        best.cuts.push_back(cut_bound(net, cut, sets, q, stream));
        const auto& rep = best.cuts.back();
        if (!found || rep.bound_raw < best.raw) {
            best.raw = rep.bound_raw;
            best.argmin = best.cuts.size() - 1;
            found = true;
        }
    }
    if (!found) throw Error(ErrorCode::ValidationError, "every cut crosses an unbounded edge");
    best.value = static_cast<std::size_t>(std::max<std::int64_t>(0, best.raw));
    return best;
}

// ---------------------------------------------------------------------------

json certificate_to_json(const PatternMatrix& ua, const PartitionCertificate& cert) {
    auto names = [&](const std::vector<std::size_t>& rows) {
        json out = json::array();
        for (auto r : rows) out.push_back(ua.labels.empty() || ua.labels[r].empty() ? json(r) : json(ua.labels[r]));
        return out;
    };
    json blocks = json::array();
    for (const auto& b : cert.blocks)
        blocks.push_back({{"label", to_string(b.label)},
                          {"rows", {b.row_begin, b.row_end}},
                          {"cols", {b.col_begin, b.col_end}}});
    return {{"rank", cert.rank},
            {"row_perm", cert.row_perm},
            {"col_perm", cert.col_perm},
            {"blocks", blocks},
            {"t", cert.t},
            {"A2", names(cert.a2)},
            {"A_F", names(cert.a_forward)},
            {"A_B", names(cert.a_backward)},
            {"f_A1", cert.f_a1},
            {"verified", cert.verified}};
}

json report_to_json(const net::Network& net, const CutBoundReport& rep) {
    json j = net::cut_to_json(net, rep.cut);
    j["x"] = rep.x();
    j["y"] = rep.y();
    j["finite"] = rep.finite;
    if (!rep.finite) return j;
    j["q"] = rep.q;
    j["bound"] = rep.bound;
    j["bound_raw"] = rep.bound_raw;
    if (rep.bound_raw < 0) j["note"] = "negative bound clamped to 0";
    if (rep.k_b) {
        j["k_b"] = *rep.k_b;
        j["k_b_rows"] = rep.k_b_rows;
    }
    const auto pattern = stacked_pattern(net, rep.cut);
    json sets = json::array();
    for (const auto& s : rep.sets) {
        json ids = json::array();
        for (auto e : s.edges) ids.push_back(net.edges()[e].id);
        json js = {{"edges", ids}, {"size", s.rows.size()}, {"rank", s.rank}, {"slack", s.slack}};
        if (s.certificate) js["certificate"] = certificate_to_json(pattern.select_rows(s.rows), *s.certificate);
        sets.push_back(std::move(js));
    }
    j["sets"] = std::move(sets);
    if (rep.cbar) {
        json rows = json::array();
        for (std::size_t r = 0; r < rep.cbar->matrix.rows(); ++r) {
            auto row = rep.cbar->matrix.row(r);
            rows.push_back(std::vector<gf::Elem>(row.begin(), row.end()));
        }
        j["cbar"] = {{"modulus", rep.q}, {"rows", rows}, {"attempts", rep.cbar->attempts}};
    }
    return j;
}

json best_bound_to_json(const net::Network& net, const BestBound& best) {
    json cuts = json::array();
    for (const auto& c : best.cuts) cuts.push_back(report_to_json(net, c));
    return {{"bound", best.value}, {"bound_raw", best.raw}, {"argmin_cut", best.argmin}, {"cuts", std::move(cuts)}};
}

}  // namespace revcut::bound
