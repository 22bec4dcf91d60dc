// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "revcut/bound.hpp"
#include "revcut/code.hpp"
#include "revcut/error.hpp"
#include "revcut/rankmax.hpp"

using namespace revcut;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

const char* fixture_names[] = {"fig1a.json", "fig1b.json", "twonode.json", "line4.json", "keyed.json", "explicit.json"};

struct Emitted {
    code::LinearCode code;
    code::CodeVerdict verdict;
    std::string origin;
};

/// Codes collected along the way; the secrecy-oracle criterion checks them all.
std::vector<Emitted> emitted;

struct OnGbar {
    net::Instance gbar;
    bound::CutBoundReport report;
};

OnGbar on_gbar(const net::Instance& inst, const net::Cut& cut, std::optional<std::uint32_t> q, Rng& rng) {
    auto g = net::build_upper_bounding_network(inst.network, inst.wiretap, cut);
    auto gc = net::canonical_cut(g.network);
    auto sets = net::restrict_wiretap_sets(g.network, g.wiretap, gc);
    auto report = bound::cut_bound(g.network, gc, sets, q, rng);
    return {std::move(g), std::move(report)};
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome ac1() {
    Outcome o;
    double worst = 0;
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto inst = load_fixture("fig1a.json");
        auto best = bound::best_bound(inst.network, inst.wiretap, std::nullopt, Rng(1));
        Rng rng(2);
        auto g = on_gbar(inst, best.cuts[best.argmin].cut, std::nullopt, rng);
        auto built = code::construct_code(g.gbar.network, g.report, rng);
        auto ex = code::exhaustive_secrecy_check(built.code);
        const bool exhaustive_ok = std::all_of(ex.begin(), ex.end(), [](bool b) { return b; });
        worst = std::max(worst, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        o.pass = best.value == 1 && built.code.rate == 1 && built.verdict.decodable && built.verdict.secure_algebraic &&
                 exhaustive_ok;
        o.detail = fmt("fig1a bound %zu, code rate %zu over F_%u", best.value, built.code.rate, built.code.q);
        emitted.push_back({built.code, built.verdict, "fig1a"});
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto inst = load_fixture("fig1b.json");
        auto best = bound::best_bound(inst.network, inst.wiretap, std::nullopt, Rng(1));
        Rng rng(2);
        auto g = on_gbar(inst, best.cuts[best.argmin].cut, std::nullopt, rng);
        bool refused = false;
        try {
            code::construct_code(g.gbar.network, g.report, rng);
        } catch (const Error& e) {
            refused = e.code() == ErrorCode::NothingToAchieve;
        }
        worst = std::max(worst, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        o.pass = o.pass && best.value == 0 && refused;
        o.detail += fmt("; fig1b bound %zu, code %s", best.value, refused ? "refused" : "EMITTED");
    }
    o.pass = o.pass && worst < 1.0;
    o.detail += fmt("; slowest %.3f s", worst);
    return o;
}

Outcome ac2() {
    Outcome o;
    Rng rng(202);
    int mismatches = 0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t z = rng.uniform(4);
        auto inst = oracle::random_plain_network(rng, 8, z);
        const auto mincut = static_cast<std::int64_t>(oracle::max_flow(inst.network));
        auto best = bound::best_bound(inst.network, inst.wiretap, std::nullopt, rng.split(i));
        const auto expected = static_cast<std::size_t>(std::max<std::int64_t>(0, mincut - static_cast<std::int64_t>(z)));
        if (best.value != expected) ++mismatches;
    }
    o.pass = mismatches == 0;
    o.detail = fmt("50 networks, %d mismatches against max-flow", mismatches);
    return o;
}

Outcome ac3() {
    Outcome o;
    Rng rng(303);
    int uncertified = 0, compared = 0, disagreements = 0, no_maximizer = 0;
    for (int i = 0; i < 200; ++i) {
        auto p = oracle::random_pattern(rng, 1 + rng.uniform(6), 1 + rng.uniform(6), rng.unit());
        rankmax::SubmatrixCollection coll;
        const std::size_t n = 1 + rng.uniform(10);
        for (std::size_t k = 0; k < n; ++k) coll.push_back(oracle::random_subset(rng, p.rows(), p.rows()));
        gf::Field f(gf::next_prime_above(rankmax::field_threshold(p, coll)));
        auto r = rankmax::rank_maximize(p, coll, f, rng);
        for (std::size_t k = 0; k < coll.size(); ++k) {
            const bool zero_ok = [&] {
                for (std::size_t a = 0; a < p.rows(); ++a)
                    for (std::size_t b = 0; b < p.cols(); ++b)
                        if (!p(a, b) && r.matrix(a, b) != 0) return false;
                return true;
            }();
            if (!zero_ok || gf::rank(r.matrix.select_rows(coll[k])) != oracle::term_rank_brute(p, coll[k]))
                ++uncertified;
        }
        if (p.ones() > 9) continue;
        for (std::uint32_t q : {2u, 3u}) {
            try {
                auto ex = rankmax::rank_maximize_exhaustive(p, coll, gf::Field(q));
                ++compared;
                if (ex.ranks != r.ranks) ++disagreements;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoSimultaneousMaximizer) throw;
                ++no_maximizer;
            }
        }
    }
    o.pass = uncertified == 0 && disagreements == 0 && compared > 0;
    o.detail = fmt("200 patterns, %d uncertified subsets; %d exhaustive comparisons, %d disagreements, %d without a "
                   "simultaneous maximizer",
                   uncertified, compared, disagreements, no_maximizer);
    return o;
}

/// Wiretap-set patterns: every set of every fixture cut, then 200 random ones.
std::vector<PatternMatrix> lemma_sweep() {
    std::vector<PatternMatrix> out;
    for (auto name : fixture_names) {
        auto inst = load_fixture(name);
        for (const auto& cut : net::enumerate_cuts(inst.network)) {
            if (cut.crosses_unbounded(inst.network)) continue;
            auto stacked = bound::stacked_pattern(inst.network, cut);
            for (const auto& set : net::restrict_wiretap_sets(inst.network, inst.wiretap, cut)) {
                std::vector<std::size_t> rows;
                for (auto e : set) rows.push_back(*cut.row_of(e));
                out.push_back(stacked.select_rows(rows));
            }
        }
    }
    Rng rng(404);
    for (int i = 0; i < 200; ++i) {
        const std::size_t x = rng.uniform(6), y = 1 + rng.uniform(5);
        auto inst = oracle::profile_network(oracle::random_pattern(rng, x, y, rng.unit()), 0);
        auto cut = net::canonical_cut(inst.network);
        auto stacked = bound::stacked_pattern(inst.network, cut);
        out.push_back(stacked.select_rows(oracle::random_subset(rng, x + y, 5)));
    }
    return out;
}

bool zero_star_blocks_zero(const PatternMatrix& ua, const bound::PartitionCertificate& c) {
    for (const auto& b : c.blocks) {
        if (b.label != bound::BlockLabel::ZeroStar && b.label != bound::BlockLabel::Zero) continue;
        for (auto r = b.row_begin; r < b.row_end; ++r)
            for (auto col = b.col_begin; col < b.col_end; ++col)
                if (ua(c.row_perm[r], c.col_perm[col])) return false;
    }
    return true;
}

Outcome ac4() {
    Outcome o;
    const auto sweep = lemma_sweep();
    int bad = 0, zero_star = 0;
    for (const auto& ua : sweep) {
        const auto r = oracle::term_rank_brute(ua, [&] {
            std::vector<std::size_t> all(ua.rows());
            std::iota(all.begin(), all.end(), 0);
            return all;
        }());
        auto cert = bound::label_partition(ua, r);
        for (const auto& b : cert.blocks) zero_star += b.label == bound::BlockLabel::ZeroStar;
        const bool ok = cert.verified && bound::verify_certificate(ua, cert) && cert.f_a1.size() + cert.t == r &&
                        zero_star_blocks_zero(ua, cert) && oracle::min_partition_witness(ua) == r;
        bad += !ok;
    }
    o.pass = bad == 0;
    o.detail = fmt("%zu wiretap-set patterns, %d failures, %d zero* blocks checked", sweep.size(), bad, zero_star);
    return o;
}

Outcome ac5() {
    Outcome o;
    const auto sweep = lemma_sweep();
    int bad = 0, nontrivial = 0;
    gf::Field f(101);
    for (const auto& ua : sweep) {
        auto cert = bound::label_partition(ua, rankmax::term_rank(ua));
        auto chk = bound::check_conditional_entropy(ua, cert, f);
        // Independent count of |f_AF \ f_AB| from the certificate's row split.
        std::set<std::size_t> fwd, bwd;
        for (auto r : cert.a_forward)
            for (std::size_t c = 0; c < ua.cols(); ++c)
                if (ua(r, c)) fwd.insert(c);
        for (auto r : cert.a_backward)
            for (std::size_t c = 0; c < ua.cols(); ++c)
                if (ua(r, c)) bwd.insert(c);
        std::size_t fresh = 0;
        for (auto c : fwd) fresh += !bwd.count(c);
        const auto budget = static_cast<std::int64_t>(cert.rank) - static_cast<std::int64_t>(cert.a_backward.size()) -
                            static_cast<std::int64_t>(cert.t);
        nontrivial += fresh > 0;
        bad += !(chk.holds && chk.conditional_entropy == fresh && chk.budget == budget &&
                 static_cast<std::int64_t>(fresh) <= budget);
    }
    o.pass = bad == 0;
    o.detail = fmt("%zu certificates, %d violations, %d with positive conditional entropy", sweep.size(), bad, nontrivial);
    return o;
}

Outcome ac6() {
    Outcome o;
    auto inst = load_fixture("keyed.json");
    auto cut = net::make_cut(inst.network, std::vector<std::string>{"S"});
    const std::size_t trials = 10000;
    std::vector<double> scaled;
    double prev = 2.0;
    bool decreasing = true;
    for (std::uint32_t q : {11u, 101u, 1009u}) {
        Rng rng(600 + q);
        auto g = on_gbar(inst, cut, q, rng);
        const auto k_f = code::forward_key_count(g.report).k_f;
        auto fr = code::empirical_failure_rate(g.report, trials, rng);
        const double p = std::min(fr.bound, 1.0);
        const double slack = 3 * std::sqrt(p * (1 - p) / trials);
        const bool inside = k_f >= 1 && fr.frequency <= p + slack;
        decreasing = decreasing && fr.frequency < prev;
        prev = fr.frequency;
        scaled.push_back(fr.frequency * q);
        o.pass = o.pass && inside;
        o.detail += fmt("q=%u: %zu/%zu fail (bound %.4f)%s; ", q, fr.failures, trials, fr.bound, inside ? "" : " OUTSIDE");
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    // q * frequency stays within a factor of two across the three fields.
    const bool proportional = *lo > 0 && *hi / *lo <= 2.0;
    o.pass = o.pass && decreasing && proportional;
    o.detail += fmt("q*freq in [%.2f, %.2f]", *lo, *hi);
    return o;
}

Outcome ac8() {
    Outcome o;
    Rng rng(808);
    int built = 0, mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t x = 1 + rng.uniform(4), y = rng.uniform(5), z = rng.uniform(4);
        auto inst = oracle::profile_network(oracle::random_pattern(rng, x, y, rng.unit()), z);
        auto best = bound::best_bound(inst.network, inst.wiretap, std::nullopt, rng.split(i));
        auto cut = net::canonical_cut(inst.network);
        auto sets = net::restrict_wiretap_sets(inst.network, inst.wiretap, cut);
        auto rep = bound::cut_bound(inst.network, cut, sets, std::nullopt, rng);
        if (rep.bound != best.value) ++mismatches;
        if (rep.bound_raw < 1) continue;
        auto c = code::construct_code(inst.network, rep, rng);
        if (static_cast<std::int64_t>(c.code.rate) != rep.bound_raw || !c.verdict.decodable ||
            !c.verdict.secure_algebraic)
            ++mismatches;
        ++built;
        emitted.push_back({c.code, c.verdict, "profile " + std::to_string(i)});
    }
    o.pass = mismatches == 0 && built > 0;
    o.detail = fmt("100 profiles, %d codes at the bound, %d mismatches", built, mismatches);
    return o;
}

Outcome ac7() {
    Outcome o;
    // Every fixture's best cut, plus whatever the other criteria emitted.
    for (auto name : fixture_names) {
        auto inst = load_fixture(name);
        auto best = bound::best_bound(inst.network, inst.wiretap, std::nullopt, Rng(7));
        if (best.value < 1) continue;
        Rng rng(77);
        auto g = on_gbar(inst, best.cuts[best.argmin].cut, std::nullopt, rng);
        auto c = code::construct_code(g.gbar.network, g.report, rng);
        emitted.push_back({c.code, c.verdict, name});
    }
    int checked = 0, skipped = 0, leaks = 0, disagreements = 0;
    for (const auto& e : emitted) {
        const double states = std::pow(static_cast<double>(e.code.q), static_cast<double>(e.code.width()));
        if (states > static_cast<double>(code::default_enum_cap)) {
            ++skipped;
            continue;
        }
        auto ex = code::exhaustive_secrecy_check(e.code);
        for (std::size_t s = 0; s < ex.size(); ++s) {
            leaks += !ex[s];
            disagreements += ex[s] != e.verdict.per_set[s].full_row_rank;
        }
        ++checked;
    }
    o.pass = checked > 0 && leaks == 0 && disagreements == 0;
    o.detail = fmt("%d codes enumerated (%d above the state cap), %d leaking sets, %d disagreements", checked, skipped,
                   leaks, disagreements);
    return o;
}

Outcome ac9() {
    Outcome o;
    for (auto name : {"fig1a.json", "keyed.json"}) {
        auto inst = load_fixture(name);
        auto best = bound::best_bound(inst.network, inst.wiretap, std::nullopt, Rng(9));
        Rng rng(99);
        auto g = on_gbar(inst, best.cuts[best.argmin].cut, std::nullopt, rng);
        auto c = code::construct_code(g.gbar.network, g.report, rng);
        for (std::size_t T : {2, 10, 100}) {
            auto tr = code::simulate_with_delay(c.code, g.gbar.network, T, rng);
            const bool rate_ok = tr.rate_num() * T == (T - 1) * c.code.rate * tr.rate_den();
            bool idle = true;
            for (auto v : tr.records.front().forward) idle = idle && v == 0;
            bool decoded = true;
            for (const auto& rec : tr.records) decoded = decoded && rec.decoded && rec.secure;
            const bool ok = rate_ok && idle && tr.round1_free_of_sink_keys && tr.causal && decoded;
            o.pass = o.pass && ok;
            o.detail += fmt("%s T=%zu rate %llu/%llu%s; ", name, T, static_cast<unsigned long long>(tr.rate_num()),
                            static_cast<unsigned long long>(tr.rate_den()), ok ? "" : " FAIL");
        }
    }
    o.detail += "round-1 forward symbols carry no sink keys";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double limit_s;
    };
    // AC8 runs before AC7 so its codes are covered by the secrecy oracle.
    const std::vector<Criterion> criteria{
        {"AC1 three-node fixtures", ac1, 2.0},
        {"AC2 min-cut reduction", ac2, 10.0},
        {"AC3 rank maximization", ac3, 60.0},
        {"AC4 partition equality", ac4, 30.0},
        {"AC5 conditional entropy", ac5, 30.0},
        {"AC6 failure envelope", ac6, 60.0},
        {"AC8 tightness", ac8, 120.0},
        {"AC7 secrecy oracle", ac7, 120.0},
        {"AC9 delay convergence", ac9, 60.0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = out.pass && secs < c.limit_s;
        failures += !pass;
        std::printf("%s %s: %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs,
                    c.limit_s);
    }
    std::printf("%s: %d of %zu criteria failed\n", failures ? "FAIL" : "PASS", failures, criteria.size());
    return failures ? 1 : 0;
}
