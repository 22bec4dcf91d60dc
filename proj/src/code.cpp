#include "revcut/code.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "revcut/error.hpp"

namespace revcut::code {

using nlohmann::json;

gf::Matrix LinearCode::keyed_rows(const std::vector<std::size_t>& rows) const {
    return encoder.select_rows(rows).col_range(rate, width() - rate);
}

ForwardKeys forward_key_count(const bound::CutBoundReport& report) {
    ForwardKeys out;
    for (const auto& s : report.sets)
        out.k_f = std::max(out.k_f, s.rows.size() - s.rank);
    out.rate = static_cast<std::int64_t>(report.x()) - static_cast<std::int64_t>(out.k_f);
    return out;
}

gf::Matrix assemble_encoder(const gf::Matrix& g, const gf::Matrix& cbar) {
    const std::size_t x = g.rows(), n = cbar.rows();
    if (g.cols() != x || n < x || cbar.cols() != n - x)
        throw Error(ErrorCode::DimensionMismatch, "encoder blocks do not fit together");
    gf::Matrix e(g.field(), n, n);
    for (std::size_t i = 0; i < x; ++i)
        for (std::size_t j = 0; j < x; ++j) e.set(i, j, g(i, j));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < cbar.cols(); ++j) e.set(i, x + j, cbar(i, j));
    return e;
}

namespace {

gf::Matrix message_rows(const LinearCode& code) {
    gf::Matrix m(code.field(), code.rate, code.width());
    for (std::size_t i = 0; i < code.rate; ++i) m.set(i, i, 1);
    return m;
}

bool all_full_row_rank(const LinearCode& code) {
    for (const auto& rows : code.sets)
        if (gf::rank(code.keyed_rows(rows)) != rows.size()) return false;
    return true;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return b == 0 ? a : gcd(b, a % b); }

void set_failure_bound(const LinearCode& code, CodeVerdict& v) {
    const std::uint64_t num = code.sets.size() * code.k_f * code.width();
    const std::uint64_t den = code.q;
    const std::uint64_t g = num == 0 ? den : gcd(num, den);
    v.failure_bound_num = num / g;
    v.failure_bound_den = den / g;
}

}  // namespace

CodeVerdict algebraic_verdict(const LinearCode& code) {
    CodeVerdict v;
    v.decodable = gf::inverse(code.encoder).has_value();
    const auto msg = message_rows(code);
    v.secure_algebraic = true;
    for (const auto& rows : code.sets) {
        SetVerdict sv;
        sv.rows = rows;
        sv.full_row_rank = gf::rank(code.keyed_rows(rows)) == rows.size();
        sv.trivial_intersection = gf::row_space_intersection_trivial(msg, code.encoder.select_rows(rows));
        v.secure_algebraic = v.secure_algebraic && sv.full_row_rank;
        v.per_set.push_back(std::move(sv));
    }
    set_failure_bound(code, v);
    return v;
}

ConstructedCode construct_code(const net::Network& net, const bound::CutBoundReport& report, Rng& rng,
                               std::size_t retry_cap) {
    if (!report.finite || !report.cbar) throw Error(ErrorCode::ValidationError, "report carries no C-bar");
    const auto keys = forward_key_count(report);
    if (keys.rate <= 0)
        throw Error(ErrorCode::NothingToAchieve,
                    "bound " + std::to_string(keys.rate) + " leaves no message rate; capacity zero");

    LinearCode code;
    code.q = report.q;
    code.rate = static_cast<std::size_t>(keys.rate);
    code.k_f = keys.k_f;
    code.x = report.x();
    code.y = report.y();
    for (auto e : report.cut.forward) code.forward_ids.push_back(net.edges()[e].id);
    for (auto e : report.cut.backward) code.backward_ids.push_back(net.edges()[e].id);
    for (const auto& s : report.sets) code.sets.push_back(s.rows);

    const gf::Field field(code.q);
    for (std::size_t attempt = 1; attempt <= std::max<std::size_t>(retry_cap, 1); ++attempt) {
        gf::Matrix g(field, code.x, code.x);
        for (std::size_t i = 0; i < code.x; ++i)
            for (std::size_t j = 0; j < code.x; ++j) g.set(i, j, field.random(rng));
        code.encoder = assemble_encoder(g, report.cbar->matrix);
        if (!gf::inverse(code.encoder) || !all_full_row_rank(code)) continue;
        auto verdict = algebraic_verdict(code);
        verdict.attempts = attempt;
        return {std::move(code), std::move(verdict)};
    }
    CodeVerdict v;
    set_failure_bound(code, v);
    std::ostringstream msg;
    msg << "no decodable secure encoder in " << retry_cap << " draws at q=" << code.q
        << "; failure bound |A|k_f(x+y)/q = " << v.failure_bound_num << "/" << v.failure_bound_den;
    throw Error(ErrorCode::RetriesExhausted, msg.str());
}

std::vector<bool> exhaustive_secrecy_check(const LinearCode& code, std::uint64_t cap) {
    const std::uint64_t q = code.q;
    const std::size_t n = code.width();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > cap / q) throw Error(ErrorCode::TooLarge, "state space exceeds the enumeration cap");
        total *= q;
    }
    std::uint64_t messages = 1;
    for (std::size_t i = 0; i < code.rate; ++i) messages *= q;
    const std::uint64_t keys = total / messages;
    std::vector<gf::Matrix> taps;
    for (const auto& rows : code.sets) taps.push_back(code.encoder.select_rows(rows));
    std::vector<std::vector<std::uint64_t>> reference(taps.size());
    std::vector<bool> independent(taps.size(), true);

    std::vector<gf::Elem> input(n, 0);
    std::vector<std::uint64_t> seen(keys);
    for (std::uint64_t m = 0; m < messages; ++m) {
        for (std::size_t s = 0; s < taps.size(); ++s) {
            if (!independent[s]) continue;
            // Observation histogram under message m, as a sorted multiset.
            for (std::uint64_t k = 0; k < keys; ++k) {
                std::uint64_t idx = m * keys + k;
                for (std::size_t i = n; i-- > 0;) {
                    input[i] = static_cast<gf::Elem>(idx % q);
                    idx /= q;
                }
                std::uint64_t packed = 0;
                for (auto v : taps[s].apply(input)) packed = packed * q + v;
                seen[k] = packed;
            }
            std::sort(seen.begin(), seen.end());
            if (m == 0)
                reference[s] = seen;
            else if (seen != reference[s])
                independent[s] = false;
        }
    }
    return independent;
}

FailureRate empirical_failure_rate(const bound::CutBoundReport& report, std::size_t trials, Rng& rng) {
    if (!report.cbar) throw Error(ErrorCode::ValidationError, "report carries no C-bar");
    const auto keys = forward_key_count(report);
    LinearCode code;
    code.q = report.q;
    code.rate = static_cast<std::size_t>(std::max<std::int64_t>(0, keys.rate));
    code.k_f = keys.k_f;
    code.x = report.x();
    code.y = report.y();
    for (const auto& s : report.sets) code.sets.push_back(s.rows);
    const gf::Field field(code.q);

    FailureRate out;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        gf::Matrix g(field, code.x, code.x);
        for (std::size_t i = 0; i < code.x; ++i)
            for (std::size_t j = 0; j < code.x; ++j) g.set(i, j, field.random(rng));
        code.encoder = assemble_encoder(g, report.cbar->matrix);
        const bool secure = all_full_row_rank(code);
        const bool decodable = gf::rank(code.encoder) == code.width();
        if (!secure) ++out.security_failures;
        if (!secure || !decodable) ++out.failures;
    }
    out.frequency = trials ? static_cast<double>(out.failures) / static_cast<double>(trials) : 0.0;
    out.bound = static_cast<double>(code.sets.size() * code.k_f * code.width()) / code.q;
    return out;
}

// ---------------------------------------------------------------------------
// Delay simulation

namespace {

// Symbols are linear forms over the time-expanded inputs; round t (1-based)
// owns variables [(t-1)(x+y), t(x+y)) laid out like the encoder columns.
struct TimeExpanded {
    std::size_t width;
    std::size_t rounds;
    std::size_t index(std::size_t round, std::size_t local) const { return (round - 1) * width + local; }
};

bool window_secure(const std::vector<std::vector<gf::Elem>>& forms, const std::vector<bool>& is_message,
                   const gf::Field& f) {
    if (forms.empty()) return true;
    const std::size_t vars = forms.front().size();
    gf::Matrix full(f, forms.size(), vars);
    std::vector<std::size_t> key_cols;
    for (std::size_t c = 0; c < vars; ++c)
        if (!is_message[c]) key_cols.push_back(c);
    for (std::size_t r = 0; r < forms.size(); ++r)
        for (std::size_t c = 0; c < vars; ++c) full.set(r, c, forms[r][c]);
    // Independent of the messages iff dropping the message columns keeps the rank.
    return gf::rank(full) == gf::rank(full.select_cols(key_cols));
}

}  // namespace

DelayTrace simulate_with_delay(const LinearCode& code, const net::Network& gbar, std::size_t rounds, Rng& rng) {
    if (rounds < 2) throw Error(ErrorCode::ValidationError, "simulation needs at least 2 rounds");
    for (const auto& id : code.forward_ids) {
        auto e = gbar.edge_index(id);
        if (!e || gbar.edges()[*e].head != gbar.sink())
            throw Error(ErrorCode::ValidationError, "forward edge '" + id + "' does not enter the sink");
    }
    for (const auto& id : code.backward_ids) {
        auto e = gbar.edge_index(id);
        if (!e || gbar.edges()[*e].tail != gbar.sink())
            throw Error(ErrorCode::ValidationError, "backward edge '" + id + "' does not leave the sink");
    }

    const gf::Field f = code.field();
    const std::size_t x = code.x, y = code.y, w = code.width(), kd0 = x;
    const TimeExpanded te{w, rounds};
    const std::size_t vars = w * rounds;
    const auto& e = code.encoder;

    std::vector<gf::Elem> value(vars);
    for (auto& v : value) v = f.random(rng);
    std::vector<bool> is_message(vars, false);
    for (std::size_t t = 2; t <= rounds; ++t)
        for (std::size_t i = 0; i < code.rate; ++i) is_message[te.index(t, i)] = true;

    // forms[t][row]: linear form of cut row `row` in round t.
    std::vector<std::vector<std::vector<gf::Elem>>> forms(rounds + 1);
    DelayTrace trace;
    trace.rounds = rounds;
    trace.rate = code.rate;
    trace.causal = true;

    const auto g = e.select_rows(std::vector<std::size_t>([&] {
                       std::vector<std::size_t> r(x);
                       std::iota(r.begin(), r.end(), 0);
                       return r;
                   }())).col_range(0, x);
    const auto g_inv = gf::inverse(g);

    for (std::size_t t = 1; t <= rounds; ++t) {
        auto& rows = forms[t];
        rows.assign(w, std::vector<gf::Elem>(vars, 0));
        for (std::size_t i = 0; i < x && t >= 2; ++i) {
            for (std::size_t j = 0; j < x; ++j) rows[i][te.index(t, j)] = e(i, j);
            for (std::size_t j = 0; j < y; ++j) rows[i][te.index(t - 1, kd0 + j)] = e(i, kd0 + j);
        }
        for (std::size_t j = 0; j < y; ++j)
            for (std::size_t c = 0; c < y; ++c) rows[x + j][te.index(t, kd0 + c)] = e(x + j, kd0 + c);

        RoundRecord rec;
        rec.round = t;
        for (std::size_t r = 0; r < w; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t c = 0; c < vars; ++c)
                if (rows[r][c]) acc = (acc + std::uint64_t{rows[r][c]} * value[c]) % f.modulus();
            (r < x ? rec.forward : rec.backward).push_back(static_cast<gf::Elem>(acc));
        }
        // Forward symbols may only use sink keys generated before this round.
        for (std::size_t i = 0; i < x; ++i)
            for (std::size_t s = t; s <= rounds; ++s)
                for (std::size_t j = 0; j < y; ++j)
                    if (rows[i][te.index(s, kd0 + j)]) trace.causal = false;
        if (t == 1) {
            bool clean = true;
            for (std::size_t i = 0; i < x; ++i)
                for (std::size_t s = 1; s <= rounds; ++s)
                    for (std::size_t j = 0; j < y; ++j) clean = clean && rows[i][te.index(s, kd0 + j)] == 0;
            trace.round1_free_of_sink_keys = clean;
        }

        if (t >= 2) {
            for (std::size_t i = 0; i < code.rate; ++i) rec.messages.push_back(value[te.index(t, i)]);
            trace.messages_delivered += code.rate;
            // Sink strips its own keys from one round earlier, then inverts G.
            std::vector<gf::Elem> residual(x);
            for (std::size_t i = 0; i < x; ++i) {
                gf::Elem r = rec.forward[i];
                for (std::size_t j = 0; j < y; ++j)
                    r = f.sub(r, f.mul(e(i, kd0 + j), value[te.index(t - 1, kd0 + j)]));
                residual[i] = r;
            }
            rec.decoded = false;
            if (g_inv) {
                auto decoded = g_inv->apply(residual);
                rec.decoded = std::equal(rec.messages.begin(), rec.messages.end(), decoded.begin());
            }
        }

        for (const auto& set : code.sets) {
            std::vector<std::vector<gf::Elem>> window;
            for (std::size_t s = (t >= 2 ? t - 1 : t); s <= t; ++s)
                for (auto r : set) window.push_back(forms[s][r]);
            rec.secure = rec.secure && window_secure(window, is_message, f);
        }
        trace.records.push_back(std::move(rec));
    }

    if (vars <= 256) {
        bool all = true;
        for (const auto& set : code.sets) {
            std::vector<std::vector<gf::Elem>> obs;
            for (std::size_t t = 1; t <= rounds; ++t)
                for (auto r : set) obs.push_back(forms[t][r]);
            all = all && window_secure(obs, is_message, f);
        }
        trace.whole_trace_secure = all;
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Serialization

json code_to_json(const LinearCode& code) {
    json in = json::array(), out = json::array(), rows = json::array(), sets = json::array();
    for (std::size_t i = 0; i < code.rate; ++i) in.push_back("m" + std::to_string(i + 1));
    for (std::size_t i = 0; i < code.k_f; ++i) in.push_back("K_S" + std::to_string(i + 1));
    for (std::size_t i = 0; i < code.y; ++i) in.push_back("K_D" + std::to_string(i + 1));
    for (const auto& id : code.forward_ids) out.push_back(id);
    for (const auto& id : code.backward_ids) out.push_back(id);
    for (std::size_t r = 0; r < code.encoder.rows(); ++r) {
        auto row = code.encoder.row(r);
        rows.push_back(std::vector<gf::Elem>(row.begin(), row.end()));
    }
    for (const auto& s : code.sets) {
        json js = json::array();
        for (auto r : s) js.push_back(out[r]);
        sets.push_back(std::move(js));
    }
    return {{"q", code.q},       {"rate", code.rate},         {"k_f", code.k_f},   {"x", code.x},
            {"y", code.y},       {"input_layout", in},        {"output_layout", out}, {"E", rows},
            {"wiretap_sets", sets}};
}

json verdict_to_json(const LinearCode& code, const CodeVerdict& v) {
    json sets = json::array();
    for (const auto& s : v.per_set) {
        json ids = json::array();
        for (auto r : s.rows) ids.push_back(r < code.x ? code.forward_ids[r] : code.backward_ids[r - code.x]);
        json js = {{"edges", ids}, {"full_row_rank", s.full_row_rank}, {"trivial_intersection", s.trivial_intersection}};
        if (s.exhaustive) js["exhaustive"] = *s.exhaustive;
        sets.push_back(std::move(js));
    }
    json j = {{"decodable", v.decodable},
              {"secure_algebraic", v.secure_algebraic},
              {"secure_exhaustive", v.secure_exhaustive ? json(*v.secure_exhaustive) : json("skipped")},
              {"sets", sets},
              {"failure_probability_bound",
               {{"num", v.failure_bound_num}, {"den", v.failure_bound_den}, {"value", v.failure_bound()}}}};
    if (v.attempts) j["attempts"] = v.attempts;
    return j;
}

LinearCode code_from_json(const json& doc) {
    try {
        LinearCode code;
        code.q = doc.at("q").get<std::uint32_t>();
        const gf::Field field(code.q);
        code.rate = doc.at("rate").get<std::size_t>();
        code.k_f = doc.at("k_f").get<std::size_t>();
        code.x = doc.at("x").get<std::size_t>();
        code.y = doc.at("y").get<std::size_t>();
        if (code.rate + code.k_f != code.x)
            throw Error(ErrorCode::ValidationError, "rate + k_f must equal the number of forward edges");
        const auto& out = doc.at("output_layout");
        if (out.size() != code.width()) throw Error(ErrorCode::ValidationError, "output layout has the wrong length");
        for (std::size_t i = 0; i < out.size(); ++i)
            (i < code.x ? code.forward_ids : code.backward_ids).push_back(out[i].get<std::string>());
        const auto& rows = doc.at("E");
        if (rows.size() != code.width()) throw Error(ErrorCode::ValidationError, "E must be square of order x+y");
        code.encoder = gf::Matrix(field, code.width(), code.width());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != code.width()) throw Error(ErrorCode::ValidationError, "E must be square of order x+y");
            for (std::size_t c = 0; c < code.width(); ++c) {
                auto v = rows[r][c].get<std::int64_t>();
                if (v < 0 || v >= static_cast<std::int64_t>(code.q))
                    throw Error(ErrorCode::ValidationError, "E entry outside [0, q)");
                code.encoder.set(r, c, v);
            }
        }
        for (const auto& s : doc.at("wiretap_sets")) {
            std::vector<std::size_t> set;
            for (const auto& id : s) {
                auto it = std::find(out.begin(), out.end(), id);
                if (it == out.end()) throw Error(ErrorCode::ValidationError, "wiretap set names a non-cut edge");
                set.push_back(static_cast<std::size_t>(it - out.begin()));
            }
            code.sets.push_back(std::move(set));
        }
        return code;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("code document: ") + e.what());
    }
}

std::string trace_to_jsonl(const LinearCode& code, const DelayTrace& trace) {
    std::ostringstream os;
    for (const auto& rec : trace.records) {
        json fwd = json::object(), bwd = json::object();
        for (std::size_t i = 0; i < rec.forward.size(); ++i) fwd[code.forward_ids[i]] = rec.forward[i];
        for (std::size_t j = 0; j < rec.backward.size(); ++j) bwd[code.backward_ids[j]] = rec.backward[j];
        json j = {{"round", rec.round}, {"forward", fwd},      {"backward", bwd},
                  {"messages", rec.messages}, {"decoded", rec.decoded}, {"secure", rec.secure}};
        os << j.dump() << '\n';
    }
    json summary = {{"rounds", trace.rounds},
                    {"rate", trace.rate},
                    {"messages_delivered", trace.messages_delivered},
                    {"effective_rate", {{"num", trace.rate_num()}, {"den", trace.rate_den()}, {"value", trace.effective_rate()}}},
                    {"round1_free_of_sink_keys", trace.round1_free_of_sink_keys},
                    {"causal", trace.causal}};
    if (trace.whole_trace_secure) summary["whole_trace_secure"] = *trace.whole_trace_secure;
    os << json{{"summary", summary}}.dump() << '\n';
    return os.str();
}

}  // namespace revcut::code
