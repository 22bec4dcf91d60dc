// revcut: cut-set bounds and secure codes for networks with reverse edges.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "revcut/bound.hpp"
#include "revcut/code.hpp"
#include "revcut/error.hpp"
#include "revcut/network.hpp"
#include "revcut/rng.hpp"

namespace {

using nlohmann::json;
using namespace revcut;

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_retries = 3;

// Stream tags; each stage draws from its own split of the seed.
constexpr std::uint64_t tag_code_bound = 0xc0de0001;
constexpr std::uint64_t tag_code_draw = 0xc0de0002;
constexpr std::uint64_t tag_trials = 0xc0de0003;
constexpr std::uint64_t tag_simulate = 0xc0de0004;

struct RunConfig {
    std::string input;
    std::string network;
    std::optional<std::uint32_t> q;
    std::uint64_t seed = 1;
    std::string cut;
    std::size_t node_cap = net::default_node_cap;
    std::uint64_t enum_cap = code::default_enum_cap;
    std::size_t rounds = 2;
    std::size_t trials = 0;
    std::string out;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

/// Writes to a sibling temp file and renames it over the target, or prints
/// to stdout when no path is given.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + tmp);
        out << text;
        if (!out.flush()) throw Error(ErrorCode::ValidationError, "cannot write " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorCode::ValidationError, "cannot rename onto " + path + ": " + ec.message());
    }
}

std::vector<std::string> split_ids(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string id;
    while (std::getline(ss, id, ','))
        if (!id.empty()) out.push_back(id);
    return out;
}

std::vector<std::string> source_side_ids(const net::Network& net, const net::Cut& cut) {
    std::vector<std::string> out;
    for (std::size_t v = 0; v < net.nodes().size(); ++v)
        if (cut.source_side[v]) out.push_back(net.nodes()[v]);
    return out;
}

std::string join(const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) s += (s.empty() ? "" : ",") + id;
    return s;
}

/// Bound for one cut, drawn from the same stream best_bound gives that cut.
bound::CutBoundReport single_cut_report(const net::Instance& inst, const net::Cut& cut, const RunConfig& cfg) {
    if (cut.crosses_unbounded(inst.network)) {
        bound::CutBoundReport rep;
        rep.cut = cut;
        rep.finite = false;
        return rep;
    }
    Rng rng = Rng(cfg.seed).split(cut.mask);
    return bound::cut_bound(inst.network, cut, net::restrict_wiretap_sets(inst.network, inst.wiretap, cut), cfg.q,
                            rng);
}

net::Cut cut_from_flag(const net::Network& net, const std::string& flag) {
    const auto ids = split_ids(flag);
    auto cut = net::make_cut(net, std::span<const std::string>(ids));
    // Keep the enumeration mask so the random stream matches best_bound's.
    std::uint64_t mask = 0;
    std::size_t bit = 0;
    for (std::size_t v = 0; v < net.nodes().size(); ++v) {
        if (v == net.source() || v == net.sink()) continue;
        if (cut.source_side[v]) mask |= std::uint64_t{1} << bit;
        ++bit;
    }
    cut.mask = mask;
    return cut;
}

json uniform_form(const net::Instance& inst, const bound::CutBoundReport& rep, const RunConfig& cfg) {
    const auto* uni = std::get_if<net::Uniform>(&inst.wiretap);
    if (!uni || !rep.finite || uni->z > rep.x() + rep.y()) return nullptr;
    Rng rng = Rng(cfg.seed).split(rep.cut.mask);
    auto u = bound::uniform_bound(inst.network, rep.cut, uni->z, cfg.q, rng);
    return {{"k_b", *u.k_b}, {"k_b_rows", u.k_b_rows}, {"bound", u.bound}, {"bound_raw", u.bound_raw}};
}

int cmd_bound(const RunConfig& cfg) {
    const auto inst = net::parse_network(read_file(cfg.input));
    json doc;
    std::size_t value = 0;
    std::vector<std::string> side;
    if (!cfg.cut.empty()) {
        auto cut = cut_from_flag(inst.network, cfg.cut);
        auto rep = single_cut_report(inst, cut, cfg);
        if (!rep.finite) throw Error(ErrorCode::ValidationError, "cut crosses an unbounded edge");
        doc = {{"bound", rep.bound}, {"bound_raw", rep.bound_raw}, {"cut", bound::report_to_json(inst.network, rep)}};
        if (auto u = uniform_form(inst, rep, cfg); !u.is_null()) doc["uniform"] = u;
        value = rep.bound;
        side = source_side_ids(inst.network, rep.cut);
    } else {
        auto best = bound::best_bound(inst.network, inst.wiretap, cfg.q, Rng(cfg.seed), cfg.node_cap);
        doc = bound::best_bound_to_json(inst.network, best);
        const auto& arg = best.cuts[best.argmin];
        if (auto u = uniform_form(inst, arg, cfg); !u.is_null()) doc["uniform"] = u;
        value = best.value;
        side = source_side_ids(inst.network, arg.cut);
    }
    doc["seed"] = cfg.seed;
    emit(cfg.out, doc.dump(2) + "\n");
    std::cerr << "bound " << value << " (cut {" << join(side) << "})\n";
    return exit_ok;
}

int cmd_code(const RunConfig& cfg) {
    const auto inst = net::parse_network(read_file(cfg.input));
    bound::CutBoundReport chosen;
    if (!cfg.cut.empty()) {
        chosen = single_cut_report(inst, cut_from_flag(inst.network, cfg.cut), cfg);
        if (!chosen.finite) throw Error(ErrorCode::ValidationError, "cut crosses an unbounded edge");
    } else {
        auto best = bound::best_bound(inst.network, inst.wiretap, cfg.q, Rng(cfg.seed), cfg.node_cap);
        chosen = std::move(best.cuts[best.argmin]);
    }
    const auto side = source_side_ids(inst.network, chosen.cut);
    if (chosen.bound_raw < 1) {
        std::cout << "capacity zero, no code emitted (cut {" << join(side) << "}, bound " << chosen.bound_raw
                  << ")\n";
        return exit_ok;
    }

    auto gbar = net::build_upper_bounding_network(inst.network, inst.wiretap, chosen.cut);
    const auto gcut = net::canonical_cut(gbar.network);
    const auto sets = net::restrict_wiretap_sets(gbar.network, gbar.wiretap, gcut);
    Rng bound_rng = Rng(cfg.seed).split(tag_code_bound);
    auto report = bound::cut_bound(gbar.network, gcut, sets, cfg.q, bound_rng);
    if (report.bound_raw != chosen.bound_raw)
        throw Error(ErrorCode::ValidationError, "upper-bounding network changed the cut bound");
    Rng draw_rng = Rng(cfg.seed).split(tag_code_draw);
    auto built = code::construct_code(gbar.network, report, draw_rng);

    const std::uint64_t states =
        static_cast<std::uint64_t>(std::pow(static_cast<double>(built.code.q), static_cast<double>(built.code.width())));
    if (states <= cfg.enum_cap) {
        auto ex = code::exhaustive_secrecy_check(built.code, cfg.enum_cap);
        bool all = true;
        for (std::size_t i = 0; i < ex.size(); ++i) {
            built.verdict.per_set[i].exhaustive = ex[i];
            all = all && ex[i];
        }
        built.verdict.secure_exhaustive = all;
    }

    const std::vector<net::Cut> derived{gcut};
    json doc = code::code_to_json(built.code);
    doc["seed"] = cfg.seed;
    doc["cut"] = side;
    doc["bound"] = chosen.bound;
    doc["verdict"] = code::verdict_to_json(built.code, built.verdict);
    doc["network"] = net::network_to_json(gbar.network, gbar.wiretap, derived);
    if (cfg.trials > 0) {
        Rng trial_rng = Rng(cfg.seed).split(tag_trials);
        auto fr = code::empirical_failure_rate(report, cfg.trials, trial_rng);
        doc["empirical_failure"] = {{"trials", fr.trials},
                                    {"failures", fr.failures},
                                    {"security_failures", fr.security_failures},
                                    {"frequency", fr.frequency},
                                    {"bound", fr.bound}};
    }
    emit(cfg.out, doc.dump(2) + "\n");
    std::cerr << "rate " << built.code.rate << " code over F_" << built.code.q << " on cut {" << join(side) << "}\n";
    return exit_ok;
}

net::Instance embedded_or_given_network(const json& doc, const std::string& path) {
    if (!path.empty()) return net::parse_network(read_file(path));
    if (!doc.contains("network")) throw Error(ErrorCode::ValidationError, "code file has no network; pass one");
    return net::parse_network(doc["network"].dump());
}

void check_code_matches(const code::LinearCode& c, const net::Network& net) {
    for (const auto* ids : {&c.forward_ids, &c.backward_ids})
        for (const auto& id : *ids)
            if (!net.edge_index(id)) throw Error(ErrorCode::ValidationError, "code names edge '" + id + "' not in the network");
}

int cmd_verify(const RunConfig& cfg) {
    const auto doc = read_json(cfg.input);
    const auto c = code::code_from_json(doc);
    const auto inst = embedded_or_given_network(doc, cfg.network);
    check_code_matches(c, inst.network);

    auto v = code::algebraic_verdict(c);
    std::string mode = "algebraic-only";
    try {
        auto ex = code::exhaustive_secrecy_check(c, cfg.enum_cap);
        bool all = true;
        for (std::size_t i = 0; i < ex.size(); ++i) {
            v.per_set[i].exhaustive = ex[i];
            all = all && ex[i];
        }
        v.secure_exhaustive = all;
        mode = "exhaustive";
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TooLarge) throw;
    }

    json insecure = json::array();
    const auto vj = code::verdict_to_json(c, v);
    for (std::size_t i = 0; i < v.per_set.size(); ++i) {
        const bool ok = v.per_set[i].exhaustive.value_or(v.per_set[i].full_row_rank);
        if (!ok) insecure.push_back(vj["sets"][i]["edges"]);
    }
    json out = vj;
    out["mode"] = mode;
    out["secure"] = insecure.empty();
    out["insecure_sets"] = insecure;
    out["seed"] = cfg.seed;
    emit(cfg.out, out.dump(2) + "\n");
    if (insecure.empty())
        std::cerr << "secure (" << mode << ")\n";
    else
        std::cerr << "INSECURE (" << mode << "): " << insecure.dump() << "\n";
    return exit_ok;
}

int cmd_simulate(const RunConfig& cfg) {
    const auto doc = read_json(cfg.input);
    const auto c = code::code_from_json(doc);
    const auto inst = embedded_or_given_network(doc, cfg.network);
    Rng rng = Rng(cfg.seed).split(tag_simulate);
    auto trace = code::simulate_with_delay(c, inst.network, cfg.rounds, rng);
    json header = {{"run", {{"seed", cfg.seed}, {"rounds", cfg.rounds}, {"rate", c.rate}, {"q", c.q}}}};
    emit(cfg.out, header.dump() + "\n" + code::trace_to_jsonl(c, trace));
    std::cerr << "effective rate " << trace.rate_num() << "/" << trace.rate_den() << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cut-set bounds and secure linear codes for wiretap networks with reverse edges"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
        sub->add_option("--out", cfg.out, "Output file (default stdout)");
    };
    auto field = [&](CLI::App* sub) {
        sub->add_option("--q", cfg.q, "Field size (prime); default is derived per cut")
            ->check(CLI::PositiveNumber);
        sub->add_option("--cut", cfg.cut, "Source side of the cut, comma separated node ids");
        sub->add_option("--node-cap", cfg.node_cap, "Maximum node count for cut enumeration")->capture_default_str();
    };

    auto* bound_cmd = app.add_subcommand("bound", "Best cut-set bound over all cuts");
    bound_cmd->add_option("network", cfg.input, "Network JSON")->required();
    common(bound_cmd);
    field(bound_cmd);

    auto* code_cmd = app.add_subcommand("code", "Construct a secure code on the upper-bounding network");
    code_cmd->add_option("network", cfg.input, "Network JSON")->required();
    common(code_cmd);
    field(code_cmd);
    code_cmd->add_option("--enum-cap", cfg.enum_cap, "State-space cap for the exhaustive secrecy check")
        ->capture_default_str();
    code_cmd->add_option("--trials", cfg.trials, "Monte Carlo draws of G for the failure rate")->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "Check the secrecy of a code file");
    verify_cmd->add_option("code", cfg.input, "Code JSON")->required();
    verify_cmd->add_option("network", cfg.network, "Network JSON (default: the one embedded in the code)");
    common(verify_cmd);
    verify_cmd->add_option("--enum-cap", cfg.enum_cap, "State-space cap for the exhaustive check")
        ->capture_default_str();

    auto* sim_cmd = app.add_subcommand("simulate", "Run a code with unit delay on cut edges");
    sim_cmd->add_option("code", cfg.input, "Code JSON")->required();
    sim_cmd->add_option("network", cfg.network, "Network JSON (default: the one embedded in the code)");
    common(sim_cmd);
    sim_cmd->add_option("--T", cfg.rounds, "Number of rounds (at least 2)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_input;
    }

    try {
        if (*bound_cmd) return cmd_bound(cfg);
        if (*code_cmd) return cmd_code(cfg);
        if (*verify_cmd) return cmd_verify(cfg);
        return cmd_simulate(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::RetriesExhausted ? exit_retries : exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
}
