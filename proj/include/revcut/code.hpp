#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "revcut/bound.hpp"
#include "revcut/gf.hpp"
#include "revcut/network.hpp"
#include "revcut/rng.hpp"

namespace revcut::code {

/// Scalar linear code on the cut of an upper-bounding network.
///
/// Inputs are (m_1..m_R, K_S^1..K_S^kf, K_D^1..K_D^y); outputs are the
/// signals on (forward edges, backward edges). The encoder is
///
///     E = [ G | C_top ]
///         [ 0 | C_bot ]
///
/// with G a uniformly drawn x-by-x matrix and [C_top; C_bot] = C-bar.
struct LinearCode {
    std::uint32_t q = 2;
    std::size_t rate = 0;
    std::size_t k_f = 0;
    std::size_t x = 0;
    std::size_t y = 0;
    gf::Matrix encoder{gf::Field(2), 0, 0};
    std::vector<std::string> forward_ids;
    std::vector<std::string> backward_ids;
    /// Wiretap sets as row indices of the encoder.
    std::vector<std::vector<std::size_t>> sets;

    gf::Field field() const { return gf::Field(q); }
    std::size_t width() const noexcept { return x + y; }
    /// Rows of the set, columns after the message block.
    gf::Matrix keyed_rows(const std::vector<std::size_t>& rows) const;
};

struct SetVerdict {
    std::vector<std::size_t> rows;
    bool full_row_rank = false;         // keyed rows have full row rank
    bool trivial_intersection = false;  // row space misses the message space
    std::optional<bool> exhaustive;
};

struct CodeVerdict {
    bool decodable = false;
    bool secure_algebraic = false;  // every set has full keyed row rank
    std::optional<bool> secure_exhaustive;
    std::vector<SetVerdict> per_set;
    /// |A| k_f (x+y) / q as a fraction.
    std::uint64_t failure_bound_num = 0;
    std::uint64_t failure_bound_den = 1;
    std::size_t attempts = 0;

    double failure_bound() const {
        return static_cast<double>(failure_bound_num) / static_cast<double>(failure_bound_den);
    }
};

struct ForwardKeys {
    std::size_t k_f = 0;
    std::int64_t rate = 0;  // x - k_f, the unclamped bound
};

ForwardKeys forward_key_count(const bound::CutBoundReport& report);

gf::Matrix assemble_encoder(const gf::Matrix& g, const gf::Matrix& cbar);

CodeVerdict algebraic_verdict(const LinearCode& code);

struct ConstructedCode {
    LinearCode code;
    CodeVerdict verdict;
};

inline constexpr std::size_t default_retry_cap = 64;
inline constexpr std::uint64_t default_enum_cap = 10'000'000;

/// Draws G until the code is decodable and algebraically secure. Uses the
/// report's C-bar and field. Throws NothingToAchieve when the rate is not
/// positive and RetriesExhausted when q is too small.
ConstructedCode construct_code(const net::Network& net, const bound::CutBoundReport& report, Rng& rng,
                               std::size_t retry_cap = default_retry_cap);

/// Enumerates every (message, key) tuple and checks that the observation of
/// each set has the same distribution under every message. Throws TooLarge
/// when q^(x+y) exceeds the cap.
std::vector<bool> exhaustive_secrecy_check(const LinearCode& code, std::uint64_t cap = default_enum_cap);

struct FailureRate {
    std::size_t trials = 0;
    std::size_t failures = 0;           // insecure or singular
    std::size_t security_failures = 0;  // some set lost full keyed row rank
    double frequency = 0.0;
    double bound = 0.0;  // |A| k_f (x+y) / q
};

FailureRate empirical_failure_rate(const bound::CutBoundReport& report, std::size_t trials, Rng& rng);

struct RoundRecord {
    std::size_t round = 0;
    std::vector<gf::Elem> forward;
    std::vector<gf::Elem> backward;
    std::vector<gf::Elem> messages;  // sent this round
    bool decoded = true;
    bool secure = true;
};

struct DelayTrace {
    std::size_t rounds = 0;
    std::size_t rate = 0;
    std::size_t messages_delivered = 0;
    std::vector<RoundRecord> records;
    bool round1_free_of_sink_keys = false;
    bool causal = false;  // no forward symbol uses a key that has not arrived
    std::optional<bool> whole_trace_secure;

    /// (T - 1) R_s / T as numerator and denominator.
    std::uint64_t rate_num() const { return static_cast<std::uint64_t>(messages_delivered); }
    std::uint64_t rate_den() const { return rounds; }
    double effective_rate() const { return rounds ? static_cast<double>(messages_delivered) / rounds : 0.0; }
};

/// Runs the code over T >= 2 rounds with unit delay on cut edges. Round 1
/// only ships sink keys; from round 2 the source encodes with the keys that
/// arrived one round earlier. Sink keys are fresh every round.
DelayTrace simulate_with_delay(const LinearCode& code, const net::Network& gbar, std::size_t rounds, Rng& rng);

nlohmann::json code_to_json(const LinearCode& code);
nlohmann::json verdict_to_json(const LinearCode& code, const CodeVerdict& verdict);
LinearCode code_from_json(const nlohmann::json& doc);
/// One JSON object per round, then a summary object.
std::string trace_to_jsonl(const LinearCode& code, const DelayTrace& trace);

}  // namespace revcut::code
