#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cadyn/debruijn.hpp"
#include "cadyn/equicontinuity.hpp"
#include "cadyn/factors.hpp"
#include "cadyn/gilman.hpp"
#include "cadyn/rule.hpp"
#include "cadyn/stp.hpp"

namespace cadyn {

using Json = nlohmann::ordered_json;

struct AnalysisSelection {
    bool surjectivity = true;
    bool injectivity = true;
    bool blocking = true;
    bool kurka = true;
    bool gilman = true;
    bool stp = true;
    bool factors = true;
};

struct AnalysisParams {
    std::uint64_t seed = 0;
    AnalysisSelection selection;
    std::size_t max_blocking_len = 6;
    BlockingBounds blocking;
    std::size_t kurka_max_total = 64;
    std::size_t kurka_table_budget = std::size_t{1} << 20;
    std::size_t gilman_samples = 2000;
    std::size_t gilman_horizon = 128;
    std::size_t gilman_candidate_len = 4;
    std::size_t stp_max_ingredient = 2;
    std::size_t stp_max_words = 4;
    std::size_t stp_max_steps = 1000;
    std::size_t center_cap = kDefaultCenterCap;
    std::size_t factor_words = 4;
    std::size_t factor_max_ingredient = 2;
    std::size_t max_serialized_certificates = 64;
    bool timings = false;
};

Json params_to_json(const AnalysisParams& params);

// Stable identity: "eca:N" for elementary rules, otherwise a hash of the canonical rule text.
std::string rule_identity(const CellularAutomaton& ca);
std::uint64_t fnv1a64(std::string_view text);

// Full self-contained record for one rule. `seed` is used as given.
Json analyze_rule(const RuleFile& rule, const AnalysisParams& params);

// Serializers shared with the CLI.
Json to_json(const Alphabet& a, const SurjectivityReport& r);
Json to_json(const Alphabet& a, const InjectivityReport& r);
Json to_json(const Alphabet& a, const BlockingCertificate& c);
Json to_json(const Alphabet& a, const KurkaReport& r, std::size_t max_certificates);
Json to_json(const Alphabet& a, const GilmanReport& r);
Json to_json(const Alphabet& a, const StpCertificate& c);
Json to_json(const Alphabet& a, const PeriodicFactor& f);

BlockingCertificate blocking_from_json(const Alphabet& a, const Json& j);
StpCertificate stp_from_json(const Alphabet& a, const Json& j);
PeriodicFactor factor_from_json(const Alphabet& a, const Json& j);

struct VerifyResult {
    std::size_t checked = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// Re-checks every certificate and witness carried by a record.
VerifyResult verify_record(const Json& record);

// One entry of a rule-set spec. Either `rule` is set, or `error` explains why not.
struct RuleSource {
    std::string id;
    std::string origin;
    std::optional<RuleFile> rule;
    std::string error;
};

// Comma-separated items: "eca:all", "eca:N", rule-file paths, or directories
// (every regular file ending in .rule, sorted by name).
std::vector<RuleSource> expand_rule_set(std::string_view spec);

struct SurveyOptions {
    AnalysisParams params;
    std::size_t jobs = 1;
    std::string out_path;
};

struct SurveyStats {
    std::size_t written = 0;
    std::size_t resumed = 0;  // rules skipped because a record already existed
};

// Appends one record per rule not already present in out_path, in rule-set
// order. Each rule gets seed splitmix64(params.seed ^ fnv1a64(id)).
SurveyStats run_survey(const std::vector<RuleSource>& rules, const SurveyOptions& options, std::ostream* progress = nullptr);

std::uint64_t rule_seed(std::uint64_t seed, const std::string& id);

}  // namespace cadyn
