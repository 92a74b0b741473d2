#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "truncprob/engine.hpp"

namespace truncprob {

// External query representation shared by the CLI flags, spec files and
// bench batches. Validation failures raise DomainError with a diagnostic
// naming the offending field.
struct QuerySpec {
    BoxQuery query;
    TruncationMethod method = TruncationMethod::best;
    std::string method_label = "best";  // requested name, echoed in outputs
    std::string id;                     // bench row id; empty means unassigned
};

TruncationMethod method_from_name(const std::string& name);
std::string method_name(TruncationMethod method);

QuerySpec query_spec_from_json(const nlohmann::json& doc);
QuerySpec query_spec_from_text(const std::string& text);

// Flag grammar: --dist "binomial:n=100,p=0.5" or "poisson_sum:n=2,lambda=1.5",
// --range "0:100" or "0:inf".
DiscreteDist dist_from_flag(const std::string& text);
struct RangeFlag {
    std::int64_t a = 0;
    std::optional<std::int64_t> b;  // empty means +inf
};
RangeFlag range_from_flag(const std::string& text);
BoxQuery query_from_flags(const std::vector<std::string>& dists,
                          const std::vector<std::string>& ranges, double eta);

// JSON output. Doubles are rendered with 17 significant digits so every
// value round-trips exactly; all keys are always present (an empty count
// interval renders k_lo/k_hi as null).
std::string format_double(double value);
std::string render_prob_json(const ProbBracket& bracket, const std::string& method_label);
std::string render_truncation_json(const std::vector<TruncationResult>& per_dim, double eta,
                                   const std::string& method_label, const WorkEstimate& work);
std::string render_verify_json(const VerifyReport& report, const std::string& method_label);

}  // namespace truncprob
