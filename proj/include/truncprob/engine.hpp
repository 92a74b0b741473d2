#pragma once

#include <cstdint>
#include <vector>

#include "truncprob/distributions.hpp"
#include "truncprob/truncation.hpp"

namespace truncprob {

// Guaranteed bracket around the box probability: the truncated sum P' and
// p_lower = P' <= P <= p_upper = min(1, P' + eta).
struct ProbBracket {
    double p_lower = 0.0;
    double p_upper = 0.0;
    double eta = 0.0;
    std::int64_t terms_summed = 0;
    // Full-domain term count; an unbounded Poisson dimension is counted up
    // to the oracle's certified cutoff so the comparison stays finite.
    std::int64_t terms_full = 0;
    std::vector<TruncationResult> per_dim;
};

// Computes P' as the ordered product of per-dimension compensated sums over
// the truncated count intervals. Dimensions are assumed independent.
ProbBracket box_probability(const BoxQuery& query, TruncationMethod method);

struct WorkEstimate {
    std::int64_t terms_summed = 0;
    std::int64_t terms_full = 0;
};

// Truncation intervals only; no pmf is evaluated.
WorkEstimate work_estimate(const BoxQuery& query, TruncationMethod method);

struct VerifyReport {
    double p_oracle = 0.0;
    ProbBracket bracket;
    bool contained = false;   // p_lower <= p_oracle <= p_upper
    double slack = 0.0;       // p_oracle - p_lower
    double work_ratio = 0.0;  // terms_summed / terms_full
    double oracle_neglected_tail = 0.0;
};

// Runs the full-summation oracle against the bracket.
VerifyReport verify_against_oracle(const BoxQuery& query, TruncationMethod method,
                                   std::int64_t term_cap = kDefaultTermCap);

}  // namespace truncprob
