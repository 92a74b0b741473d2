#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "truncprob/distributions.hpp"
#include "truncprob/tail_bounds.hpp"

namespace truncprob {

// Per-dimension tail allowances: probability mass that may be discarded
// below the lower cut (alpha) and above the upper cut (beta).
struct TailBudget {
    double alpha = 0.0;
    double beta = 0.0;

    TailBudget(double alpha_allow, double beta_allow);
};

// The even split alpha_i = beta_i = eta / (2m) across m dimensions.
std::vector<TailBudget> allocate_budget(double eta, std::int64_t m);

enum class TruncationMethod { bisection_chernoff, massart_closed_form, best };

// Average-scale cut points plus the induced count interval and the
// certificates proving the discarded tail mass stays within budget.
struct TruncationResult {
    double u = 0.0;  // lower cut, u < mean
    double v = 0.0;  // upper cut, v > mean
    CountInterval count_interval = CountInterval::empty();
    double lower_certificate = 0.0;  // proved bound on Pr{X <= u}
    double upper_certificate = 0.0;  // proved bound on Pr{X >= v}
    TruncationMethod method = TruncationMethod::bisection_chernoff;
};

// Finds the smallest delta > 0 with bound(delta) <= budget by doubling from
// delta_seed and then bisecting to absolute width 1e-12. log_bound_at_delta
// must be non-increasing in delta and is compared in log space (-inf allowed).
// The returned delta is the certified side of the final bracket, so
// bound(delta) <= budget holds unconditionally.
double bisect_truncation_delta(const std::function<double(double)>& log_bound_at_delta,
                               double budget, double delta_seed = 0x1p-20);

// Average-scale cut point u = mu - delta (lower) or v = mu + delta (upper)
// with the family's closed-form Chernoff bound at the point <= budget.
double find_truncation_point(const DiscreteDist& dist, double budget, TailSide side);

// Roots of exp(n M(z, p)) = eta_half: the quadratic closed forms
//   z = p + (1 - 2p -/+ sqrt(1 + 18 n p (1-p)/L)) / (2/3 + 3n/L),  L = ln(1/eta_half),
// lower taking the minus branch. Root ranges are asserted and violation
// raises InternalError, since it would mean the formula was transcribed wrong.
double massart_quantile(std::int64_t n, double p, double eta_half, TailSide side);

// Closed-form binomial truncation: [max{a, ceil(n z1)}, min{b, floor(n z2)}]
// intersected with the support; may come back empty.
CountInterval binomial_truncation_closed_form(std::int64_t n, double p, double eta,
                                              std::int64_t a, std::int64_t b);

// Truncates every dimension of the query within its per-dimension budget.
// method best picks, per dimension, the narrower interval among the valid
// methods, preferring the closed form on ties.
std::vector<TruncationResult> truncate_box(const BoxQuery& query, TruncationMethod method);

}  // namespace truncprob
