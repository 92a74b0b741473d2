#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "truncprob/errors.hpp"

namespace truncprob {

enum class DistFamily { binomial_count, poisson_sum };

// A count-valued random variable K formed by n i.i.d. terms: either a
// binomial trial count or a sum of Poisson variables. The average scale
// X = K/n (mean p, resp. lambda) is where the bound formulas live; all
// public interval arithmetic stays on the count scale.
class DiscreteDist {
public:
    // 0 < p < 1 strictly; the degenerate endpoints are rejected because
    // every bound formula divides by p(1-p) or takes ln p, ln(1-p).
    static DiscreteDist binomial(std::int64_t trials, double success_prob);
    static DiscreteDist poisson_sum(std::int64_t terms, double term_rate);

    DistFamily family() const noexcept { return family_; }
    std::int64_t term_count() const noexcept { return n_; }

    // E[K/n]: p for Bernoulli terms, lambda for Poisson terms.
    double mean_avg_scale() const noexcept { return param_; }
    double count_mean() const noexcept { return static_cast<double>(n_) * param_; }

    double success_prob() const;  // binomial_count only
    double term_rate() const;     // poisson_sum only

    bool finite_support() const noexcept { return family_ == DistFamily::binomial_count; }
    // n for a binomial count; empty for a Poisson sum (support unbounded above).
    std::optional<std::int64_t> support_max() const noexcept;
    std::int64_t mode_count() const noexcept;

    // ln Pr{K = k}, evaluated via log-gamma; finite on the whole support.
    double log_pmf(std::int64_t k) const;

    // ln E[e^{tY}] for one i.i.d. term Y on the average scale:
    // ln(1 - p + p e^t) for Bernoulli, lambda (e^t - 1) for Poisson.
    // The Bernoulli form is evaluated as a log-sum-exp so it cannot overflow.
    double per_term_cgf(double t) const;

private:
    DiscreteDist(DistFamily family, std::int64_t n, double param)
        : family_(family), n_(n), param_(param) {}

    DistFamily family_;
    std::int64_t n_;
    double param_;
};

// Closed integer count range with explicit empty and unbounded-above states.
// An unbounded upper end occurs only for Poisson queries before truncation.
class CountInterval {
public:
    static CountInterval closed(std::int64_t lo, std::int64_t hi);
    static CountInterval unbounded_above(std::int64_t lo);
    static CountInterval empty() noexcept;

    bool is_empty() const noexcept { return state_ == State::empty_set; }
    bool is_unbounded() const noexcept { return state_ == State::unbounded; }

    std::int64_t lower() const;
    std::int64_t upper() const;
    // Number of integer points; 0 when empty. Unbounded intervals have no width.
    std::int64_t width() const;

    // Intersection with the closed range [lo, hi].
    CountInterval clipped(std::int64_t lo, std::int64_t hi) const;

private:
    enum class State { nonempty, unbounded, empty_set };
    State state_ = State::empty_set;
    std::int64_t lo_ = 0;
    std::int64_t hi_ = -1;
};

// One box dimension: closed count bounds a <= K <= b (b may be +inf).
struct Dimension {
    DiscreteDist dist;
    std::int64_t a = 0;
    std::int64_t b = 0;
    bool b_unbounded = false;

    static Dimension bounded(DiscreteDist dist, std::int64_t a, std::int64_t b);
    static Dimension upper_unbounded(DiscreteDist dist, std::int64_t a);

    // Query bounds intersected with the distribution's support.
    CountInterval support_clipped_bounds() const;
};

// m independent dimensions plus the total error budget eta.
struct BoxQuery {
    std::vector<Dimension> dims;
    double eta = 0.0;

    BoxQuery(std::vector<Dimension> dimensions, double eta_total);
};

inline constexpr std::int64_t kDefaultTermCap = 100'000'000;
inline constexpr double kOracleTailTol = 1e-15;

struct PoissonCutoff {
    std::int64_t k = 0;        // smallest k whose certified tail bound is < kOracleTailTol
    double tail_bound = 0.0;   // the certificate: Pr{K >= k} <= tail_bound < kOracleTailTol
};

// Upper summation cutoff for an unbounded Poisson count, found by a doubling
// search on the count-scale Chernoff bound followed by a binary refinement.
PoissonCutoff poisson_certified_cutoff(const DiscreteDist& dist);

// Compensated sum of pmf over [k_lo, k_hi]. Terms are generated by the pmf
// ratio recurrence anchored at the mode-nearest end of each half interval and
// accumulated from the far ends toward the mode so magnitudes increase; the
// order is fixed, so identical inputs give bit-identical results.
double sum_pmf_range(const DiscreteDist& dist, std::int64_t k_lo, std::int64_t k_hi);

// ln of the same range sum, usable when the sum underflows double range.
double log_sum_pmf_range(const DiscreteDist& dist, std::int64_t k_lo, std::int64_t k_hi);

struct OracleResult {
    double probability = 0.0;
    std::int64_t terms_summed = 0;
    // Certified bound on the probability mass dropped by Poisson upper
    // cutoffs; zero when every dimension is summed exactly.
    double neglected_tail_bound = 0.0;
};

// Brute-force product of full-range marginal sums, used to verify brackets.
// Refuses to start when the total term count exceeds term_cap.
OracleResult full_sum_oracle(const BoxQuery& query, std::int64_t term_cap = kDefaultTermCap);

}  // namespace truncprob
