#include "truncprob/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "truncprob/kahan.hpp"

#if defined(__GLIBC__) || defined(__unix__) || defined(__APPLE__)
extern "C" long double lgammal_r(long double, int*);
#define TRUNCPROB_HAVE_LGAMMA_R 1
#endif

namespace truncprob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Extended precision matters here: lgamma(10001) is ~8.2e4, so a double ulp
// already costs ~1.5e-11 absolute in the exponent. The reentrant variant also
// keeps pmf evaluation safe for concurrent callers (no signgam write).
long double log_gamma(long double x) {
#ifdef TRUNCPROB_HAVE_LGAMMA_R
    int sign = 0;
    return lgammal_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double log_add_exp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

DiscreteDist DiscreteDist::binomial(std::int64_t trials, double success_prob) {
    if (trials < 1) throw DomainError("binomial: trial count n must be >= 1");
    if (!(std::isfinite(success_prob) && success_prob > 0.0 && success_prob < 1.0)) {
        throw DomainError("binomial: p must lie strictly in (0, 1)");
    }
    return DiscreteDist(DistFamily::binomial_count, trials, success_prob);
}

DiscreteDist DiscreteDist::poisson_sum(std::int64_t terms, double term_rate) {
    if (terms < 1) throw DomainError("poisson_sum: term count n must be >= 1");
    if (!(std::isfinite(term_rate) && term_rate > 0.0)) {
        throw DomainError("poisson_sum: lambda must be > 0");
    }
    return DiscreteDist(DistFamily::poisson_sum, terms, term_rate);
}

double DiscreteDist::success_prob() const {
    if (family_ != DistFamily::binomial_count) {
        throw DomainError("success_prob: not a binomial count");
    }
    return param_;
}

double DiscreteDist::term_rate() const {
    if (family_ != DistFamily::poisson_sum) {
        throw DomainError("term_rate: not a poisson sum");
    }
    return param_;
}

std::optional<std::int64_t> DiscreteDist::support_max() const noexcept {
    if (family_ == DistFamily::binomial_count) return n_;
    return std::nullopt;
}

std::int64_t DiscreteDist::mode_count() const noexcept {
    const double raw = family_ == DistFamily::binomial_count
                           ? (static_cast<double>(n_) + 1.0) * param_
                           : count_mean();
    double m = std::floor(raw);
    if (m < 0.0) m = 0.0;
    const double cap = family_ == DistFamily::binomial_count ? static_cast<double>(n_) : 4.0e18;
    if (m > cap) m = cap;
    return static_cast<std::int64_t>(m);
}

double DiscreteDist::log_pmf(std::int64_t k) const {
    if (k < 0) throw DomainError("log_pmf: k must be non-negative");
    const long double kk = static_cast<long double>(k);
    if (family_ == DistFamily::binomial_count) {
        if (k > n_) throw DomainError("log_pmf: k exceeds the trial count");
        const long double n = static_cast<long double>(n_);
        const long double p = static_cast<long double>(param_);
        return static_cast<double>(log_gamma(n + 1.0L) - log_gamma(kk + 1.0L) -
                                   log_gamma(n - kk + 1.0L) + kk * std::log(p) +
                                   (n - kk) * std::log1p(-p));
    }
    const long double mean =
        static_cast<long double>(n_) * static_cast<long double>(param_);
    return static_cast<double>(-mean + kk * std::log(mean) - log_gamma(kk + 1.0L));
}

double DiscreteDist::per_term_cgf(double t) const {
    if (!std::isfinite(t)) throw DomainError("per_term_cgf: t must be finite");
    if (t == 0.0) return 0.0;  // K_Y(0) = 0 identically; keep it exact
    if (family_ == DistFamily::binomial_count) {
        return log_add_exp(std::log1p(-param_), std::log(param_) + t);
    }
    return param_ * std::expm1(t);
}

CountInterval CountInterval::closed(std::int64_t lo, std::int64_t hi) {
    if (lo < 0 || hi < lo) throw DomainError("CountInterval: need 0 <= lo <= hi");
    CountInterval iv;
    iv.state_ = State::nonempty;
    iv.lo_ = lo;
    iv.hi_ = hi;
    return iv;
}

CountInterval CountInterval::unbounded_above(std::int64_t lo) {
    if (lo < 0) throw DomainError("CountInterval: lower end must be non-negative");
    CountInterval iv;
    iv.state_ = State::unbounded;
    iv.lo_ = lo;
    return iv;
}

CountInterval CountInterval::empty() noexcept { return CountInterval{}; }

std::int64_t CountInterval::lower() const {
    if (is_empty()) throw DomainError("CountInterval: empty interval has no lower end");
    return lo_;
}

std::int64_t CountInterval::upper() const {
    if (is_empty() || is_unbounded()) {
        throw DomainError("CountInterval: no finite upper end");
    }
    return hi_;
}

std::int64_t CountInterval::width() const {
    if (is_empty()) return 0;
    if (is_unbounded()) throw DomainError("CountInterval: unbounded interval has no width");
    return hi_ - lo_ + 1;
}

CountInterval CountInterval::clipped(std::int64_t lo, std::int64_t hi) const {
    if (is_empty() || hi < lo) return empty();
    const std::int64_t new_lo = std::max(lo_, lo);
    const std::int64_t new_hi = is_unbounded() ? hi : std::min(hi_, hi);
    if (new_lo > new_hi) return empty();
    return closed(new_lo, new_hi);
}

Dimension Dimension::bounded(DiscreteDist dist, std::int64_t a, std::int64_t b) {
    if (a > b) throw DomainError("dimension bounds: need a <= b");
    return Dimension{std::move(dist), a, b, false};
}

Dimension Dimension::upper_unbounded(DiscreteDist dist, std::int64_t a) {
    return Dimension{std::move(dist), a, 0, true};
}

CountInterval Dimension::support_clipped_bounds() const {
    const std::int64_t lo = std::max<std::int64_t>(a, 0);
    if (const auto cap = dist.support_max()) {
        const std::int64_t hi = b_unbounded ? *cap : std::min(b, *cap);
        if (lo > hi) return CountInterval::empty();
        return CountInterval::closed(lo, hi);
    }
    if (b_unbounded) return CountInterval::unbounded_above(lo);
    if (lo > b) return CountInterval::empty();
    return CountInterval::closed(lo, b);
}

BoxQuery::BoxQuery(std::vector<Dimension> dimensions, double eta_total)
    : dims(std::move(dimensions)), eta(eta_total) {
    if (dims.empty()) throw DomainError("query: need at least one dimension");
    if (!(std::isfinite(eta) && eta > 0.0 && eta < 1.0)) {
        throw DomainError("query: eta must lie in (0, 1)");
    }
}

PoissonCutoff poisson_certified_cutoff(const DiscreteDist& dist) {
    if (dist.family() != DistFamily::poisson_sum) {
        throw DomainError("poisson_certified_cutoff: not a poisson sum");
    }
    const double mean = dist.count_mean();
    const auto log_bound = [mean](std::int64_t k) {
        const double kk = static_cast<double>(k);
        return -mean + kk * (std::log(mean) + 1.0 - std::log(kk));
    };
    const double log_tol = std::log(kOracleTailTol);

    std::int64_t lo = static_cast<std::int64_t>(std::floor(std::min(mean, 4.0e18))) + 1;
    if (log_bound(lo) < log_tol) return {lo, std::exp(log_bound(lo))};
    std::int64_t hi = lo;
    while (log_bound(hi) >= log_tol) {
        if (hi > std::int64_t{2} << 61) {
            throw InternalError("poisson_certified_cutoff: doubling search ran away");
        }
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (log_bound(mid) >= log_tol) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {hi, std::exp(log_bound(hi))};
}

namespace {

constexpr std::int64_t kChunk = std::int64_t{1} << 20;

// pmf(k + step) / pmf(k)
double pmf_ratio(const DiscreteDist& dist, std::int64_t k, int step) {
    const double kk = static_cast<double>(k);
    if (dist.family() == DistFamily::binomial_count) {
        const double n = static_cast<double>(dist.term_count());
        const double p = dist.success_prob();
        const double odds = p / (1.0 - p);
        return step > 0 ? (n - kk) / (kk + 1.0) * odds
                        : kk / (n - kk + 1.0) / odds;
    }
    const double mean = dist.count_mean();
    return step > 0 ? mean / (kk + 1.0) : kk / mean;
}

// Sum of one half-interval run. Terms are generated outward from the anchor
// (the mode-nearest end, where the log-gamma seed is most accurate, scaled by
// anchor_term) and accumulated far-end-first so magnitudes increase. Long
// runs are chunked; chunk subtotals are merged farthest-first.
double sum_run(const DiscreteDist& dist, std::int64_t anchor, std::int64_t far,
               double anchor_term) {
    const int step = far >= anchor ? 1 : -1;
    const std::int64_t len = step > 0 ? far - anchor + 1 : anchor - far + 1;

    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(std::min(len, kChunk)));
    std::vector<double> chunk_totals;

    double term = anchor_term;
    std::int64_t k = anchor;
    std::int64_t produced = 0;
    while (produced < len) {
        const std::int64_t take = std::min(len - produced, kChunk);
        buf.clear();
        for (std::int64_t i = 0; i < take; ++i) {
            buf.push_back(term);
            if (produced + i + 1 < len) {
                term *= pmf_ratio(dist, k, step);
                k += step;
            }
        }
        KahanAccumulator acc;
        for (auto it = buf.rbegin(); it != buf.rend(); ++it) acc += *it;
        chunk_totals.push_back(acc.value());
        produced += take;
    }

    KahanAccumulator total;
    for (auto it = chunk_totals.rbegin(); it != chunk_totals.rend(); ++it) total += *it;
    return total.value();
}

void check_range(const DiscreteDist& dist, std::int64_t k_lo, std::int64_t k_hi) {
    if (k_lo < 0 || k_hi < k_lo) throw DomainError("pmf range sum: need 0 <= k_lo <= k_hi");
    if (const auto cap = dist.support_max(); cap && k_hi > *cap) {
        throw DomainError("pmf range sum: range exceeds the support");
    }
}

}  // namespace

double sum_pmf_range(const DiscreteDist& dist, std::int64_t k_lo, std::int64_t k_hi) {
    check_range(dist, k_lo, k_hi);
    const std::int64_t split = std::clamp(dist.mode_count(), k_lo, k_hi);
    const double left = sum_run(dist, split, k_lo, std::exp(dist.log_pmf(split)));
    const double right =
        split < k_hi ? sum_run(dist, split + 1, k_hi, std::exp(dist.log_pmf(split + 1))) : 0.0;
    return left + right;
}

double log_sum_pmf_range(const DiscreteDist& dist, std::int64_t k_lo, std::int64_t k_hi) {
    check_range(dist, k_lo, k_hi);
    const std::int64_t split = std::clamp(dist.mode_count(), k_lo, k_hi);
    // Normalize by the largest term so the series stays in [1, width].
    const double left = sum_run(dist, split, k_lo, 1.0);
    double series = left;
    if (split < k_hi) {
        series += pmf_ratio(dist, split, +1) * sum_run(dist, split + 1, k_hi, 1.0);
    }
    return dist.log_pmf(split) + std::log(series);
}

OracleResult full_sum_oracle(const BoxQuery& query, std::int64_t term_cap) {
    if (term_cap <= 0) throw DomainError("term cap must be positive");

    struct DimRange {
        std::int64_t lo = 0;
        std::int64_t hi = -1;
        bool empty = true;
        double cutoff_cert = 0.0;
    };
    std::vector<DimRange> ranges;
    ranges.reserve(query.dims.size());
    std::int64_t total_terms = 0;

    for (const auto& dim : query.dims) {
        DimRange r;
        const CountInterval base = dim.support_clipped_bounds();
        if (!base.is_empty()) {
            r.lo = base.lower();
            if (base.is_unbounded()) {
                const PoissonCutoff cut = poisson_certified_cutoff(dim.dist);
                r.hi = cut.k;
                r.cutoff_cert = cut.tail_bound;
            } else {
                r.hi = base.upper();
            }
            r.empty = r.hi < r.lo;
        }
        if (!r.empty) total_terms += r.hi - r.lo + 1;
        ranges.push_back(r);
    }

    if (total_terms > term_cap) {
        throw ResourceError("full summation needs " + std::to_string(total_terms) +
                            " terms; cap is " + std::to_string(term_cap));
    }

    OracleResult out;
    out.terms_summed = total_terms;
    double product = 1.0;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const DimRange& r = ranges[i];
        // A marginal sum is a probability; rounding can push the compensated
        // sum a few ulps past one, so clamp before taking the product.
        const double factor =
            r.empty ? 0.0 : std::min(1.0, sum_pmf_range(query.dims[i].dist, r.lo, r.hi));
        product *= factor;
        out.neglected_tail_bound += r.cutoff_cert;
    }
    out.probability = product;
    return out;
}

}  // namespace truncprob
