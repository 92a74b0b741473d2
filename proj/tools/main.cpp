// truncprob: guaranteed-error box probabilities over truncated summation
// domains, plus truncation reports, oracle verification and benchmarking.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "truncprob/engine.hpp"
#include "truncprob/queryspec.hpp"

namespace {

using namespace truncprob;

struct QueryOptions {
    std::vector<std::string> dists;
    std::vector<std::string> ranges;
    double eta = 0.0;
    bool eta_set = false;
    std::string method;
    std::string spec_path;
};

void add_query_options(CLI::App* cmd, QueryOptions& opt) {
    cmd->add_option("--dist", opt.dists,
                    "Dimension distribution, e.g. binomial:n=100,p=0.5 or "
                    "poisson_sum:n=2,lambda=1.5 (repeat per dimension)");
    cmd->add_option("--range", opt.ranges, "Count bounds a:b per dimension; b may be inf");
    cmd->add_option("--eta", opt.eta, "Total error budget in (0, 1)")
        ->each([&opt](const std::string&) { opt.eta_set = true; });
    cmd->add_option("--method", opt.method, "chernoff | massart | best");
    cmd->add_option("--spec", opt.spec_path, "Query spec JSON file instead of inline flags");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("\"" + path + "\" cannot be opened");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

QuerySpec resolve_query(const QueryOptions& opt) {
    std::optional<QuerySpec> spec;
    if (!opt.spec_path.empty()) {
        spec = query_spec_from_text(read_file(opt.spec_path));
        if (opt.eta_set) throw DomainError("\"eta\" cannot be combined with --spec");
        if (!opt.dists.empty() || !opt.ranges.empty()) {
            throw DomainError("\"dist\" flags cannot be combined with --spec");
        }
    } else {
        if (!opt.eta_set) throw DomainError("\"eta\" is missing");
        spec = QuerySpec{query_from_flags(opt.dists, opt.ranges, opt.eta),
                         TruncationMethod::best, "best", ""};
    }
    if (!opt.method.empty()) {
        spec->method_label = opt.method;
        spec->method = method_from_name(opt.method);
    }
    return *spec;
}

std::int64_t term_cap_from_env() {
    const char* raw = std::getenv("TRUNCPROB_TERM_CAP");
    if (raw == nullptr || *raw == '\0') return kDefaultTermCap;
    char* end = nullptr;
    const long long cap = std::strtoll(raw, &end, 10);
    if (end == raw || *end != '\0' || cap <= 0) {
        throw DomainError("\"TRUNCPROB_TERM_CAP\" must be a positive integer");
    }
    return cap;
}

int cmd_prob(const QueryOptions& opt) {
    const QuerySpec spec = resolve_query(opt);
    const ProbBracket bracket = box_probability(spec.query, spec.method);
    std::cout << render_prob_json(bracket, spec.method_label) << "\n";
    return 0;
}

int cmd_truncate(const QueryOptions& opt) {
    const QuerySpec spec = resolve_query(opt);
    const std::vector<TruncationResult> per_dim = truncate_box(spec.query, spec.method);
    const WorkEstimate work = work_estimate(spec.query, spec.method);
    std::cout << render_truncation_json(per_dim, spec.query.eta, spec.method_label, work) << "\n";
    return 0;
}

int cmd_verify(const QueryOptions& opt) {
    const QuerySpec spec = resolve_query(opt);
    const VerifyReport report = verify_against_oracle(spec.query, spec.method, term_cap_from_env());
    std::cout << render_verify_json(report, spec.method_label) << "\n";
    return report.contained ? 0 : 1;
}

std::int64_t median_ns(std::vector<std::int64_t> samples) {
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    if (n % 2 == 1) return samples[n / 2];
    return (samples[n / 2 - 1] + samples[n / 2]) / 2;
}

int cmd_bench(const std::string& spec_path, int repeat) {
    if (repeat < 1) throw DomainError("\"repeat\" must be >= 1");
    const std::int64_t term_cap = term_cap_from_env();

    std::vector<QuerySpec> specs;
    std::istringstream lines(read_file(spec_path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        QuerySpec spec = query_spec_from_text(line);
        if (spec.id.empty()) spec.id = std::to_string(line_no);
        specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw DomainError("\"" + spec_path + "\" contains no queries");

    using clock = std::chrono::steady_clock;
    std::cout << "query_id,method,terms_summed,terms_full,"
                 "wall_ns_truncated,wall_ns_oracle,speedup\n";
    for (const QuerySpec& spec : specs) {
        std::vector<std::int64_t> trunc_ns;
        std::vector<std::int64_t> oracle_ns;
        ProbBracket bracket;
        double sink = 0.0;
        for (int r = 0; r < repeat; ++r) {
            const auto t0 = clock::now();
            bracket = box_probability(spec.query, spec.method);
            const auto t1 = clock::now();
            const OracleResult oracle = full_sum_oracle(spec.query, term_cap);
            const auto t2 = clock::now();
            trunc_ns.push_back(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
            oracle_ns.push_back(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t2 - t1).count());
            sink += bracket.p_lower + oracle.probability;
        }
        const std::int64_t trunc_med = std::max<std::int64_t>(1, median_ns(trunc_ns));
        const std::int64_t oracle_med = median_ns(oracle_ns);
        const double speedup = static_cast<double>(oracle_med) / static_cast<double>(trunc_med);
        std::cout << spec.id << "," << spec.method_label << "," << bracket.terms_summed << ","
                  << bracket.terms_full << "," << trunc_med << "," << oracle_med << ","
                  << format_double(speedup) << "\n";
        if (!std::isfinite(sink)) std::cerr << "";  // keep the measured work observable
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Box-event probabilities with a guaranteed error bracket via "
                 "tail-bound domain truncation"};
    app.require_subcommand(1);

    QueryOptions prob_opt;
    QueryOptions trunc_opt;
    QueryOptions verify_opt;
    std::string bench_path;
    int bench_repeat = 3;

    CLI::App* prob = app.add_subcommand("prob", "Compute the probability bracket");
    add_query_options(prob, prob_opt);
    CLI::App* trunc = app.add_subcommand("truncate", "Report truncation intervals without summing");
    add_query_options(trunc, trunc_opt);
    CLI::App* verify = app.add_subcommand("verify", "Check the bracket against full summation");
    add_query_options(verify, verify_opt);
    CLI::App* bench = app.add_subcommand("bench", "Benchmark truncated vs full summation (CSV)");
    bench->add_option("specfile", bench_path, "Newline-delimited query spec JSON file")
        ->required();
    bench->add_option("--repeat", bench_repeat, "Repetitions per query; medians are reported");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (prob->parsed()) return cmd_prob(prob_opt);
        if (trunc->parsed()) return cmd_truncate(trunc_opt);
        if (verify->parsed()) return cmd_verify(verify_opt);
        if (bench->parsed()) return cmd_bench(bench_path, bench_repeat);
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
