#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "generator.hpp"

namespace sscqp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kStartStream = 0x57a7'0000ULL;

std::string compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string range_label(const BetaRange& r) { return "[" + compact(r.lb) + "," + compact(r.ub) + ")"; }

struct WorkItem {
    std::string group;
    int instance_id;
    InstanceSpec spec;
};

std::vector<WorkItem> plan(const BenchConfig& cfg) {
    std::vector<WorkItem> items;
    if (cfg.suite == Suite::Table3) {
        const auto ranges = cfg.beta_ranges.empty() ? default_beta_ranges() : cfg.beta_ranges;
        for (std::size_t r = 0; r < ranges.size(); ++r) {
            const std::uint64_t group_seed = mix_seed(cfg.seed, 1000 + r);
            for (std::size_t n : cfg.dims) {
                for (int i = 0; i < cfg.count; ++i) {
                    InstanceSpec spec{n, ranges[r].lb, ranges[r].ub, mix_seed(mix_seed(group_seed, n), i), cfg.value_scale};
                    std::string group = range_label(ranges[r]);
                    if (cfg.dims.size() > 1) group += " n=" + std::to_string(n);
                    items.push_back({group, i, spec});
                }
            }
        }
    } else {
        for (std::size_t n : cfg.dims) {
            const std::uint64_t group_seed = mix_seed(cfg.seed, n);
            for (int i = 0; i < cfg.count; ++i) {
                InstanceSpec spec{n, cfg.regime1.lb, cfg.regime1.ub, mix_seed(group_seed, i), cfg.value_scale};
                items.push_back({"n=" + std::to_string(n), i, spec});
            }
        }
    }
    return items;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

std::vector<BenchRecord> run_item(const BenchConfig& cfg, const WorkItem& item) {
    std::vector<BenchRecord> out;
    const int starts = cfg.suite == Suite::Table2 ? cfg.starts : 1;
    auto failed = [&](const std::string& what) {
        for (int j = 0; j < starts; ++j)
            for (double tol : cfg.tols)
                out.push_back({item.group, item.instance_id, j, item.spec.seed, item.spec.n, kNaN, tol, 0,
                               SolveStatus::MaxIterations, false, 0.0, kNaN, kNaN, kNaN, what});
    };

    std::optional<GeneratedInstance> inst;
    std::optional<SemiSmoothSystem> sys;
    try {
        inst.emplace(generate(item.spec));
        sys.emplace(build_system(inst->problem));
    } catch (const Error& e) {
        failed(e.what());
        return out;
    }

    for (int j = 0; j < starts; ++j) {
        Vector x0 = inst->x0;
        if (j > 0) x0 = Rng(mix_seed(inst->seed, kStartStream + static_cast<std::uint64_t>(j)))
                            .uniform_vector(item.spec.n, cfg.value_scale);
        for (double tol : cfg.tols) {
            SolverConfig scfg;
            scfg.tol_x = tol;
            scfg.max_iter = cfg.max_iter;
            BenchRecord rec{item.group, item.instance_id, j, inst->seed, item.spec.n, inst->beta, tol, 0,
                            SolveStatus::MaxIterations, false, 0.0, kNaN, kNaN, kNaN, {}};
            try {
                std::vector<double> times;
                std::optional<SolveReport> report;
                for (int r = 0; r < cfg.repeats; ++r) {
                    const auto t0 = std::chrono::steady_clock::now();
                    report.emplace(solve(*sys, x0, scfg, inst->u));
                    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
                }
                rec.iterations = report->iterations;
                rec.status = report->status;
                rec.solved = report->status == SolveStatus::ConvergedKnownSolution;
                rec.runtime_seconds = median(std::move(times));
                rec.final_residual = report->final_residual_norm;
                rec.rate_bound = report->rate_bound.value_or(kNaN);
                if (!report->contraction_observed.empty()) {
                    rec.max_observed_contraction = *std::max_element(report->contraction_observed.begin(),
                                                                     report->contraction_observed.end());
                }
            } catch (const Error& e) {
                rec.error = e.what();
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return kNaN;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Group labels such as "[0.5,1000)" contain commas and are written quoted.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> parts(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                parts.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                parts.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            parts.emplace_back();
        } else {
            parts.back() += c;
        }
    }
    if (quoted) throw Error(ErrorCode::ParseError, "unterminated quote in bench CSV");
    return parts;
}

SolveStatus parse_status(const std::string& s) {
    for (auto st : {SolveStatus::ConvergedResidual, SolveStatus::ConvergedKnownSolution,
                    SolveStatus::FiniteTermination, SolveStatus::MaxIterations}) {
        if (s == to_string(st)) return st;
    }
    throw Error(ErrorCode::ParseError, "unknown status '" + s + "'");
}

}  // namespace

const char* to_string(Suite s) noexcept {
    switch (s) {
        case Suite::Table1: return "table1";
        case Suite::Table2: return "table2";
        case Suite::Table3: return "table3";
    }
    return "unknown";
}

Suite parse_suite(const std::string& name) {
    if (name == "table1") return Suite::Table1;
    if (name == "table2") return Suite::Table2;
    if (name == "table3") return Suite::Table3;
    throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "' (expected table1|table2|table3)");
}

std::vector<BetaRange> default_beta_ranges() {
    return {{0.5, 1e3}, {1e3, 1e4}, {1e4, 1e5}, {1e5, 1e6}, {1e6, 1e7}, {1e7, 1e8}};
}

void BenchConfig::validate() const {
    if (dims.empty()) throw Error(ErrorCode::InvalidArgument, "at least one dimension is required");
    for (auto n : dims)
        if (n == 0) throw Error(ErrorCode::InvalidArgument, "dimensions must be positive");
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be at least 1");
    if (tols.empty()) throw Error(ErrorCode::InvalidArgument, "at least one tolerance is required");
    for (double t : tols)
        if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    if (repeats < 1 || repeats % 2 == 0) throw Error(ErrorCode::InvalidArgument, "repeats must be a positive odd number");
    if (starts < 1) throw Error(ErrorCode::InvalidArgument, "starts must be at least 1");
    if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");
    for (const auto& r : beta_ranges)
        if (!(r.lb >= 0.0) || !(r.ub > r.lb)) throw Error(ErrorCode::InvalidArgument, "beta range must satisfy 0 <= lb < ub");
    if (!(regime1.lb >= 0.0) || !(regime1.ub > regime1.lb)) {
        throw Error(ErrorCode::InvalidArgument, "beta range must satisfy 0 <= lb < ub");
    }
}

unsigned worker_count(unsigned requested) {
    unsigned n = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SSCQP_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

BenchResult run_bench(const BenchConfig& cfg) {
    cfg.validate();
    const auto items = plan(cfg);
    std::vector<std::vector<BenchRecord>> slots(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) slots[i] = run_item(cfg, items[i]);
    };
    const unsigned workers = std::min<std::size_t>(worker_count(cfg.threads), items.size());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    BenchResult result{cfg, {}, {}};
    for (auto& slot : slots)
        for (auto& rec : slot) result.records.push_back(std::move(rec));
    result.summaries = summarize(cfg.suite, result.records);
    return result;
}

std::vector<BenchSummary> summarize(Suite suite, const std::vector<BenchRecord>& records) {
    struct Acc {
        BenchSummary summary;
        std::vector<double> iterations;
        std::map<int, std::vector<double>> per_problem;
    };
    std::vector<Acc> accs;
    auto find = [&](const BenchRecord& r) -> Acc& {
        for (auto& a : accs)
            if (a.summary.group == r.group && a.summary.tol_x == r.tol_x) return a;
        accs.push_back({BenchSummary{r.group, r.tol_x, 0, 0, 0, 0.0, kNaN, kNaN, kNaN, kNaN}, {}, {}});
        return accs.back();
    };
    for (const auto& r : records) {
        Acc& a = find(r);
        ++a.summary.group_size;
        a.summary.total_time += r.runtime_seconds;
        a.per_problem[r.instance_id];
        if (!r.solved) continue;
        ++a.summary.solved_count;
        a.summary.total_iterations += r.iterations;
        a.iterations.push_back(r.iterations);
        a.per_problem[r.instance_id].push_back(r.iterations);
    }
    std::vector<BenchSummary> out;
    for (auto& a : accs) {
        a.summary.mean_iterations = mean_of(a.iterations);
        a.summary.std_iterations = a.iterations.empty() ? kNaN : sample_std(a.iterations);
        if (suite == Suite::Table2) {
            std::vector<double> stds, means;
            for (const auto& [id, its] : a.per_problem) {
                if (its.empty()) continue;
                stds.push_back(sample_std(its));
                means.push_back(mean_of(its));
            }
            a.summary.mean_of_problem_std = mean_of(stds);
            a.summary.mean_of_problem_mean = mean_of(means);
        }
        out.push_back(a.summary);
    }
    return out;
}

std::string bench_csv_header() {
    return "suite,group,instance_id,start_id,seed,n,beta,tol_x,iterations,status,solved,runtime_seconds,"
           "final_residual,rate_bound,max_observed_contraction";
}

std::string BenchResult::csv() const {
    std::ostringstream out;
    out << bench_csv_header() << '\n';
    for (const auto& r : records) {
        out << to_string(config.suite) << ',' << csv_field(r.group) << ',' << r.instance_id << ',' << r.start_id << ',' << r.seed
            << ',' << r.n << ',' << format_real(r.beta) << ',' << format_real(r.tol_x) << ',' << r.iterations << ','
            << (r.error.empty() ? to_string(r.status) : "Error") << ',' << (r.solved ? 1 : 0) << ','
            << format_real(r.runtime_seconds) << ',' << format_real(r.final_residual) << ','
            << format_real(r.rate_bound) << ',' << format_real(r.max_observed_contraction) << '\n';
    }
    return out.str();
}

std::vector<BenchRecord> parse_bench_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != bench_csv_header()) {
        throw Error(ErrorCode::ParseError, "bench CSV header mismatch");
    }
    std::vector<BenchRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 15) throw Error(ErrorCode::ParseError, "bench CSV row has " + std::to_string(f.size()) + " fields");
        BenchRecord r{f[1], std::stoi(f[2]), std::stoi(f[3]), std::stoull(f[4]), std::stoull(f[5]), std::stod(f[6]),
                      std::stod(f[7]), std::stoi(f[8]), SolveStatus::MaxIterations, f[10] == "1", std::stod(f[11]),
                      std::stod(f[12]), std::stod(f[13]), std::stod(f[14]), {}};
        if (f[9] == "Error") {
            r.error = "Error";
        } else {
            r.status = parse_status(f[9]);
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::string BenchResult::table() const {
    std::ostringstream out;
    char buf[256];
    std::vector<std::string> groups;
    for (const auto& s : summaries)
        if (std::find(groups.begin(), groups.end(), s.group) == groups.end()) groups.push_back(s.group);
    auto lookup = [&](const std::string& g, double tol) -> const BenchSummary* {
        for (const auto& s : summaries)
            if (s.group == g && s.tol_x == tol) return &s;
        return nullptr;
    };
    const auto& tols = config.tols;

    auto tol_header = [&](int width) {
        std::string h;
        for (double t : tols) {
            std::snprintf(buf, sizeof buf, " %*s", width, compact(t).c_str());
            h += buf;
        }
        return h;
    };

    switch (config.suite) {
        case Suite::Table1: {
            out << "Total iterations and total time (s) over solved runs\n";
            std::snprintf(buf, sizeof buf, "%-12s |%s |%s | solved\n", "n", tol_header(8).c_str(), tol_header(10).c_str());
            out << "             | Total Iterations" << std::string(tols.size() * 9 > 17 ? tols.size() * 9 - 17 : 0, ' ')
                << " | Total Time\n";
            out << buf;
            for (const auto& g : groups) {
                std::snprintf(buf, sizeof buf, "%-12s |", g.c_str());
                out << buf;
                for (double t : tols) {
                    const auto* s = lookup(g, t);
                    std::snprintf(buf, sizeof buf, " %8ld", s ? s->total_iterations : 0L);
                    out << buf;
                }
                out << " |";
                for (double t : tols) {
                    const auto* s = lookup(g, t);
                    std::snprintf(buf, sizeof buf, " %10.4f", s ? s->total_time : 0.0);
                    out << buf;
                }
                out << " |";
                for (double t : tols) {
                    const auto* s = lookup(g, t);
                    std::snprintf(buf, sizeof buf, " %d/%d", s ? s->solved_count : 0, s ? s->group_size : 0);
                    out << buf;
                }
                out << '\n';
            }
            break;
        }
        case Suite::Table2: {
            out << "Influence of the starting point (" << config.count << " problems x " << config.starts
                << " starts)\n";
            std::snprintf(buf, sizeof buf, "%-12s %-8s %12s %12s %12s\n", "group", "Tol X", "MEAN(std)", "MEAN(mean)",
                          "solved");
            out << buf;
            for (const auto& g : groups) {
                for (double t : tols) {
                    const auto* s = lookup(g, t);
                    if (!s) continue;
                    const std::string solved = std::to_string(s->solved_count) + "/" + std::to_string(s->group_size);
                    std::snprintf(buf, sizeof buf, "%-12s %-8s %12.3f %12.3f %12s\n", g.c_str(), compact(t).c_str(),
                                  s->mean_of_problem_std, s->mean_of_problem_mean, solved.c_str());
                    out << buf;
                }
            }
            break;
        }
        case Suite::Table3: {
            out << "Solved problems and mean iterations per solved problem\n";
            std::snprintf(buf, sizeof buf, "%-16s |%s |%s\n", "beta in [lb,ub)", tol_header(8).c_str(),
                          tol_header(8).c_str());
            out << buf;
            for (const auto& g : groups) {
                std::snprintf(buf, sizeof buf, "%-16s |", g.c_str());
                out << buf;
                for (double t : tols) {
                    const auto* s = lookup(g, t);
                    std::snprintf(buf, sizeof buf, " %8d", s ? s->solved_count : 0);
                    out << buf;
                }
                out << " |";
                for (double t : tols) {
                    const auto* s = lookup(g, t);
                    if (s && s->solved_count > 0) {
                        std::snprintf(buf, sizeof buf, " %8.3f", s->mean_iterations);
                    } else {
                        std::snprintf(buf, sizeof buf, " %8s", "-");
                    }
                    out << buf;
                }
                out << '\n';
            }
            break;
        }
    }
    return out.str();
}

}  // namespace sscqp
