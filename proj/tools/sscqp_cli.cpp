// sscqp command-line front end. Links only the C API.
//
// Exit codes: 0 success, 1 input/usage error, 2 non-convergence,
// 3 property failure (verify).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sscqp/sscqp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitPropertyFailure = 3;

std::string real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + real(v[i]);
    return s;
}

int report_error(const char* context, sscqp_status st) {
    std::cerr << "sscqp " << context << ": " << sscqp_status_string(st) << ": " << sscqp_last_error() << '\n';
    return kExitInput;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string path;
    std::string method = "newton";
    double tol_x = 1e-6;
    double tol_res = 1e-12;
    int max_iter = 100;
    double kkt_tol = 1e-8;
    bool trace = false;
    bool ignore_known = false;
};

int run_solve(const SolveArgs& a) {
    sscqp_problem* p = nullptr;
    if (auto st = sscqp_problem_read(a.path.c_str(), &p); st != SSCQP_OK) return report_error("solve", st);
    const std::size_t n = sscqp_problem_dim(p);

    sscqp_solver_config cfg;
    sscqp_solver_config_default(&cfg);
    cfg.tol_x = a.tol_x;
    cfg.tol_res = a.tol_res;
    cfg.max_iter = a.max_iter;
    cfg.method = a.method == "newton" ? SSCQP_METHOD_NEWTON : SSCQP_METHOD_FIXED_POINT;

    std::vector<double> known(n);
    int has_known = 0;
    sscqp_problem_known_solution(p, &has_known, known.data());
    if (a.ignore_known) has_known = 0;

    sscqp_report* r = nullptr;
    if (auto st = sscqp_solve(p, &cfg, nullptr, has_known ? known.data() : nullptr, &r); st != SSCQP_OK) {
        sscqp_problem_destroy(p);
        return report_error("solve", st);
    }

    std::vector<double> u(n), y(n);
    sscqp_report_solution(r, u.data());
    sscqp_report_qp_solution(r, y.data());
    double norm_m = 0.0, objective = 0.0, rate = 0.0;
    sscqp_problem_norm_m(p, &norm_m);
    sscqp_problem_objective(p, y.data(), &objective);
    sscqp_kkt kkt{};
    sscqp_report_kkt(r, a.kkt_tol, &kkt);

    const sscqp_solve_status status = sscqp_report_status(r);
    std::cout << "status: " << sscqp_solve_status_string(status) << '\n'
              << "iterations: " << sscqp_report_iterations(r) << '\n'
              << "final residual: " << real(sscqp_report_final_residual(r)) << '\n'
              << "norm_M: " << real(norm_m) << '\n';
    if (sscqp_report_rate_bound(r, &rate)) std::cout << "rate bound: " << real(rate) << '\n';
    if (sscqp_report_cycle_detected(r)) std::cout << "cycle detected: yes\n";
    std::cout << "x: " << join(u) << '\n'
              << "qp solution: " << join(y) << '\n'
              << "objective: " << real(objective) << '\n'
              << "kkt: primal " << real(kkt.primal_feasibility) << " dual " << real(kkt.dual_feasibility)
              << " complementarity " << real(kkt.complementarity) << (kkt.passed ? " passed" : " FAILED") << " (tol "
              << real(a.kkt_tol) << ")\n";

    if (a.trace) {
        std::vector<double> x(n);
        std::vector<unsigned char> pattern(n);
        std::cout << "trace:\n";
        for (std::size_t k = 0; k < sscqp_report_trace_length(r); ++k) {
            double res = 0.0, pivot = 0.0;
            sscqp_report_trace_entry(r, k, x.data(), &res, &pivot, pattern.data());
            std::string bits;
            for (unsigned char b : pattern) bits += b ? '1' : '0';
            std::cout << "  k=" << k << " residual " << real(res) << " pivot " << real(pivot) << " pattern " << bits
                      << '\n';
        }
    }

    sscqp_report_destroy(r);
    sscqp_problem_destroy(p);
    return status == SSCQP_SOLVE_MAX_ITERATIONS ? kExitNoConvergence : kExitOk;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::size_t n = 100;
    int count = 1;
    double beta_lb = 0.0;
    double beta_ub = 0.5;
    std::uint64_t seed = 1;
    double scale = 1e6;
    std::string out = ".";
};

int run_generate(const GenerateArgs& a) {
    if (!(a.beta_ub > a.beta_lb) || a.beta_lb < 0.0) {
        std::cerr << "sscqp generate: need 0 <= --beta-lb < --beta-ub\n";
        return kExitInput;
    }
    std::error_code ec;
    std::filesystem::create_directories(a.out, ec);
    if (ec) {
        std::cerr << "sscqp generate: cannot create " << a.out << ": " << ec.message() << '\n';
        return kExitInput;
    }
    const std::filesystem::path dir(a.out);
    std::ofstream manifest(dir / "manifest.csv", std::ios::binary);
    if (!manifest) {
        std::cerr << "sscqp generate: cannot write manifest in " << a.out << '\n';
        return kExitInput;
    }
    manifest << "id,file,seed,beta,norm_M\n";
    for (int i = 0; i < a.count; ++i) {
        sscqp_instance_spec spec;
        sscqp_instance_spec_default(&spec);
        spec.n = a.n;
        spec.beta_lb = a.beta_lb;
        spec.beta_ub = a.beta_ub;
        spec.seed = sscqp_mix_seed(a.seed, static_cast<std::uint64_t>(i));
        spec.value_scale = a.scale;
        sscqp_instance* inst = nullptr;
        if (auto st = sscqp_generate(&spec, &inst); st != SSCQP_OK) return report_error("generate", st);
        char name[32];
        std::snprintf(name, sizeof name, "instance_%04d.sscqp", i);
        const auto st = sscqp_instance_write(inst, (dir / name).string().c_str());
        if (st == SSCQP_OK) {
            manifest << i << ',' << name << ',' << sscqp_instance_seed(inst) << ',' << real(sscqp_instance_beta(inst))
                     << ',' << real(sscqp_instance_norm_m(inst)) << '\n';
        }
        sscqp_instance_destroy(inst);
        if (st != SSCQP_OK) return report_error("generate", st);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string suite = "table1";
    std::vector<std::size_t> dims{100};
    int count = 100;
    std::vector<double> tols{1e-6, 1e-8, 1e-10};
    std::uint64_t seed = 1;
    int repeats = 5;
    int starts = 50;
    std::vector<double> ranges;  // table3 (lb, ub) pairs
    double beta_lb = 0.0;
    double beta_ub = 0.5;
    int max_iter = 100;
    unsigned threads = 0;
    std::string out;
    std::string format = "table";
};

int run_bench(const BenchArgs& a) {
    static const std::map<std::string, sscqp_suite> suites{
        {"table1", SSCQP_SUITE_TABLE1}, {"table2", SSCQP_SUITE_TABLE2}, {"table3", SSCQP_SUITE_TABLE3}};
    if (a.ranges.size() % 2 != 0) {
        std::cerr << "sscqp bench: --beta-ranges takes lb ub pairs\n";
        return kExitInput;
    }
    sscqp_bench_config cfg;
    sscqp_bench_config_default(&cfg);
    cfg.suite = suites.at(a.suite);
    cfg.dims = a.dims.data();
    cfg.n_dims = a.dims.size();
    cfg.count = a.count;
    cfg.tols = a.tols.data();
    cfg.n_tols = a.tols.size();
    cfg.seed = a.seed;
    cfg.repeats = a.repeats;
    cfg.starts = a.starts;
    cfg.beta_ranges = a.ranges.empty() ? nullptr : a.ranges.data();
    cfg.n_beta_ranges = a.ranges.size() / 2;
    cfg.regime_lb = a.beta_lb;
    cfg.regime_ub = a.beta_ub;
    cfg.max_iter = a.max_iter;
    cfg.threads = a.threads;

    sscqp_bench* b = nullptr;
    if (auto st = sscqp_bench_run(&cfg, &b); st != SSCQP_OK) return report_error("bench", st);
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary);
        f << sscqp_bench_csv(b);
        if (!f) {
            sscqp_bench_destroy(b);
            std::cerr << "sscqp bench: cannot write " << a.out << '\n';
            return kExitInput;
        }
    }
    std::cout << (a.format == "csv" ? sscqp_bench_csv(b) : sscqp_bench_table(b));
    sscqp_bench_destroy(b);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::uint64_t seed = 1;
    int sweep = 0;
    int instances = 0;
    std::size_t n = 0;
    std::size_t oracle_n = 0;
    int oracle_count = 0;
    std::vector<std::string> only;
};

int run_verify(const VerifyArgs& a) {
    sscqp_verify_config cfg;
    sscqp_verify_config_default(&cfg);
    cfg.seed = a.seed;
    if (a.sweep) cfg.sweep = a.sweep;
    if (a.instances) cfg.instances = a.instances;
    if (a.n) cfg.n = a.n;
    if (a.oracle_n) cfg.oracle_n = a.oracle_n;
    if (a.oracle_count) cfg.oracle_count = a.oracle_count;
    std::vector<const char*> only;
    for (const auto& s : a.only) only.push_back(s.c_str());
    cfg.only = only.empty() ? nullptr : only.data();
    cfg.n_only = only.size();

    sscqp_verify* v = nullptr;
    if (auto st = sscqp_verify_run(&cfg, &v); st != SSCQP_OK) return report_error("verify", st);
    std::cout << sscqp_verify_text(v);
    const bool ok = sscqp_verify_passed(v) != 0;
    sscqp_verify_destroy(v);
    return ok ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-smooth Newton solver for QPs over simplicial cones"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Solve one problem file");
    solve->add_option("problem", sa.path, "Problem file")->required();
    solve->add_option("--method", sa.method, "newton | fixed-point")
        ->check(CLI::IsMember({"newton", "fixed-point"}))
        ->capture_default_str();
    solve->add_option("--tol-x", sa.tol_x, "Known-solution tolerance")->capture_default_str();
    solve->add_option("--tol-res", sa.tol_res, "Residual tolerance")->capture_default_str();
    solve->add_option("--max-iter", sa.max_iter, "Iteration cap")->capture_default_str();
    solve->add_option("--kkt-tol", sa.kkt_tol, "Tolerance of the printed KKT certificate")->capture_default_str();
    solve->add_flag("--trace", sa.trace, "Print every iterate's residual, pivot and sign pattern");
    solve->add_flag("--ignore-known", sa.ignore_known, "Do not stop on the file's planted solution");

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Write random instances with planted solutions");
    gen->add_option("--n", ga.n, "Dimension")->capture_default_str();
    gen->add_option("--count", ga.count, "Number of instances")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--beta-lb", ga.beta_lb, "Lower end of ||A'QA - I||")->capture_default_str();
    gen->add_option("--beta-ub", ga.beta_ub, "Upper end of ||A'QA - I||")->capture_default_str();
    gen->add_option("--seed", ga.seed, "Base seed")->capture_default_str();
    gen->add_option("--scale", ga.scale, "Entry magnitude of random data")->capture_default_str();
    gen->add_option("--out", ga.out, "Output directory")->capture_default_str();

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Run a random-instance experiment");
    bench->add_option("--suite", ba.suite, "table1 | table2 | table3")
        ->check(CLI::IsMember({"table1", "table2", "table3"}))
        ->capture_default_str();
    bench->add_option("--n", ba.dims, "Dimensions")->capture_default_str();
    bench->add_option("--count", ba.count, "Instances per group")->capture_default_str();
    bench->add_option("--tols", ba.tols, "Known-solution tolerances")->capture_default_str();
    bench->add_option("--tol-x", ba.tols, "Alias of --tols");
    bench->add_option("--seed", ba.seed, "Base seed")->capture_default_str();
    bench->add_option("--repeats", ba.repeats, "Timing repeats (odd)")->capture_default_str();
    bench->add_option("--starts", ba.starts, "Starting points per problem (table2)")->capture_default_str();
    bench->add_option("--beta-ranges", ba.ranges, "table3 ranges as lb ub pairs");
    bench->add_option("--beta-lb", ba.beta_lb, "table1/table2 lower end of ||M||")->capture_default_str();
    bench->add_option("--beta-ub", ba.beta_ub, "table1/table2 upper end of ||M||")->capture_default_str();
    bench->add_option("--max-iter", ba.max_iter, "Iteration cap")->capture_default_str();
    bench->add_option("--threads", ba.threads, "Workers (0: all cores, capped by SSCQP_THREADS)");
    bench->add_option("--out", ba.out, "Write the per-record CSV here");
    bench->add_option("--format", ba.format, "Standard output: csv | table")
        ->check(CLI::IsMember({"csv", "table"}))
        ->capture_default_str();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run the property suite");
    verify->add_option("--seed", va.seed, "Run seed")->capture_default_str();
    verify->add_option("--sweep", va.sweep, "Checks per pointwise property");
    verify->add_option("--instances", va.instances, "Instances per solve-based property");
    verify->add_option("--n", va.n, "Dimension of solve-based instances");
    verify->add_option("--oracle-n", va.oracle_n, "Largest enumeration dimension (<= 20)");
    verify->add_option("--oracle-count", va.oracle_count, "Instances per oracle property");
    verify->add_option("--only", va.only, "Run only these properties");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (solve->parsed()) return run_solve(sa);
    if (gen->parsed()) return run_generate(ga);
    if (bench->parsed()) return run_bench(ba);
    return run_verify(va);
}
