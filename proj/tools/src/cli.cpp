#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gfl/error.hpp"
#include "gfl/io.hpp"
#include "gfl/solver.hpp"
#include "gfl/spg.hpp"
#include "gfl/synth.hpp"
#include "gfl/trails.hpp"

namespace gfl::cli {
namespace {

using Dims = std::pair<std::size_t, std::size_t>;

/* Errors the user can fix by changing flags; reported with exit code 1. */
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GraphSource {
    std::string path;
    std::string grid;
};

struct Loaded {
    Graph graph;
    std::optional<Dims> dims;
    std::string name;
};

Dims parse_grid(const std::string& text) {
    const auto x = text.find_first_of("xX");
    const auto number = [&](std::string_view s) {
        std::size_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || v == 0) {
            throw UsageError("--grid expects N or RxC with positive sizes, got '" + text + "'");
        }
        return v;
    };
    if (x == std::string::npos) {
        const std::size_t n = number(text);
        return {n, n};
    }
    return {number(std::string_view(text).substr(0, x)), number(std::string_view(text).substr(x + 1))};
}

Loaded load_graph(const GraphSource& src) {
    if (!src.grid.empty()) {
        const Dims d = parse_grid(src.grid);
        return {synth::grid_graph(d.first, d.second), d,
                "grid" + std::to_string(d.first) + "x" + std::to_string(d.second)};
    }
    if (src.path.empty()) throw UsageError("one of --graph or --grid is required");
    return {io::read_graph(src.path), std::nullopt, std::filesystem::path(src.path).stem().string()};
}

void add_graph_source(CLI::App* cmd, GraphSource& src) {
    auto* graph = cmd->add_option("--graph", src.path, "Graph file (.mtx Matrix Market, otherwise edge list)");
    auto* grid = cmd->add_option("--grid", src.grid, "Use an N x N (or RxC) grid graph instead of a file");
    graph->excludes(grid);
}

StrategyKind strategy_of(const std::string& name) {
    const auto kind = parse_strategy(name);
    if (!kind) {
        throw UsageError("unknown strategy '" + name +
                         "' (expected pseudotour, medians, random, edges or rowscols)");
    }
    return *kind;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

/* Seed from the flag, or a fresh one that is logged so the run can be repeated. */
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given, std::ostream& err) {
    if (given) return *given;
    std::random_device rd;
    const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed: " << seed << '\n';
    return seed;
}

/* Writes to the named file, or to `fallback` for an empty name or "-". */
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    write(f);
    if (!f) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

void log_stats(std::ostream& err, std::string_view label, const TrailStats& s) {
    err << label << ": " << s.count << " trails, length min " << s.min_length << " median "
        << s.median_length << " mean " << s.mean_length << " max " << s.max_length << '\n';
}

struct SolverFlags {
    double c = 0.0;
    double tol = 1e-4;
    std::size_t max_steps = 100000;
    double alpha0 = 1.0;
    bool fixed_penalty = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--c", f.c, "Adaptive penalty dampening in [0, 1]; 0 keeps a uniform penalty")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--tol", f.tol, "Convergence tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--max-steps", f.max_steps, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--alpha0", f.alpha0, "Initial ADMM penalty")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_flag("--fixed-penalty", f.fixed_penalty, "Disable residual balancing of the penalty");
}

SolverConfig solver_config(const SolverFlags& f, std::size_t threads) {
    SolverConfig cfg;
    cfg.accel_c = f.c;
    cfg.tol = f.tol;
    cfg.max_iters = f.max_steps;
    cfg.alpha0 = f.alpha0;
    cfg.vary_penalty = !f.fixed_penalty;
    cfg.threads = threads;
    return cfg;
}

struct BlobFlags {
    std::size_t blobs = 4;
    double fraction = 0.05;
    double noise_sd = 1.0;
};

void add_blob_flags(CLI::App* cmd, BlobFlags& f) {
    cmd->add_option("--blobs", f.blobs, "Blobs per instance")->capture_default_str();
    cmd->add_option("--blob-fraction", f.fraction, "Share of vertices in each blob")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--noise-sd", f.noise_sd, "Gaussian noise standard deviation")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

struct BenchFlags {
    std::size_t trials = 10;
    std::string strategies = "rowscols,medians,pseudotour,edges";
    double lambda = 1.0;
    std::optional<std::uint64_t> seed;
    std::size_t pair_cap = 1000;
    std::string out;
    std::string summary;
    std::string histogram;
    SolverFlags solver;
    BlobFlags blob;
};

void add_bench_flags(CLI::App* cmd, BenchFlags& f, bool with_strategies) {
    cmd->add_option("--trials", f.trials, "Independent blob instances")->capture_default_str();
    if (with_strategies) {
        cmd->add_option("--strategies", f.strategies, "Comma-separated decomposition strategies")
            ->capture_default_str();
        cmd->add_option("--pair-cap", f.pair_cap, "Odd-vertex pairs sampled per path-removal step")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--emit-histogram", f.histogram, "Write trail-length histograms (CSV) here");
    }
    cmd->add_option("--lambda", f.lambda, "Fusion penalty")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master seed (random and logged when omitted)");
    cmd->add_option("--out", f.out, "Per-trial results CSV (default: standard output)");
    cmd->add_option("--summary", f.summary, "Per-strategy summary CSV");
    add_solver_flags(cmd, f.solver);
    add_blob_flags(cmd, f.blob);
}

synth::BenchConfig bench_config(const BenchFlags& f, std::uint64_t seed, std::size_t threads) {
    synth::BenchConfig cfg;
    cfg.lambda = f.lambda;
    cfg.master_seed = seed;
    cfg.blobs.n_blobs = f.blob.blobs;
    cfg.blobs.blob_fraction = f.blob.fraction;
    cfg.blobs.noise_sd = f.blob.noise_sd;
    cfg.solver = solver_config(f.solver, threads);
    cfg.solver.record_history = false;
    cfg.threads = threads;
    return cfg;
}

int run_bench(const Graph& g, const std::optional<Dims>& dims, const std::string& name,
              const BenchFlags& f, std::uint64_t seed, std::size_t threads, std::ostream& out,
              std::ostream& err) {
    auto cfg = bench_config(f, seed, threads);
    cfg.graph_name = name;
    cfg.grid_dims = dims;

    std::vector<synth::NamedTrails> sets;
    for (const auto& s : split_csv(f.strategies)) {
        const StrategyKind kind = strategy_of(s);
        if (kind == StrategyKind::GridRowsCols && !dims) {
            throw UsageError("strategy rowscols needs a grid graph");
        }
        const DecompositionStrategy strategy{kind, seed, f.pair_cap};
        sets.push_back({s, decompose(g, strategy, dims)});
        log_stats(err, s, trail_stats(sets.back().trails));
    }
    if (sets.empty()) throw UsageError("--strategies is empty");
    if (!f.histogram.empty()) {
        emit(f.histogram, out, [&](std::ostream& o) { synth::write_histogram_csv(o, sets); });
    }

    const auto report = synth::run_trials(g, sets, f.trials, cfg);
    emit(f.out, out, [&](std::ostream& o) { synth::write_results_csv(o, report.results); });
    if (!f.summary.empty()) {
        emit(f.summary, out, [&](std::ostream& o) { synth::write_summary_csv(o, report.summaries); });
    }
    bool ok = true;
    for (const auto& r : report.results) {
        if (!r.error.empty()) {
            err << "trial " << r.trial << " (" << r.strategy << "): " << r.error << '\n';
            ok = false;
        } else if (!r.converged) {
            ok = false;
        }
    }
    for (const auto& s : report.summaries) {
        err << std::left << std::setw(12) << s.strategy << " mean steps " << s.mean_steps << " (+/- "
            << s.stderr_steps << ")\n";
    }
    if (!ok) err << "some trials failed or hit --max-steps\n";
    return ok ? 0 : 2;
}

int exit_code(const Error& e) {
    switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
        return 1;
    default:
        return 2;
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph-fused lasso via trail decomposition and ADMM", "gfl"};
    app.require_subcommand(1);
    app.fallthrough();
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads for trail updates and trials (0 = all cores)");

    // decompose
    auto* decompose_cmd = app.add_subcommand("decompose", "Split a graph into trails");
    GraphSource dec_src;
    std::string dec_strategy = "pseudotour";
    std::optional<std::uint64_t> dec_seed;
    std::size_t dec_cap = 1000;
    std::string dec_out;
    add_graph_source(decompose_cmd, dec_src);
    decompose_cmd->add_option("--strategy", dec_strategy, "pseudotour, medians, random, edges or rowscols")
        ->capture_default_str();
    decompose_cmd->add_option("--seed", dec_seed, "Random seed (random and logged when omitted)");
    decompose_cmd->add_option("--pair-cap", dec_cap, "Odd-vertex pairs sampled per path-removal step")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    decompose_cmd->add_option("--out", dec_out, "Trail file (default: standard output)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve one graph-fused lasso problem");
    GraphSource sol_src;
    std::string sol_y;
    std::string sol_trails;
    double sol_lambda = 1.0;
    std::string sol_strategy = "pseudotour";
    std::string sol_method = "admm";
    std::string sol_loss = "squared";
    double sol_epsilon = 1e-6;
    std::optional<std::uint64_t> sol_seed;
    std::string sol_out_beta;
    std::string sol_out_diag;
    SolverFlags sol_flags;
    add_graph_source(solve_cmd, sol_src);
    solve_cmd->add_option("--y", sol_y, "Observations, one value per line")->required();
    solve_cmd->add_option("--trails", sol_trails, "Reuse a trail file instead of decomposing");
    solve_cmd->add_option("--lambda", sol_lambda, "Fusion penalty")->check(CLI::NonNegativeNumber)->capture_default_str();
    solve_cmd->add_option("--strategy", sol_strategy, "Decomposition strategy")->capture_default_str();
    solve_cmd->add_option("--method", sol_method, "admm or spg")
        ->check(CLI::IsMember({"admm", "spg"}))
        ->capture_default_str();
    solve_cmd->add_option("--loss", sol_loss, "squared or poisson (admm only)")
        ->check(CLI::IsMember({"squared", "poisson"}))
        ->capture_default_str();
    solve_cmd->add_option("--epsilon", sol_epsilon, "SPG smoothing and stopping precision")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_option("--seed", sol_seed, "Decomposition seed (random and logged when omitted)");
    solve_cmd->add_option("--out-beta", sol_out_beta, "Solution vector (default: standard output)");
    solve_cmd->add_option("--out-diag", sol_out_diag, "Per-iteration diagnostics CSV");
    add_solver_flags(solve_cmd, sol_flags);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Seeded multi-trial convergence benchmarks");
    bench_cmd->require_subcommand(1);
    auto* bench_grid = bench_cmd->add_subcommand("grid", "N x N grid graph");
    auto* bench_random = bench_cmd->add_subcommand("random", "Random sparse connected graph");
    auto* bench_file = bench_cmd->add_subcommand("file", "Graph read from a file");
    auto* bench_halving = bench_cmd->add_subcommand("halving", "Rows+cols trails on a grid, halved repeatedly");
    std::size_t grid_n = 100;
    std::size_t random_n = 1000;
    double sparsity = 0.998;
    std::string bench_path;
    std::size_t halving_n = 64;
    std::size_t halving_levels = 4;
    BenchFlags grid_flags, random_flags, file_flags, halving_flags;
    bench_grid->add_option("--n", grid_n, "Grid side length")->check(CLI::Range(2, 1 << 15))->capture_default_str();
    add_bench_flags(bench_grid, grid_flags, true);
    bench_random->add_option("--n", random_n, "Vertex count")->check(CLI::Range(2, 1 << 30))->capture_default_str();
    bench_random->add_option("--sparsity", sparsity, "Fraction of absent vertex pairs")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    random_flags.strategies = "medians,pseudotour,random,edges";
    add_bench_flags(bench_random, random_flags, true);
    bench_file->add_option("--graph", bench_path, "Graph file (.mtx or edge list)")->required();
    file_flags.strategies = "medians,pseudotour,random,edges";
    add_bench_flags(bench_file, file_flags, true);
    bench_halving->add_option("--n", halving_n, "Grid side length")->check(CLI::Range(2, 1 << 15))->capture_default_str();
    bench_halving->add_option("--levels", halving_levels, "Number of halvings")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_bench_flags(bench_halving, halving_flags, false);

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check that trails partition a graph's edges");
    GraphSource val_src;
    std::string val_trails;
    add_graph_source(validate_cmd, val_src);
    validate_cmd->add_option("--trails", val_trails, "Trail file")->required();

    // convert
    auto* convert_cmd = app.add_subcommand("convert", "Translate between Matrix Market and edge lists");
    std::string conv_in;
    std::string conv_out;
    convert_cmd->add_option("--in", conv_in, "Input graph (.mtx or edge list)")->required();
    convert_cmd->add_option("--out", conv_out, "Output graph; .mtx writes Matrix Market")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version come through here with exit code 0
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (*decompose_cmd) {
            const auto loaded = load_graph(dec_src);
            const DecompositionStrategy strategy{strategy_of(dec_strategy),
                                                 resolve_seed(dec_seed, err), dec_cap};
            if (strategy.kind == StrategyKind::GridRowsCols && !loaded.dims) {
                throw UsageError("strategy rowscols needs --grid");
            }
            const TrailSet ts = decompose(loaded.graph, strategy, loaded.dims);
            log_stats(err, dec_strategy, trail_stats(ts));
            emit(dec_out, out, [&](std::ostream& o) { io::write_trails(o, ts); });
            return 0;
        }

        if (*solve_cmd) {
            const auto loaded = load_graph(sol_src);
            const auto y = io::read_vector_csv(sol_y);
            if (y.size() != loaded.graph.n_vertices()) {
                throw Error(ErrorCode::DimensionMismatch,
                            sol_y + " has " + std::to_string(y.size()) + " values but the graph has " +
                                std::to_string(loaded.graph.n_vertices()) + " vertices");
            }
            SolveResult result;
            if (sol_method == "spg") {
                result = spg_solve(loaded.graph, y, sol_lambda, sol_epsilon);
            } else {
                ProblemInstance problem{y, sol_lambda};
                if (sol_loss == "poisson") problem.loss = poisson_loss();
                const auto cfg = solver_config(sol_flags, threads);
                if (!sol_trails.empty()) {
                    TrailSet ts = bind_edge_ids(loaded.graph, io::read_trails(sol_trails, y.size()));
                    const auto report = validate_trail_partition(loaded.graph, ts);
                    if (!report.ok()) {
                        err << sol_trails << ": not a trail partition of the graph: " << report.summary() << '\n';
                        return 2;
                    }
                    result = solve_gfl(ts, problem, cfg);
                } else {
                    const DecompositionStrategy strategy{strategy_of(sol_strategy),
                                                         resolve_seed(sol_seed, err)};
                    if (strategy.kind == StrategyKind::GridRowsCols && !loaded.dims) {
                        throw UsageError("strategy rowscols needs --grid");
                    }
                    result = solve_gfl(loaded.graph, problem, strategy, cfg, loaded.dims);
                }
            }
            const auto& diag = result.diagnostics;
            emit(sol_out_beta, out, [&](std::ostream& o) { io::write_vector_csv(o, result.beta); });
            if (!sol_out_diag.empty()) {
                emit(sol_out_diag, out, [&](std::ostream& o) {
                    o << (sol_method == "spg" ? "iter,step_change,grad_norm,eta,objective\n"
                                              : "iter,r_norm,s_norm,alpha,objective\n");
                    o << std::setprecision(12);
                    for (const auto& h : diag.history) {
                        o << h.iter << ',' << h.r_norm << ',' << h.s_norm << ',' << h.alpha << ','
                          << h.objective << '\n';
                    }
                });
            }
            err << "steps " << diag.steps << ", objective " << std::setprecision(12) << diag.objective
                << ", " << diag.seconds << " s" << (diag.converged ? "" : ", NOT converged") << '\n';
            return diag.converged ? 0 : 2;
        }

        if (*bench_grid) {
            const Graph g = synth::grid_graph(grid_n, grid_n);
            return run_bench(g, Dims{grid_n, grid_n}, "grid" + std::to_string(grid_n), grid_flags,
                             resolve_seed(grid_flags.seed, err), threads, out, err);
        }
        if (*bench_random) {
            const std::uint64_t seed = resolve_seed(random_flags.seed, err);
            const Graph g = synth::random_sparse_graph(random_n, sparsity, seed);
            err << "random graph: " << g.n_vertices() << " vertices, " << g.n_edges() << " edges\n";
            return run_bench(g, std::nullopt, "random" + std::to_string(random_n), random_flags, seed,
                             threads, out, err);
        }
        if (*bench_file) {
            const Graph g = io::read_graph(bench_path);
            return run_bench(g, std::nullopt, std::filesystem::path(bench_path).stem().string(), file_flags,
                             resolve_seed(file_flags.seed, err), threads, out, err);
        }
        if (*bench_halving) {
            const std::uint64_t seed = resolve_seed(halving_flags.seed, err);
            const auto cfg = bench_config(halving_flags, seed, threads);
            const auto levels =
                synth::trail_halving_experiment(halving_n, halving_n, halving_levels, halving_flags.trials, cfg);
            emit(halving_flags.out, out, [&](std::ostream& o) { synth::write_halving_csv(o, levels); });
            for (const auto& l : levels) {
                err << "level " << l.level << ": " << l.stats.count << " trails, mean steps " << l.mean_steps
                    << " (+/- " << l.stderr_steps << ")\n";
            }
            return 0;
        }

        if (*validate_cmd) {
            const auto loaded = load_graph(val_src);
            const TrailSet ts = io::read_trails(val_trails, loaded.graph.n_vertices());
            const auto report = validate_trail_partition(loaded.graph, ts);
            out << report.summary() << '\n';
            return report.ok() ? 0 : 2;
        }

        if (*convert_cmd) {
            const Graph g = io::read_graph(conv_in);
            if (std::filesystem::path(conv_out).extension() == ".mtx") {
                io::write_matrix_market_adjacency(std::filesystem::path(conv_out), g);
            } else {
                io::write_edge_list(std::filesystem::path(conv_out), g);
            }
            err << conv_in << " -> " << conv_out << ": " << g.n_vertices() << " vertices, " << g.n_edges()
                << " edges\n";
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e);
    }
    return 1;
}

} // namespace gfl::cli
