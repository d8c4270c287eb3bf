#include "gfl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <queue>
#include <random>
#include <unordered_set>

#include "gfl/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gfl::synth {

Graph grid_graph(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, "grid needs rows, cols >= 1");
    std::vector<Edge> edges;
    edges.reserve(rows * (cols - 1) + cols * (rows - 1));
    const auto id = [cols](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
        }
    }
    return Graph(rows * cols, std::move(edges));
}

Graph random_sparse_graph(std::size_t n, double target_sparsity, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "random graph needs n >= 2");
    if (!(target_sparsity > 0.0 && target_sparsity < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "sparsity must lie in (0, 1)");
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const auto target = static_cast<std::size_t>(std::llround((1.0 - target_sparsity) * pairs));
    if (target < n - 1) {
        throw Error(ErrorCode::DensityBelowTree,
                    "sparsity " + std::to_string(target_sparsity) + " gives " +
                        std::to_string(target) + " edges, fewer than a spanning tree's " +
                        std::to_string(n - 1));
    }

    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    edges.reserve(target);
    std::unordered_set<std::uint64_t> present;
    present.reserve(target * 2);
    const auto key = [](VertexId a, VertexId b) {
        return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
    };

    // decode a uniform Pruefer sequence: a uniform spanning tree of K_n
    if (n == 2) {
        edges.push_back({0, 1});
    } else {
        std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
        std::vector<VertexId> code(n - 2);
        for (auto& c : code) c = pick(rng);
        std::vector<std::size_t> degree(n, 1);
        for (const auto c : code) ++degree[c];
        std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> leaves;
        for (VertexId v = 0; v < n; ++v) {
            if (degree[v] == 1) leaves.push(v);
        }
        for (const auto c : code) {
            const VertexId leaf = leaves.top();
            leaves.pop();
            edges.push_back({leaf, c});
            if (--degree[c] == 1) leaves.push(c);
        }
        const VertexId a = leaves.top();
        leaves.pop();
        edges.push_back({a, leaves.top()});
    }
    for (const auto& e : edges) present.insert(key(e.u, e.v));

    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    while (edges.size() < target) {
        const VertexId a = pick(rng);
        const VertexId b = pick(rng);
        if (a == b || !present.insert(key(a, b)).second) continue;
        edges.push_back({a, b});
    }
    return Graph(n, std::move(edges));
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
    const auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return mix(master_seed ^ mix(trial_index));
}

BlobSignal blob_signal(const Graph& g, const BlobSpec& spec) {
    const std::size_t n = g.n_vertices();
    if (spec.n_blobs > 0 && !(spec.blob_fraction > 0.0 &&
                              spec.blob_fraction <= 1.0 / static_cast<double>(spec.n_blobs))) {
        throw Error(ErrorCode::InvalidArgument, "blob fraction must lie in (0, 1/n_blobs]");
    }
    if (!spec.means.empty() && spec.means.size() != spec.n_blobs) {
        throw Error(ErrorCode::InvalidArgument, "one mean per blob required");
    }
    const auto size = static_cast<std::size_t>(std::ceil(spec.blob_fraction * static_cast<double>(n)));
    if (spec.n_blobs * size > n) {
        throw Error(ErrorCode::BlobsDontFit, std::to_string(spec.n_blobs) + " blobs of " +
                                                 std::to_string(size) + " vertices exceed " +
                                                 std::to_string(n));
    }

    std::mt19937_64 rng(spec.seed);
    BlobSignal out;
    out.ground_truth.assign(n, 0.0);
    std::vector<double> means = spec.means;
    if (means.empty()) {
        std::uniform_real_distribution<double> mean_dist(-5.0, 5.0);
        for (std::size_t b = 0; b < spec.n_blobs; ++b) means.push_back(mean_dist(rng));
    }

    std::vector<std::uint8_t> claimed(n, 0);
    std::size_t n_claimed = 0;
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n == 0 ? 0 : n - 1));
    for (std::size_t b = 0; b < spec.n_blobs; ++b) {
        std::vector<VertexId> ball;
        for (int attempt = 0; attempt < 1000 && ball.size() < size; ++attempt) {
            if (n_claimed == n) break;
            VertexId root = pick(rng);
            while (claimed[root]) root = pick(rng);
            ball.assign({root});
            std::vector<std::uint8_t> in_ball(n, 0);
            in_ball[root] = 1;
            for (std::size_t head = 0; head < ball.size() && ball.size() < size; ++head) {
                for (const auto& inc : g.neighbors(ball[head])) {
                    if (claimed[inc.neighbor] || in_ball[inc.neighbor]) continue;
                    in_ball[inc.neighbor] = 1;
                    ball.push_back(inc.neighbor);
                    if (ball.size() == size) break;
                }
            }
        }
        if (ball.size() < size) {
            throw Error(ErrorCode::BlobsDontFit,
                        "could not grow blob " + std::to_string(b) + " to " + std::to_string(size) +
                            " connected unclaimed vertices");
        }
        for (const VertexId v : ball) {
            claimed[v] = 1;
            out.ground_truth[v] = means[b];
        }
        n_claimed += ball.size();
        out.blobs.push_back(std::move(ball));
    }

    out.y = out.ground_truth;
    if (spec.noise_sd > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise_sd);
        for (auto& yi : out.y) yi += noise(rng);
    }
    return out;
}

StrategySummary summarize(const std::string& name, const std::vector<double>& steps) {
    StrategySummary s;
    s.strategy = name;
    s.trials = steps.size();
    if (steps.empty()) return s;
    double sum = 0.0;
    for (const double x : steps) sum += x;
    s.mean_steps = sum / static_cast<double>(steps.size());
    if (steps.size() > 1) {
        double ss = 0.0;
        for (const double x : steps) ss += (x - s.mean_steps) * (x - s.mean_steps);
        const double sd = std::sqrt(ss / static_cast<double>(steps.size() - 1));
        s.stderr_steps = sd / std::sqrt(static_cast<double>(steps.size()));
    }
    return s;
}

BenchReport run_trials(const Graph& g, const std::vector<NamedTrails>& trail_sets,
                       std::size_t n_trials, const BenchConfig& config) {
    const std::size_t k = trail_sets.size();
    BenchReport report;
    report.results.resize(n_trials * k);

    SolverConfig solver = config.solver;
#ifdef _OPENMP
    const int workers = config.threads == 0 ? omp_get_max_threads() : static_cast<int>(config.threads);
#else
    const int workers = 1;
#endif
    const bool parallel_trials = workers > 1 && n_trials > 1;
    if (parallel_trials) solver.threads = 1;

    const auto n = static_cast<std::ptrdiff_t>(n_trials);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (parallel_trials)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        const auto trial = static_cast<std::size_t>(t);
        const std::uint64_t seed = trial_seed(config.master_seed, trial);
        BlobSpec spec = config.blobs;
        spec.seed = seed;
        std::vector<double> y;
        std::string failure;
        try {
            y = blob_signal(g, spec).y;
        } catch (const Error& e) {
            failure = e.what();
        }
        for (std::size_t s = 0; s < k; ++s) {
            TrialResult& r = report.results[trial * k + s];
            r.graph = config.graph_name;
            r.strategy = trail_sets[s].name;
            r.trial = trial;
            r.seed = seed;
            if (!failure.empty()) {
                r.error = failure;
                continue;
            }
            try {
                const auto solved = solve_gfl(trail_sets[s].trails, {y, config.lambda, SquaredLoss{}}, solver);
                r.steps = solved.diagnostics.steps;
                r.seconds = solved.diagnostics.seconds;
                r.objective = solved.diagnostics.objective;
                r.converged = solved.diagnostics.converged;
            } catch (const Error& e) {
                r.error = e.what();
            }
        }
    }

    for (std::size_t s = 0; s < k; ++s) {
        std::vector<double> steps;
        for (std::size_t t = 0; t < n_trials; ++t) {
            const auto& r = report.results[t * k + s];
            if (r.error.empty()) steps.push_back(static_cast<double>(r.steps));
        }
        report.summaries.push_back(summarize(trail_sets[s].name, steps));
    }
    return report;
}

BenchReport run_trials(const Graph& g, const std::vector<DecompositionStrategy>& strategies,
                       std::size_t n_trials, const BenchConfig& config) {
    std::vector<NamedTrails> sets;
    sets.reserve(strategies.size());
    for (const auto& s : strategies) {
        sets.push_back({std::string(to_string(s.kind)), decompose(g, s, config.grid_dims)});
    }
    return run_trials(g, sets, n_trials, config);
}

std::vector<HalvingLevel> trail_halving_experiment(std::size_t rows, std::size_t cols,
                                                   std::size_t n_halvings, std::size_t trials,
                                                   const BenchConfig& config) {
    if (n_halvings < 1) throw Error(ErrorCode::InvalidArgument, "need at least one halving");
    const Graph g = grid_graph(rows, cols);
    std::vector<NamedTrails> sets;
    TrailSet current = decompose_grid_rows_cols(rows, cols);
    for (std::size_t level = 0; level <= n_halvings; ++level) {
        sets.push_back({"level" + std::to_string(level), current});
        current = halve_trails(current);
    }
    BenchConfig cfg = config;
    cfg.grid_dims = std::make_pair(rows, cols);
    const BenchReport report = run_trials(g, sets, trials, cfg);

    std::vector<HalvingLevel> levels;
    for (std::size_t level = 0; level <= n_halvings; ++level) {
        HalvingLevel h;
        h.level = level;
        h.stats = trail_stats(sets[level].trails);
        h.mean_steps = report.summaries[level].mean_steps;
        h.stderr_steps = report.summaries[level].stderr_steps;
        for (std::size_t t = 0; t < trials; ++t) {
            h.steps.push_back(report.results[t * sets.size() + level].steps);
        }
        levels.push_back(std::move(h));
    }
    return levels;
}

void write_results_csv(std::ostream& out, const std::vector<TrialResult>& results) {
    out << "graph,strategy,trial,steps,seconds,objective,converged\n";
    const auto old_precision = out.precision(12);
    for (const auto& r : results) {
        out << r.graph << ',' << r.strategy << ',' << r.trial << ',' << r.steps << ','
            << r.seconds << ',' << r.objective << ',' << (r.converged ? 1 : 0) << '\n';
    }
    out.precision(old_precision);
}

void write_summary_csv(std::ostream& out, const std::vector<StrategySummary>& summaries) {
    out << "strategy,trials,mean_steps,stderr_steps\n";
    for (const auto& s : summaries) {
        out << s.strategy << ',' << s.trials << ',' << s.mean_steps << ',' << s.stderr_steps << '\n';
    }
}

void write_halving_csv(std::ostream& out, const std::vector<HalvingLevel>& levels) {
    out << "level,trails,mean_length,mean_steps,stderr_steps\n";
    for (const auto& h : levels) {
        out << h.level << ',' << h.stats.count << ',' << h.stats.mean_length << ','
            << h.mean_steps << ',' << h.stderr_steps << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const std::vector<NamedTrails>& trail_sets) {
    out << "strategy,length,count\n";
    for (const auto& set : trail_sets) {
        const auto stats = trail_stats(set.trails);
        for (std::size_t m = 0; m < stats.histogram.size(); ++m) {
            if (stats.histogram[m] > 0) out << set.name << ',' << m << ',' << stats.histogram[m] << '\n';
        }
    }
}

} // namespace gfl::synth
