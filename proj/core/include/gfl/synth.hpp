#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfl/graph.hpp"
#include "gfl/solver.hpp"
#include "gfl/trails.hpp"

namespace gfl::synth {

/* 4-neighbour lattice, vertex r * cols + c. Edges are listed vertex by vertex
 * in row-major order, each vertex adding its right then its down edge; the
 * rows+cols trails use the same ids. */
Graph grid_graph(std::size_t rows, std::size_t cols);

/* Uniform random spanning tree (Pruefer code) plus uniform extra edges up to
 * round((1 - sparsity) * n (n - 1) / 2). Throws DensityBelowTree. */
Graph random_sparse_graph(std::size_t n, double target_sparsity, std::uint64_t seed);

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept;

struct BlobSpec {
    std::size_t n_blobs = 4;
    double blob_fraction = 0.05;
    /* empty: draw each mean uniformly from [-5, 5] */
    std::vector<double> means;
    double noise_sd = 1.0;
    std::uint64_t seed = 0;
};

struct BlobSignal {
    std::vector<double> y;
    std::vector<double> ground_truth;
    std::vector<std::vector<VertexId>> blobs;
};

/* Background 0; each blob is a breadth-first ball of ceil(fraction * n)
 * unclaimed vertices grown from a random unclaimed seed. Throws BlobsDontFit. */
BlobSignal blob_signal(const Graph& g, const BlobSpec& spec);

struct TrialResult {
    std::string graph;
    std::string strategy;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t steps = 0;
    double seconds = 0.0;
    double objective = 0.0;
    bool converged = false;
    std::string error;
};

struct StrategySummary {
    std::string strategy;
    std::size_t trials = 0;
    double mean_steps = 0.0;
    double stderr_steps = 0.0;
};

struct BenchConfig {
    std::string graph_name = "graph";
    double lambda = 1.0;
    BlobSpec blobs;
    std::uint64_t master_seed = 0;
    SolverConfig solver;
    std::optional<std::pair<std::size_t, std::size_t>> grid_dims;
    /* 0 = all cores; trials run concurrently when > 1 */
    std::size_t threads = 1;
};

struct NamedTrails {
    std::string name;
    TrailSet trails;
};

struct BenchReport {
    std::vector<TrialResult> results;  // ordered by (trial, strategy)
    std::vector<StrategySummary> summaries;
};

/* Mean and standard error (sample sd / sqrt(count)). */
StrategySummary summarize(const std::string& name, const std::vector<double>& steps);

/* Each trial draws a fresh blob signal seeded by trial_seed(master, trial)
 * and solves it with every trail set. */
BenchReport run_trials(const Graph& g, const std::vector<NamedTrails>& trail_sets,
                       std::size_t n_trials, const BenchConfig& config);

/* Decomposes once per strategy (with the strategy's own seed), then runs
 * run_trials. */
BenchReport run_trials(const Graph& g, const std::vector<DecompositionStrategy>& strategies,
                       std::size_t n_trials, const BenchConfig& config);

struct HalvingLevel {
    std::size_t level = 0;
    TrailStats stats;
    double mean_steps = 0.0;
    double stderr_steps = 0.0;
    std::vector<std::size_t> steps;  // per trial
};

/* Rows+cols trails on a rows x cols grid, halved n_halvings times; every
 * level solves the same blob instances. Returns levels 0..n_halvings. */
std::vector<HalvingLevel> trail_halving_experiment(std::size_t rows, std::size_t cols,
                                                   std::size_t n_halvings, std::size_t trials,
                                                   const BenchConfig& config);

void write_results_csv(std::ostream& out, const std::vector<TrialResult>& results);
void write_summary_csv(std::ostream& out, const std::vector<StrategySummary>& summaries);
void write_halving_csv(std::ostream& out, const std::vector<HalvingLevel>& levels);
/* columns: strategy, length, count */
void write_histogram_csv(std::ostream& out, const std::vector<NamedTrails>& trail_sets);

} // namespace gfl::synth
