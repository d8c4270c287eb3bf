#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfl/graph.hpp"

namespace gfl {

enum class StrategyKind { PseudoTour, MedianTrails, RandomTrails, EdgeWise, GridRowsCols };

std::string_view to_string(StrategyKind kind) noexcept;

/* Accepts the canonical CLI names: pseudotour, medians, random, edges, rowscols. */
std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept;

struct DecompositionStrategy {
    StrategyKind kind = StrategyKind::PseudoTour;
    std::uint64_t seed = 0;
    /* Max odd-vertex pairs evaluated per iteration of the path-removal
     * heuristics; larger candidate sets are sampled without replacement. */
    std::size_t pair_sample_cap = 1000;
};

struct TrailStats {
    std::size_t count = 0;
    std::size_t min_length = 0;
    double median_length = 0.0;
    double mean_length = 0.0;
    std::size_t max_length = 0;
    double variance = 0.0;
    /* histogram[m] = number of trails with exactly m edges */
    std::vector<std::size_t> histogram;
};

/* Pair odd vertices (randomly, non-adjacent when possible), join each pair
 * with a pseudo-edge, walk one Euler circuit and cut it at every pseudo-edge.
 * The circuit runs over a seeded random edge order. Yields exactly
 * max(1, #odd / 2) trails. Throws Disconnected. */
TrailSet decompose_pseudo_tour(const Graph& g, std::uint64_t seed);

/* Repeatedly remove the median-length shortest path among odd-vertex pairs;
 * finish components with 0 or 2 odd vertices by an Euler circuit/trail. */
TrailSet decompose_median_trails(const Graph& g, std::uint64_t seed,
                                 std::size_t pair_sample_cap = 1000);

/* As decompose_median_trails, but the removed path is picked uniformly. */
TrailSet decompose_random_trails(const Graph& g, std::uint64_t seed,
                                 std::size_t pair_sample_cap = 1000);

TrailSet decompose_edge_wise(const Graph& g);

/* Rows then columns of a grid labelled as by grid_graph(rows, cols). */
TrailSet decompose_grid_rows_cols(std::size_t rows, std::size_t cols);

/* Dispatches on strategy.kind. GridRowsCols requires `grid_dims`. */
TrailSet decompose(const Graph& g, const DecompositionStrategy& strategy,
                   std::optional<std::pair<std::size_t, std::size_t>> grid_dims = std::nullopt);

/* Split every trail of length m >= 2 at edge floor(m/2). */
TrailSet halve_trails(const TrailSet& ts);

TrailStats trail_stats(const TrailSet& ts);

} // namespace gfl
