#pragma once

// Monte Carlo kernels. Work is split into (cell, chunk) units; each unit owns
// a random stream derived from (master seed, scenario id, cell index, chunk
// index) and a private tally. Tallies are reduced in (cell, chunk) order, so
// the serial reference and the OpenMP driver return identical bits.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "nifront/analysis.hpp"
#include "nifront/design.hpp"

namespace nifront {

/// Replications per random stream. Part of the reproducibility contract:
/// changing it changes every simulated number.
inline constexpr std::int64_t kChunkReps = 10000;

using Rng = std::mt19937_64;

struct StreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t scenario_id = 0;
};

/// Generator for one (cell, chunk) unit.
Rng make_stream(const StreamKey& key, std::uint64_t cell, std::uint64_t chunk);

/// One simulated trial: independent binomial arms.
TrialData generate_trial(Risk pi0, Risk pi1, const SampleSize& n, Rng& rng);

/// True data-generating risks for one grid cell.
struct CellSpec {
    double pi0 = 0.0;
    double pi1 = 0.0;
};

/// Accumulators for one unit of work. `rejections` has one slot per decision
/// rule the evaluator tracks.
struct Tally {
    std::vector<std::uint64_t> rejections;
    std::uint64_t modified = 0;
    std::uint64_t degenerate = 0;
    double alpha_sum = 0.0;
    std::int64_t reps = 0;

    explicit Tally(std::size_t rules = 1) : rejections(rules, 0) {}
    void merge(const Tally& other);
};

/// Called once per simulated trial; must only read shared state.
using TrialEvaluator = std::function<void(const TrialData&, Tally&)>;

/// Serial reference: cells in order, chunks in order.
std::vector<Tally> simulate_cells_serial(std::span<const CellSpec> cells, const SampleSize& n, std::int64_t reps,
                                         const StreamKey& key, std::size_t rules, const TrialEvaluator& evaluate);

/// OpenMP driver over all (cell, chunk) units. threads <= 0 uses the OpenMP
/// default.
std::vector<Tally> simulate_cells_parallel(std::span<const CellSpec> cells, const SampleSize& n, std::int64_t reps,
                                           const StreamKey& key, std::size_t rules, const TrialEvaluator& evaluate,
                                           int threads = 0);

namespace detail {

std::int64_t chunk_count(std::int64_t reps) noexcept;
Tally run_chunk(const CellSpec& cell, std::uint64_t cell_index, std::int64_t chunk, const SampleSize& n,
                std::int64_t reps, const StreamKey& key, std::size_t rules, const TrialEvaluator& evaluate);

}  // namespace detail

}  // namespace nifront
