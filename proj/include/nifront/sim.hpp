#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nifront/kernels.hpp"
#include "nifront/scenario.hpp"

namespace nifront {

/// Active risk on the frontier for a true control risk: the boundary null.
Risk null_active_risk(Risk pi0, const Frontier& f);

/// Operating characteristics at one control risk.
struct GridResult {
    double pi0 = 0.0;
    double pi1 = 0.0;
    double rejection_rate = 0.0;
    double mc_se = 0.0;
    double modification_rate = 0.0;
    double degenerate_rate = 0.0;
    double mean_alpha = 0.0;  ///< average testing level over non-degenerate trials
    std::int64_t reps = 0;
    Hypothesis hypothesis = Hypothesis::Null;

    friend bool operator==(const GridResult&, const GridResult&) = default;
};

enum class Execution { Serial, Parallel };

struct GridOptions {
    Execution execution = Execution::Parallel;
    int threads = 0;  ///< 0: OpenMP default
    /// Replaces the scenario's computed sample size.
    std::optional<SampleSize> sample_size;
};

/// Trial size a scenario is simulated at: the closed-form design on its scale.
SampleSize scenario_sample_size(const ScenarioSpec& scenario);

/// Simulates every grid point under the boundary null (pi1 on the
/// power-stabilising frontier) or the alternative (pi1 = pi0) and analyses
/// each trial with the procedure. Degenerate analyses count as
/// non-rejections and are tallied in degenerate_rate.
std::vector<GridResult> run_grid(const ScenarioSpec& scenario, const Procedure& proc, Hypothesis hypothesis,
                                 std::span<const double> grid, std::int64_t reps, std::uint64_t master_seed,
                                 const GridOptions& options = {});

/// Rejects-or-not for an arbitrary analysis; false on degenerate data is the
/// caller's responsibility.
using Decision = std::function<bool(const TrialData&)>;

/// Monte Carlo rejection probability of an arbitrary decision rule at one
/// (pi0, pi1). Stream identity is (master_seed, stream_id, cell 0).
GridResult simulate_rejection(Risk pi0, Risk pi1, const SampleSize& n, const Decision& decide, std::int64_t reps,
                              std::uint64_t master_seed, std::uint64_t stream_id = 0,
                              const GridOptions& options = {});

/// Sum over all outcome tables of P(e0) P(e1) 1[decide rejects].
/// Throws TooLargeToEnumerate when (n0 + 1)(n1 + 1) exceeds max_tables.
double exact_rejection_probability(Risk pi0, Risk pi1, const SampleSize& n, const Decision& decide,
                                   std::int64_t max_tables = 4'000'000);

/// Null rejection rates of one procedure for several candidate levels at
/// every grid point, from a single set of simulated trials.
struct CalibrationCell {
    double pi0 = 0.0;
    std::vector<double> rates;   ///< one per candidate
    std::vector<double> mc_se;   ///< one per candidate
    double modification_rate = 0.0;
    double degenerate_rate = 0.0;
    std::int64_t reps = 0;
};

struct CalibrationTable {
    std::vector<double> candidates;
    std::vector<CalibrationCell> cells;
};

CalibrationTable calibration_table(const ScenarioSpec& scenario, ProcedureTag tag, std::span<const double> grid,
                                   std::span<const double> candidates, std::int64_t reps,
                                   std::uint64_t master_seed, const GridOptions& options = {});

/// Outcome of choosing a level per grid point.
struct CalibrationChoice {
    std::vector<double> chosen;      ///< per cell; NaN where nothing qualifies
    std::vector<double> uncontrollable;  ///< pi0 of cells with no qualifying candidate
};

/// Largest candidate whose null rate is at most alpha_design + slack * mc_se.
CalibrationChoice choose_alphas(const CalibrationTable& table, double alpha_design, double slack = 0.0);

/// Compresses per-cell choices into a lookup keyed on observed control risk:
/// the first row starts at 0 and a new row starts at each grid point where
/// the chosen level changes.
AlphaStrategy compress_lookup(std::span<const double> grid, std::span<const double> chosen);

/// calibration_table + choose_alphas + compress_lookup. Throws
/// UncontrollableCell naming every offending grid point.
AlphaStrategy calibrate_alpha(const ScenarioSpec& scenario, ProcedureTag tag, std::span<const double> grid,
                              std::span<const double> candidates, std::int64_t reps, std::uint64_t master_seed,
                              double slack = 0.0, const GridOptions& options = {});

}  // namespace nifront
