#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nifront/errors.hpp"
#include "nifront/sim.hpp"

namespace nifront {

CalibrationTable calibration_table(const ScenarioSpec& scenario, ProcedureTag tag, std::span<const double> grid,
                                   std::span<const double> candidates, std::int64_t reps,
                                   std::uint64_t master_seed, const GridOptions& options) {
    if (candidates.empty()) {
        fail(ErrorKind::InvalidArgument, "no candidate levels");
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!(candidates[i] > 0.0 && candidates[i] <= scenario.design.alpha)) {
            fail(ErrorKind::InvalidArgument, "candidate levels must lie in (0, design alpha]");
        }
        if (i > 0 && !(candidates[i] > candidates[i - 1])) {
            fail(ErrorKind::InvalidArgument, "candidate levels must be strictly ascending");
        }
    }
    if (reps <= 0) {
        fail(ErrorKind::InvalidArgument, "replication count must be positive");
    }
    scenario.design.validate();

    const Frontier f = scenario.design.frontier();
    const Scale scale = scenario.scale;
    const Procedure proc{tag, AlphaStrategy::nominal(scenario.design.alpha)};
    const double epsilon = proc.epsilon(scale);
    const SampleSize n = options.sample_size.value_or(scenario_sample_size(scenario));

    std::vector<CellSpec> cells;
    for (double pi0 : grid) {
        cells.push_back({pi0, null_active_risk(Risk(pi0), f).value()});
    }

    // Every candidate sees the same simulated trials; only the cut-off differs.
    const std::vector<double> levels(candidates.begin(), candidates.end());
    const TrialEvaluator evaluate = [&](const TrialData& t, Tally& tally) {
        const auto d = conditional_decision(t, f, scale, epsilon, proc.alpha_strategy);
        if (!d) {
            ++tally.degenerate;
            return;
        }
        tally.modified += d->modified ? 1 : 0;
        for (std::size_t k = 0; k < levels.size(); ++k) {
            tally.rejections[k] += d->p < levels[k] ? 1 : 0;
        }
    };
    const StreamKey key{master_seed, scenario.id()};
    const std::vector<Tally> tallies =
        options.execution == Execution::Serial
            ? simulate_cells_serial(cells, n, reps, key, levels.size(), evaluate)
            : simulate_cells_parallel(cells, n, reps, key, levels.size(), evaluate, options.threads);

    CalibrationTable table;
    table.candidates = levels;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Tally& t = tallies[i];
        const double r = static_cast<double>(t.reps);
        CalibrationCell cell;
        cell.pi0 = cells[i].pi0;
        cell.reps = t.reps;
        cell.modification_rate = static_cast<double>(t.modified) / r;
        cell.degenerate_rate = static_cast<double>(t.degenerate) / r;
        for (std::uint64_t hits : t.rejections) {
            const double rate = static_cast<double>(hits) / r;
            cell.rates.push_back(rate);
            cell.mc_se.push_back(std::sqrt(rate * (1.0 - rate) / r));
        }
        table.cells.push_back(std::move(cell));
    }
    return table;
}

CalibrationChoice choose_alphas(const CalibrationTable& table, double alpha_design, double slack) {
    if (!(slack >= 0.0)) {
        fail(ErrorKind::InvalidArgument, "slack must be non-negative");
    }
    CalibrationChoice choice;
    for (const CalibrationCell& cell : table.cells) {
        double best = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t k = 0; k < table.candidates.size(); ++k) {
            if (cell.rates[k] <= alpha_design + slack * cell.mc_se[k]) {
                best = table.candidates[k];
            }
        }
        if (std::isnan(best)) {
            choice.uncontrollable.push_back(cell.pi0);
        }
        choice.chosen.push_back(best);
    }
    return choice;
}

AlphaStrategy compress_lookup(std::span<const double> grid, std::span<const double> chosen) {
    if (grid.size() != chosen.size() || grid.empty()) {
        fail(ErrorKind::InvalidArgument, "grid and chosen levels must be non-empty and aligned");
    }
    std::vector<AlphaStrategy::Breakpoint> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            fail(ErrorKind::InvalidArgument, "grid must be strictly increasing");
        }
        if (rows.empty()) {
            rows.push_back({0.0, chosen[i]});
        } else if (chosen[i] != rows.back().alpha) {
            rows.push_back({grid[i], chosen[i]});
        }
    }
    return AlphaStrategy::lookup(std::move(rows));
}

AlphaStrategy calibrate_alpha(const ScenarioSpec& scenario, ProcedureTag tag, std::span<const double> grid,
                              std::span<const double> candidates, std::int64_t reps, std::uint64_t master_seed,
                              double slack, const GridOptions& options) {
    const CalibrationTable table = calibration_table(scenario, tag, grid, candidates, reps, master_seed, options);
    const CalibrationChoice choice = choose_alphas(table, scenario.design.alpha, slack);
    if (!choice.uncontrollable.empty()) {
        std::ostringstream msg;
        msg << "no candidate level keeps the null rejection rate within target at pi0 =";
        for (double p : choice.uncontrollable) {
            msg << ' ' << p;
        }
        fail(ErrorKind::UncontrollableCell, msg.str());
    }
    return compress_lookup(grid, choice.chosen);
}

}  // namespace nifront
