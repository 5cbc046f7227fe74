#include <cmath>

#include "nifront/errors.hpp"
#include "nifront/sim.hpp"

namespace nifront {

Risk null_active_risk(Risk pi0, const Frontier& f) {
    if (f.shape() != Shape::PowerStabilising) {
        fail(ErrorKind::InvalidArgument, "boundary null is defined on the power-stabilising frontier");
    }
    return f.tolerable_active_risk(pi0);
}

SampleSize scenario_sample_size(const ScenarioSpec& scenario) { return sample_size(scenario.design, scenario.scale); }

namespace {

std::vector<Tally> dispatch(std::span<const CellSpec> cells, const SampleSize& n, std::int64_t reps,
                            const StreamKey& key, std::size_t rules, const TrialEvaluator& evaluate,
                            const GridOptions& options) {
    if (options.execution == Execution::Serial) {
        return simulate_cells_serial(cells, n, reps, key, rules, evaluate);
    }
    return simulate_cells_parallel(cells, n, reps, key, rules, evaluate, options.threads);
}

GridResult summarise(const CellSpec& cell, const Tally& t, std::size_t rule, Hypothesis h) {
    GridResult g;
    g.pi0 = cell.pi0;
    g.pi1 = cell.pi1;
    g.reps = t.reps;
    g.hypothesis = h;
    const double reps = static_cast<double>(t.reps);
    g.rejection_rate = static_cast<double>(t.rejections[rule]) / reps;
    g.mc_se = std::sqrt(g.rejection_rate * (1.0 - g.rejection_rate) / reps);
    g.modification_rate = static_cast<double>(t.modified) / reps;
    g.degenerate_rate = static_cast<double>(t.degenerate) / reps;
    const auto analysed = t.reps - static_cast<std::int64_t>(t.degenerate);
    g.mean_alpha = analysed > 0 ? t.alpha_sum / static_cast<double>(analysed) : 0.0;
    return g;
}

std::vector<CellSpec> make_cells(const Frontier& f, Hypothesis h, std::span<const double> grid) {
    std::vector<CellSpec> cells;
    cells.reserve(grid.size());
    for (double pi0 : grid) {
        const Risk control(pi0);
        const Risk active = h == Hypothesis::Null ? null_active_risk(control, f) : control;
        cells.push_back({control.value(), active.value()});
    }
    return cells;
}

void check_reps(std::int64_t reps) {
    if (reps <= 0) {
        fail(ErrorKind::InvalidArgument, "replication count must be positive");
    }
}

}  // namespace

std::vector<GridResult> run_grid(const ScenarioSpec& scenario, const Procedure& proc, Hypothesis hypothesis,
                                 std::span<const double> grid, std::int64_t reps, std::uint64_t master_seed,
                                 const GridOptions& options) {
    check_reps(reps);
    scenario.design.validate();
    const Frontier f = scenario.design.frontier();
    const Scale scale = scenario.scale;
    const double epsilon = proc.epsilon(scale);
    const AlphaStrategy& strategy = proc.alpha_strategy;
    // An uncovered lookup would silently turn trials into "degenerate" ones.
    (void)strategy.alpha_at(0.0);

    const SampleSize n = options.sample_size.value_or(scenario_sample_size(scenario));
    const std::vector<CellSpec> cells = make_cells(f, hypothesis, grid);

    const TrialEvaluator evaluate = [&](const TrialData& t, Tally& tally) {
        const auto d = conditional_decision(t, f, scale, epsilon, strategy);
        if (!d) {
            ++tally.degenerate;
            return;
        }
        tally.alpha_sum += d->alpha;
        tally.modified += d->modified ? 1 : 0;
        tally.rejections[0] += d->p < d->alpha ? 1 : 0;
    };

    const std::vector<Tally> tallies =
        dispatch(cells, n, reps, StreamKey{master_seed, scenario.id()}, 1, evaluate, options);

    std::vector<GridResult> out;
    out.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out.push_back(summarise(cells[i], tallies[i], 0, hypothesis));
    }
    return out;
}

GridResult simulate_rejection(Risk pi0, Risk pi1, const SampleSize& n, const Decision& decide, std::int64_t reps,
                              std::uint64_t master_seed, std::uint64_t stream_id, const GridOptions& options) {
    check_reps(reps);
    const CellSpec cell{pi0.value(), pi1.value()};
    const TrialEvaluator evaluate = [&](const TrialData& t, Tally& tally) {
        tally.rejections[0] += decide(t) ? 1 : 0;
    };
    const std::vector<Tally> tallies =
        dispatch(std::span<const CellSpec>(&cell, 1), n, reps, StreamKey{master_seed, stream_id}, 1, evaluate, options);
    return summarise(cell, tallies.front(), 0, Hypothesis::Null);
}

}  // namespace nifront
