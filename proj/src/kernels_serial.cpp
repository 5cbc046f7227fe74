#include <algorithm>

#include "nifront/errors.hpp"
#include "nifront/kernels.hpp"

namespace nifront {

Rng make_stream(const StreamKey& key, std::uint64_t cell, std::uint64_t chunk) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(key.master_seed), hi(key.master_seed), lo(key.scenario_id), hi(key.scenario_id),
                      lo(cell),            hi(cell),            lo(chunk),           hi(chunk)};
    return Rng(seq);
}

namespace {

std::int64_t draw_binomial(std::int64_t n, double p, Rng& rng) {
    if (p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return n;
    }
    std::binomial_distribution<std::int64_t> dist(n, p);
    return dist(rng);
}

}  // namespace

TrialData generate_trial(Risk pi0, Risk pi1, const SampleSize& n, Rng& rng) {
    const std::int64_t e0 = draw_binomial(n.n0, pi0.value(), rng);
    const std::int64_t e1 = draw_binomial(n.n1, pi1.value(), rng);
    return TrialData(n.n0, n.n1, e0, e1);
}

void Tally::merge(const Tally& other) {
    for (std::size_t i = 0; i < rejections.size(); ++i) {
        rejections[i] += other.rejections[i];
    }
    modified += other.modified;
    degenerate += other.degenerate;
    alpha_sum += other.alpha_sum;
    reps += other.reps;
}

namespace detail {

std::int64_t chunk_count(std::int64_t reps) noexcept { return (reps + kChunkReps - 1) / kChunkReps; }

Tally run_chunk(const CellSpec& cell, std::uint64_t cell_index, std::int64_t chunk, const SampleSize& n,
                std::int64_t reps, const StreamKey& key, std::size_t rules, const TrialEvaluator& evaluate) {
    const std::int64_t begin = chunk * kChunkReps;
    const std::int64_t count = std::min(kChunkReps, reps - begin);
    Rng rng = make_stream(key, cell_index, static_cast<std::uint64_t>(chunk));
    const Risk pi0(cell.pi0);
    const Risk pi1(cell.pi1);

    Tally tally(rules);
    tally.reps = count;
    if (pi0.value() > 0.0 && pi0.value() < 1.0 && pi1.value() > 0.0 && pi1.value() < 1.0) {
        // Hoist distribution setup out of the replication loop.
        std::binomial_distribution<std::int64_t> d0(n.n0, pi0.value());
        std::binomial_distribution<std::int64_t> d1(n.n1, pi1.value());
        for (std::int64_t r = 0; r < count; ++r) {
            const std::int64_t e0 = d0(rng);
            const std::int64_t e1 = d1(rng);
            evaluate(TrialData(n.n0, n.n1, e0, e1), tally);
        }
    } else {
        for (std::int64_t r = 0; r < count; ++r) {
            evaluate(generate_trial(pi0, pi1, n, rng), tally);
        }
    }
    return tally;
}

}  // namespace detail

std::vector<Tally> simulate_cells_serial(std::span<const CellSpec> cells, const SampleSize& n, std::int64_t reps,
                                         const StreamKey& key, std::size_t rules, const TrialEvaluator& evaluate) {
    if (reps <= 0) {
        fail(ErrorKind::InvalidArgument, "replication count must be positive");
    }
    std::vector<Tally> out;
    out.reserve(cells.size());
    const std::int64_t chunks = detail::chunk_count(reps);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        Tally total(rules);
        for (std::int64_t k = 0; k < chunks; ++k) {
            total.merge(detail::run_chunk(cells[c], c, k, n, reps, key, rules, evaluate));
        }
        out.push_back(std::move(total));
    }
    return out;
}

}  // namespace nifront
