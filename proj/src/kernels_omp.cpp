#include <omp.h>

#include <exception>

#include "nifront/errors.hpp"
#include "nifront/kernels.hpp"

namespace nifront {

std::vector<Tally> simulate_cells_parallel(std::span<const CellSpec> cells, const SampleSize& n, std::int64_t reps,
                                           const StreamKey& key, std::size_t rules, const TrialEvaluator& evaluate,
                                           int threads) {
    if (reps <= 0) {
        fail(ErrorKind::InvalidArgument, "replication count must be positive");
    }
    const std::int64_t chunks = detail::chunk_count(reps);
    const std::int64_t units = static_cast<std::int64_t>(cells.size()) * chunks;
    std::vector<Tally> partial(static_cast<std::size_t>(units), Tally(rules));

    for (const CellSpec& cell : cells) {
        (void)Risk(cell.pi0);
        (void)Risk(cell.pi1);
    }

    // Exceptions must not escape the parallel region; keep the first one.
    std::exception_ptr error;
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
    for (std::int64_t u = 0; u < units; ++u) {
        const auto c = static_cast<std::size_t>(u / chunks);
        const std::int64_t k = u % chunks;
        try {
            partial[static_cast<std::size_t>(u)] = detail::run_chunk(cells[c], c, k, n, reps, key, rules, evaluate);
        } catch (...) {
#pragma omp critical(nifront_kernel_error)
            if (!error) {
                error = std::current_exception();
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    std::vector<Tally> out;
    out.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        Tally total(rules);
        for (std::int64_t k = 0; k < chunks; ++k) {
            total.merge(partial[c * static_cast<std::size_t>(chunks) + static_cast<std::size_t>(k)]);
        }
        out.push_back(std::move(total));
    }
    return out;
}

}  // namespace nifront
