#include <exception>

#include <omp.h>

#include "rebel/bench.hpp"

namespace rebel::bench {

std::vector<TrialOutcome> run_trials_serial(std::size_t n, const TrialFn& fn) {
    std::vector<TrialOutcome> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
}

std::vector<TrialOutcome> run_trials(std::size_t n, const TrialFn& fn, std::size_t workers) {
    std::vector<TrialOutcome> out(n);
    std::vector<std::exception_ptr> errors(n);
    const int threads = workers == 0 ? omp_get_max_threads() : static_cast<int>(workers);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = fn(k);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace rebel::bench
