#ifndef QBM_SWEEP_HPP
#define QBM_SWEEP_HPP

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qbm {

enum class SweepVariable { TauOverX, SigmaOverX };
enum class SweepScale { Linear, Log };

// Dimensionless sweep axis for curves and tables.
struct SweepGrid {
    SweepVariable variable = SweepVariable::TauOverX;
    double start = 0.05;
    double stop = 4.0;
    int count = 200;
    SweepScale scale = SweepScale::Linear;

    void validate() const {
        if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop))
            throw std::domain_error("SweepGrid: need finite start < stop");
        if (count < 2) throw std::domain_error("SweepGrid: count must be >= 2");
        if (scale == SweepScale::Log && !(start > 0.0))
            throw std::domain_error("SweepGrid: log scale needs start > 0");
    }

    // Endpoints are hit exactly; log spacing is uniform in ln.
    std::vector<double> points() const {
        validate();
        std::vector<double> pts(static_cast<std::size_t>(count));
        const double n = static_cast<double>(count - 1);
        if (scale == SweepScale::Linear) {
            for (int i = 0; i < count; ++i)
                pts[static_cast<std::size_t>(i)] = start + (stop - start) * (i / n);
        } else {
            const double la = std::log(start), lb = std::log(stop);
            for (int i = 0; i < count; ++i)
                pts[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * (i / n));
        }
        pts.front() = start;
        pts.back() = stop;
        return pts;
    }
};

// Runs fn(i) for i in [0, n) across threads. Each index owns its output slot,
// so results stay deterministically ordered; the first exception wins and is
// rethrown after all workers join.
template <class Fn>
void parallel_for_index(std::size_t n, Fn&& fn) {
    if (n == 0) return;
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<unsigned>(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qbm

#endif  // QBM_SWEEP_HPP
