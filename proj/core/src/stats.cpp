#include "tzone/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tzone {

double pairwise_sum(std::span<const double> xs) {
    constexpr std::size_t kBlock = 64;
    if (xs.size() <= kBlock) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

McEstimate estimate(std::span<const double> samples) {
    McEstimate out;
    out.n_paths = samples.size();
    if (samples.empty()) return out;
    const double n = static_cast<double>(samples.size());
    out.mean = pairwise_sum(samples) / n;
    if (samples.size() < 2) return out;
    std::vector<double> sq(samples.size());
    std::transform(samples.begin(), samples.end(), sq.begin(), [&](double x) {
        const double d = x - out.mean;
        return d * d;
    });
    const double var = pairwise_sum(sq) / (n - 1.0);
    out.std_error = std::sqrt(var / n);
    return out;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace tzone
