#include "evobench/backend.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>

namespace evobench {

BackendSpec BackendSpec::parallel(std::size_t workers, std::size_t chunk) {
    if (workers < 1) throw ContractViolation("backend: workers must be >= 1");
    return {BackendKind::Parallel, workers, chunk};
}

std::size_t BackendSpec::effective_workers() const {
    if (kind == BackendKind::Serial) return 1;
    if (const char* env = std::getenv("EVOBENCH_WORKERS"); env != nullptr && *env != '\0') {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw ContractViolation(fmt::format("EVOBENCH_WORKERS='{}' is not a positive integer", env));
    }
    return std::max<std::size_t>(1, workers);
}

std::size_t BackendSpec::chunk_for(std::size_t rows) const {
    if (chunk > 0) return chunk;
    const std::size_t w = effective_workers();
    return std::max<std::size_t>(1, (rows + 4 * w - 1) / (4 * w));
}

std::string BackendSpec::to_string() const {
    if (kind == BackendKind::Serial) return "serial";
    return fmt::format("parallel({})", effective_workers());
}

// ---------------------------------------------------------------------------

WorkerPool::WorkerPool(std::size_t workers) {
    const std::size_t extra = workers > 0 ? workers - 1 : 0;
    threads_.reserve(extra);
    for (std::size_t i = 0; i < extra; ++i) {
        threads_.emplace_back([this](std::stop_token st) { worker_loop(st); });
    }
}

WorkerPool::~WorkerPool() {
    for (auto& t : threads_) t.request_stop();
    work_cv_.notify_all();
    // jthread joins on destruction.
}

void WorkerPool::drain() {
    for (;;) {
        const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
        if (i >= n_tasks_) return;
        (*job_)(i);
    }
}

void WorkerPool::worker_loop(std::stop_token stop) {
    std::uint64_t seen = 0;
    for (;;) {
        {
            std::unique_lock lock(mu_);
            if (!work_cv_.wait(lock, stop, [&] { return epoch_ != seen; })) return;
            seen = epoch_;
        }
        drain();
        {
            std::lock_guard lock(mu_);
            --busy_;
        }
        done_cv_.notify_one();
    }
}

void WorkerPool::run(std::size_t n_tasks, const std::function<void(std::size_t)>& task) {
    if (threads_.empty()) {
        for (std::size_t i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    {
        std::lock_guard lock(mu_);
        job_ = &task;
        n_tasks_ = n_tasks;
        next_.store(0, std::memory_order_relaxed);
        busy_ = threads_.size();
        ++epoch_;
    }
    work_cv_.notify_all();
    drain();
    std::unique_lock lock(mu_);
    done_cv_.wait(lock, [&] { return busy_ == 0; });
    job_ = nullptr;
}

// ---------------------------------------------------------------------------

Backend::Backend(BackendSpec spec) : spec_(spec) {
    if (spec_.kind == BackendKind::Parallel) {
        spec_.workers = spec_.effective_workers();
        pool_ = std::make_unique<WorkerPool>(spec_.workers);
    }
}

void Backend::for_rows(std::size_t rows, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (rows == 0) return;
    if (!pool_) {
        fn(0, rows);
        return;
    }
    const std::size_t chunk = spec_.chunk_for(rows);
    const std::size_t tasks = (rows + chunk - 1) / chunk;
    pool_->run(tasks, [&](std::size_t t) { fn(t * chunk, std::min(rows, (t + 1) * chunk)); });
}

Matrix Backend::map_rows(std::size_t rows, std::size_t cols,
                         const std::function<void(std::size_t, std::size_t, Matrix&)>& fn) {
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    // Keep the failure with the lowest starting row so the reported error
    // does not depend on scheduling.
    std::mutex err_mu;
    std::size_t err_first = rows;
    std::size_t err_last = rows;
    std::string err_what;
    for_rows(rows, [&](std::size_t first, std::size_t last) {
        try {
            fn(first, last, out);
        } catch (const std::exception& e) {
            std::lock_guard lock(err_mu);
            if (first < err_first) {
                err_first = first;
                err_last = last;
                err_what = e.what();
            }
        }
    });
    if (err_first < rows) throw EvaluationError(err_first, err_last, err_what);
    return out;
}

Matrix Backend::evaluate(const Problem& p, const Matrix& x) {
    if (static_cast<std::size_t>(x.cols()) != p.dim()) {
        throw ContractViolation(fmt::format("{}: expected {} columns, got {}", p.name(), p.dim(), x.cols()));
    }
    const auto rows = static_cast<std::size_t>(x.rows());
    const auto t0 = std::chrono::steady_clock::now();
    Matrix f = map_rows(rows, p.n_obj(),
                        [&](std::size_t first, std::size_t last, Matrix& out) { p.evaluate_rows(x, out, first, last); });
    seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows_ += rows;
    return f;
}

std::vector<ProfileRow> profile_backend(const BackendSpec& b, ProblemId problem,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                        std::size_t repetitions, Clock& clock, std::uint64_t seed) {
    if (repetitions < 1) throw ContractViolation("profile_backend: repetitions must be >= 1");
    Backend backend(b);
    std::vector<ProfileRow> table;
    Rng rng({seed, 0});
    for (const auto& [n, d] : sizes) {
        const Problem p(problem, d);
        const Matrix x = rng.uniform_matrix(n, p.bounds());
        std::vector<double> times;
        times.reserve(repetitions);
        for (std::size_t r = 0; r < repetitions; ++r) {
            const double t0 = clock.now();
            const Matrix f = backend.evaluate(p, x);
            times.push_back(clock.now() - t0);
        }
        double mean = 0;
        for (double t : times) mean += t;
        mean /= static_cast<double>(times.size());
        double var = 0;
        for (double t : times) var += (t - mean) * (t - mean);
        table.push_back({n, d, mean, std::sqrt(var / static_cast<double>(times.size()))});
    }
    return table;
}

} // namespace evobench
