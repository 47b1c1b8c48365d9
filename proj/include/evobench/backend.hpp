#pragma once

// Execution backends for batch fitness evaluation: serial, or data-parallel
// over a bounded worker pool. Results are assembled by row index, so every
// backend produces bit-identical objective matrices.

#include "evobench/core.hpp"
#include "evobench/problems.hpp"

#include <atomic>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace evobench {

enum class BackendKind { Serial, Parallel };

struct BackendSpec {
    BackendKind kind = BackendKind::Serial;
    std::size_t workers = 1;
    std::size_t chunk = 0; // rows per task; 0 = ceil(N / (4 * workers))

    static BackendSpec serial() { return {}; }
    static BackendSpec parallel(std::size_t workers, std::size_t chunk = 0);

    /// Worker count after applying the EVOBENCH_WORKERS override (Parallel only).
    std::size_t effective_workers() const;
    std::size_t chunk_for(std::size_t rows) const;
    std::string to_string() const;
};

/// Fixed set of threads that cooperatively drain a batch of indexed tasks.
/// The calling thread takes part, so a pool of k workers spawns k - 1 threads.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    /// Runs task(0..n_tasks-1) and blocks until all have finished.
    void run(std::size_t n_tasks, const std::function<void(std::size_t)>& task);
    std::size_t size() const noexcept { return threads_.size() + 1; }

private:
    void worker_loop(std::stop_token stop);
    void drain();

    std::mutex mu_;
    std::condition_variable_any work_cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t)>* job_ = nullptr;
    std::size_t n_tasks_ = 0;
    std::atomic<std::size_t> next_{0};
    std::size_t busy_ = 0;
    std::uint64_t epoch_ = 0;
    std::vector<std::jthread> threads_;
};

class Backend {
public:
    explicit Backend(BackendSpec spec = {});

    const BackendSpec& spec() const noexcept { return spec_; }
    std::size_t workers() const noexcept { return pool_ ? pool_->size() : 1; }

    /// Objective values for every row of x. Throws EvaluationError naming the
    /// failing row range if any task throws.
    Matrix evaluate(const Problem& p, const Matrix& x);

    /// Fills a rows x cols matrix with fn(first, last, out) over row chunks.
    /// A throwing chunk becomes EvaluationError for the lowest failing range.
    Matrix map_rows(std::size_t rows, std::size_t cols,
                    const std::function<void(std::size_t, std::size_t, Matrix&)>& fn);

    /// Applies fn(first, last) over row chunks of a batch of `rows` rows.
    void for_rows(std::size_t rows, const std::function<void(std::size_t, std::size_t)>& fn);

    std::uint64_t rows_evaluated() const noexcept { return rows_; }
    double evaluation_seconds() const noexcept { return seconds_; }

private:
    BackendSpec spec_;
    std::unique_ptr<WorkerPool> pool_;
    std::uint64_t rows_ = 0;
    double seconds_ = 0;
};

struct ProfileRow {
    std::size_t n = 0;
    std::size_t d = 0;
    double mean_s = 0;
    double std_s = 0;
};

/// Times `repetitions` batch evaluations of a uniform-random N x D matrix per
/// size. Time is read from `clock`, so a VirtualClock makes it deterministic.
std::vector<ProfileRow> profile_backend(const BackendSpec& b, ProblemId problem,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                        std::size_t repetitions, Clock& clock, std::uint64_t seed = 1);

} // namespace evobench
