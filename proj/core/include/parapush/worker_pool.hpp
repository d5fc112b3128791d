#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace parapush {

/// Fixed set of worker threads running index-parallel loops.
///
/// parallel_for is re-entrant and safe to call from several threads at once:
/// the calling thread always works through the loop itself, so nested calls
/// cannot deadlock and the total thread count never exceeds the pool size
/// plus the callers.
class WorkerPool {
 public:
  /// `threads` is the total degree of parallelism including the caller, so
  /// WorkerPool(1) spawns no threads.
  explicit WorkerPool(std::size_t threads);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  [[nodiscard]] std::size_t concurrency() const noexcept { return workers_.size() + 1; }

  /// Runs body(i) for i in [0, count). The first exception thrown by any
  /// index is rethrown on the caller after all indices finish.
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

 private:
  struct Job;
  void worker_loop();

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::deque<std::shared_ptr<Job>> queue_;
  bool stopping_{false};
};

/// Logical processors available, at least 1.
[[nodiscard]] std::size_t hardware_threads() noexcept;

}  // namespace parapush
