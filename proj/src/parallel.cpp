#include "toriclab/parallel.h"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace toriclab {

int default_workers() {
  if (const char* env = std::getenv("TORICLAB_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_chunks(std::size_t num_chunks, int workers,
                         const std::function<void(std::size_t, int)>& body, const std::atomic<bool>* stop) {
  if (workers < 1) workers = 1;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> failed{false};

  auto run = [&](int worker) {
    while (!failed.load() && !(stop && stop->load())) {
      const std::size_t chunk = next.fetch_add(1);
      if (chunk >= num_chunks) return;
      try {
        body(chunk, worker);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        failed.store(true);
      }
    }
  };

  if (workers == 1 || num_chunks <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace toriclab
