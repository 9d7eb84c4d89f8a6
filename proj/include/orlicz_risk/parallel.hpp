#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace orlicz_risk {

enum class Parallelism { sequential, per_atom };

/// Runs fn(k) for k in [0, n). In per_atom mode each k gets its own thread;
/// callers write into slot k only, so results do not depend on scheduling.
/// The first exception in atom order is rethrown after all threads join.
template <class Fn>
void for_each_atom(std::size_t n, Parallelism mode, Fn&& fn) {
  if (mode == Parallelism::sequential || n < 2) {
    for (std::size_t k = 0; k < n; ++k) {
      fn(k);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> workers;
  workers.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    workers.emplace_back([&, k] {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) {
    w.join();
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

} // namespace orlicz_risk
