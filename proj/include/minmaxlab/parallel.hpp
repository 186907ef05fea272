#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace minmaxlab {

/// Worker cap: MINMAX_LAB_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t thread_cap();

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Evaluates fn(0..count-1) and returns the results in index order, so any
/// reduction over them is independent of scheduling. Calls from inside a
/// worker run serially. The lowest-index exception is rethrown.
template <typename Fn>
auto parallel_map(std::size_t count, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);

  const std::size_t workers =
      detail::in_parallel_region ? 1 : std::min<std::size_t>(thread_cap(), count);
  if (workers <= 1) {
    std::vector<R> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    detail::in_parallel_region = true;
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    detail::in_parallel_region = false;
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace minmaxlab
