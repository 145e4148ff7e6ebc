#pragma once

#include <cstddef>
#include <functional>

namespace procdist {

/// Caps worker threads used by library loops; 0 means hardware concurrency.
void set_max_threads(std::size_t threads) noexcept;
std::size_t max_threads() noexcept;

/// Runs body(i) for i in [0, n) on up to max_threads() workers. Exceptions from
/// the body are rethrown on the caller (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace procdist
