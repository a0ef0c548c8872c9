#ifndef PDNF_PARALLEL_HPP
#define PDNF_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace pdnf {

// Process-wide worker count used by the library's parallel loops. Defaults
// to 1. Results never depend on this value: every loop writes into
// preassigned slots and reductions happen in index order afterwards.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs task(0) .. task(count-1), spread over thread_count() workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace pdnf

#endif  // PDNF_PARALLEL_HPP
