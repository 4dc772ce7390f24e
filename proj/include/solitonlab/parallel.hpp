#ifndef SOLITONLAB_PARALLEL_HPP
#define SOLITONLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace soliton {

// Thread cap from SOLITON_LAB_THREADS: 0 means auto (hardware concurrency),
// unset defaults to auto.  Results are written into index-addressed slots by
// the callers, so the outcome is independent of the schedule.
int thread_cap();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace soliton

#endif
