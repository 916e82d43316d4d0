#pragma once

#include <functional>

namespace phstab::detail {

/// Index-parallel map with static contiguous chunking. The body must write
/// only to its own index's slot, so results are independent of the worker
/// count; exceptions are rethrown on the calling thread.
void parallel_for(long count, int workers, const std::function<void(long)>& body);

}  // namespace phstab::detail
