#include "vrlab/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace vrlab {

unsigned resolve_workers(unsigned requested) {
  unsigned workers = requested;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VRLAB_THREADS"); env != nullptr) {
    unsigned cap = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc{} && cap > 0) workers = std::min(workers, cap);
  }
  return workers;
}

}  // namespace vrlab
