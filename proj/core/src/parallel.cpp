#include "gaminv/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gaminv {

int thread_count() {
  if (const char* env = std::getenv("GAMINV_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace gaminv
