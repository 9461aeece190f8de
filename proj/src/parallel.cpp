#include "hodisc/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hodisc {

namespace {

unsigned initial_threads() {
  if (const char* env = std::getenv("HODISC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 0;
}

std::atomic<unsigned> configured{initial_threads()};

}  // namespace

void set_thread_count(unsigned threads) { configured.store(threads); }

unsigned thread_count() {
  const unsigned t = configured.load();
  if (t > 0) return t;
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace hodisc
