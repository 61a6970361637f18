#include "zetalab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace zetalab {

namespace {
std::atomic<std::size_t> g_override{0};
}

std::size_t worker_count() {
    if (const std::size_t o = g_override.load(); o > 0) return o;
    if (const char* env = std::getenv(kThreadsEnvVar)) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void set_worker_count(std::size_t n) { g_override.store(n); }

}  // namespace zetalab
