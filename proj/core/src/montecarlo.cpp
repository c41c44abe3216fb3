#include "hypack/montecarlo.hpp"

#include <cstdlib>
#include <string>

namespace hypack {

std::size_t mc_thread_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HYPACK_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) n = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::min(n, kMcStreams);
}

}  // namespace hypack
