#include "sslab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace sslab {

int worker_count() {
    if (const char* env = std::getenv("SSL_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (const std::exception&) {
            // malformed value falls through to the hardware default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace sslab
