#include "apollo/summation.hpp"

#include <atomic>

namespace apollo {

namespace {
std::atomic<unsigned> g_thread_cap{0};
}

void set_thread_cap(unsigned threads) { g_thread_cap.store(threads); }

unsigned thread_cap()
{
    unsigned cap = g_thread_cap.load();
    if (cap == 0)
        cap = std::max(1u, std::thread::hardware_concurrency());
    return cap;
}

}  // namespace apollo
