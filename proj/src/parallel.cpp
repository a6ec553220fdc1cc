#include "tmq/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace tmq {

Workers::Workers(unsigned count) : count_(count == 0 ? 1 : count) {}

void Workers::for_each(std::size_t n, const std::function<void(std::size_t)>& fn) const
{
    if (count_ == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t bad_index = n;
    std::exception_ptr bad;

    auto run = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < bad_index) {
                    bad_index = i;
                    bad = std::current_exception();
                }
            }
        }
    };
    std::size_t nthreads = std::min<std::size_t>(count_, n);
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (std::size_t k = 1; k < nthreads; ++k)
        pool.emplace_back(run);
    run();
    for (auto& th : pool)
        th.join();
    if (bad)
        std::rethrow_exception(bad);
}

const Workers& serial_workers()
{
    static const Workers one(1);
    return one;
}

}  // namespace tmq
