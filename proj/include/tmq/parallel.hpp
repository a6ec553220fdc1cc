#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace tmq {

// Handle to a bounded set of worker threads. Work items are indexed and
// every result lands in its own slot, so callers reduce in index order and
// totals do not depend on the worker count.
class Workers {
public:
    explicit Workers(unsigned count = 1);

    unsigned count() const { return count_; }

    // Calls fn(i) once for every i in [0, n). Rethrows the exception of the
    // lowest failing index.
    void for_each(std::size_t n, const std::function<void(std::size_t)>& fn) const;

    template <class T, class F>
    std::vector<T> map(std::size_t n, F&& f) const
    {
        std::vector<T> out(n);
        for_each(n, [&](std::size_t i) { out[i] = f(i); });
        return out;
    }

private:
    unsigned count_;
};

// Process-wide default used when a caller passes no handle.
const Workers& serial_workers();

}  // namespace tmq
