#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

namespace apollo {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }

    void merge(const CompensatedSum& other) noexcept
    {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Process-wide worker cap used by the parallel reductions. 0 means
// hardware_concurrency().
void set_thread_cap(unsigned threads);
unsigned thread_cap();

// Fixed chunk length of deterministic_sum. Chunk boundaries never depend on
// the thread count, so the merge order (and the result bits) never do either.
inline constexpr std::size_t kReductionChunk = 4096;

// Sums term(i) for i in [0, n) with compensated accumulation. Partial sums
// are formed per fixed-size chunk and merged in chunk order.
template<class Term>
double deterministic_sum(std::size_t n, Term&& term)
{
    std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
    std::vector<CompensatedSum> partial(chunks);
    auto run_chunk = [&](std::size_t c) {
        std::size_t lo = c * kReductionChunk;
        std::size_t hi = std::min(n, lo + kReductionChunk);
        CompensatedSum s;
        for (std::size_t i = lo; i < hi; ++i)
            s.add(term(i));
        partial[c] = s;
    };

    unsigned workers = std::min<std::size_t>(thread_cap(), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            run_chunk(c);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < chunks; c += workers)
                    run_chunk(c);
            });
        }
    }

    CompensatedSum total;
    for (auto const& p : partial)
        total.merge(p);
    return total.value();
}

}  // namespace apollo
