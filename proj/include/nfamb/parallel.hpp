#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace nfamb {

/// Worker count: hardware concurrency capped by NF_THREADS when set.
inline unsigned worker_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NF_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1)
                n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (...) {
        }
    }
    return n;
}

/// Runs fn(i) for i in [0, n). Each index is owned by exactly one worker, so results written
/// per index do not depend on the schedule.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex mtx;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers)
                    fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mtx);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

/// Cascade summation: leaves of `block` terms summed naively, then merged pairwise. The
/// reduction tree depends only on the number of terms pushed.
template <typename T>
class PairwiseSum {
public:
    explicit PairwiseSum(std::size_t block = 64) : block_(block) {}

    void add(const T& v)
    {
        leaf_ += v;
        if (++in_leaf_ == block_) {
            push_leaf(leaf_);
            leaf_ = T{};
            in_leaf_ = 0;
        }
    }

    T result() const
    {
        T acc = leaf_;
        for (std::size_t i = 0; i < levels_.size(); ++i)
            if (used_[i])
                acc = levels_[i] + acc;
        return acc;
    }

private:
    void push_leaf(T v)
    {
        std::size_t lvl = 0;
        while (lvl < levels_.size() && used_[lvl]) {
            v = levels_[lvl] + v;
            used_[lvl] = false;
            ++lvl;
        }
        if (lvl == levels_.size()) {
            levels_.push_back(T{});
            used_.push_back(false);
        }
        levels_[lvl] = v;
        used_[lvl] = true;
    }

    std::size_t block_;
    T leaf_{};
    std::size_t in_leaf_ = 0;
    std::vector<T> levels_;
    std::vector<bool> used_;
};

template <typename It>
auto pairwise_sum(It first, It last)
{
    using T = std::decay_t<decltype(*first)>;
    PairwiseSum<T> acc;
    for (; first != last; ++first)
        acc.add(*first);
    return acc.result();
}

} // namespace nfamb
