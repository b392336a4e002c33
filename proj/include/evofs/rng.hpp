#pragma once

#include <cstdint>
#include <cmath>
#include <numeric>
#include <vector>

namespace evofs {

// Single sequential random stream per run. All draws go through the helper
// methods below instead of <random> distributions, whose output differs
// between standard library implementations; this keeps serialized results
// reproducible for a given seed on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix(seed)), inc_(splitmix(seed ^ 0x9e3779b97f4a7c15ull) | 1ull) {}

    std::uint64_t next() {
        // xorshift128+ style step on two 64-bit words
        std::uint64_t x = state_;
        const std::uint64_t y = inc_;
        state_ = y;
        x ^= x << 23;
        inc_ = x ^ y ^ (x >> 17) ^ (y >> 26);
        return inc_ + y;
    }

    // uniform in {0, ..., n-1}; rejection sampling, no modulo bias
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % n;
    }

    // uniform in {lo, ..., hi} inclusive
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(uniform_below(static_cast<std::uint64_t>(hi - lo) + 1ull));
    }

    // uniform in [0, 1)
    double uniform_real() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform_real() < p; }

    double normal(double mean, double sd) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        // Box-Muller; u1 shifted away from 0 so the log is finite
        const double u1 = 1.0 - uniform_real();
        const double u2 = uniform_real();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return mean + sd * radius * std::cos(angle);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_below(i)]);
        }
    }

    // k distinct values from {0, ..., n-1} via partial Fisher-Yates, in draw order
    std::vector<int> sample_indices(int n, int k) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            const std::uint64_t j = i + uniform_below(static_cast<std::uint64_t>(n - i));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
            out.push_back(pool[static_cast<std::size_t>(i)]);
        }
        return out;
    }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
    std::uint64_t inc_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace evofs
