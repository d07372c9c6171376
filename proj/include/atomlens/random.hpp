#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace atomlens {

// Deterministic random stream. mt19937_64 is fully specified by the standard
// and the variate transforms below avoid the implementation-defined standard
// distribution classes, so identical seeds give identical streams on every
// platform.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // uniform in [0, 1)
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // exponential with given mean
    double exponential(double mean) {
        double u = uniform01();
        return -mean * std::log1p(-u);
    }

    // Exact Poisson sampling by Knuth's product method; large means are split
    // into chunks (Poisson additivity) to avoid exp underflow.
    std::uint64_t poisson(double mean) {
        std::uint64_t total = 0;
        while (mean > 16.0) {
            total += poisson_knuth(16.0);
            mean -= 16.0;
        }
        return total + poisson_knuth(mean);
    }

    // Derive an independent substream id from a master seed and path indices
    // (splitmix64 chain); used for per-point / per-event streams.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        std::uint64_t x = splitmix(seed ^ 0x9e3779b97f4a7c15ULL);
        x = splitmix(x ^ splitmix(a));
        x = splitmix(x ^ splitmix(b));
        return x;
    }

  private:
    std::uint64_t poisson_knuth(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t n = 0;
        do {
            prod *= uniform01();
            ++n;
        } while (prod > limit);
        return n - 1;
    }

    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace atomlens
