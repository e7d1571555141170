#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace topsim {

// Deterministic random source. All draws go through explicit helpers instead
// of std:: distributions, whose output is implementation-defined; the raw
// mt19937_64 stream itself is fully specified by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform draw in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw (Box-Muller, one fresh pair per call).
    double gauss() {
        double u1 = uniform01();
        const double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kTwoPi * u2);
    }

    /// Uniform integer in [0, n). Modulo bias is irrelevant at the scales used here.
    std::uint64_t bounded(std::uint64_t n) { return gen_() % n; }

    /// Fisher-Yates shuffle with draws from this stream.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559005768;
    std::mt19937_64 gen_;
};

}  // namespace topsim
