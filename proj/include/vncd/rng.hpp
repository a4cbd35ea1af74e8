// Seeded random streams. Every stochastic operation in the library takes an
// explicit 64-bit seed; named sub-streams keep independent consumers (init,
// shuffling, dropout, ...) from perturbing each other's sequences.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace vncd {

namespace detail {

// FNV-1a, used only to fold stream tags into seeds.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// mt19937_64 with hand-rolled distributions; std::normal_distribution and
// friends are implementation-defined, which would break byte-identical
// reruns across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(detail::splitmix64(seed)), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Independent stream for a named consumer.
    Rng derive(std::string_view tag) const {
        return Rng(detail::splitmix64(seed_ ^ detail::fnv1a(tag)));
    }
    Rng derive(std::string_view tag, std::uint64_t index) const {
        return Rng(detail::splitmix64(seed_ ^ detail::fnv1a(tag) ^ (index * 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace vncd
