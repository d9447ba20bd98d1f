#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace sego {

inline uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Mixes an arbitrary tag sequence into a stream seed so that per-trial
// substreams are independent of evaluation order.
inline uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> tags) {
    uint64_t s = seed;
    uint64_t h = splitmix64(s);
    for (uint64_t t : tags) {
        s = h ^ (t + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        h = splitmix64(s);
    }
    return h;
}

// Deterministic across platforms: mt19937_64 is fully specified by the
// standard and all distributions below are hand-rolled.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t bits() { return eng_(); }

    double uniform() { // [0, 1)
        return static_cast<double>(bits() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int n) { // [0, n)
        return static_cast<int>(uniform() * n) % n;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 1e-300)
            u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    Eigen::Vector3d unit_vector() {
        while (true) {
            Eigen::Vector3d v(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
            double n = v.norm();
            if (n > 1e-6 && n <= 1.0)
                return v / n;
        }
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace sego
