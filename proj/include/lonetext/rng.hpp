#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace lonetext {

// 64-bit FNV-1a, used for substream naming and resource fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

// Derives an independent substream seed from a global seed and a stage name,
// so adding a stage never perturbs the draws of another.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream_name);

// Deterministic generator (xoshiro256**) with hand-rolled distributions.
// Standard-library distributions are implementation defined; everything here
// is pinned so identical seeds give identical bytes on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform01();  // [0, 1)
    std::uint64_t uniform_below(std::uint64_t n);  // [0, n), unbiased
    double normal();
    double gamma(double shape, double scale = 1.0);
    std::uint64_t poisson(double mean);
    std::vector<double> dirichlet(double concentration, std::size_t k);
    std::vector<double> dirichlet(const std::vector<double>& concentration);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t s_[4];
};

}  // namespace lonetext
