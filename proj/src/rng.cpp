#include "lonetext/rng.hpp"

#include <cmath>

#include "lonetext/errors.hpp"

namespace lonetext {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream_name) {
    std::uint64_t state = seed ^ fnv1a64(stream_name);
    return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& s : s_) s = splitmix64(state);
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    // rejection sampling to avoid modulo bias
    std::uint64_t threshold = (-n) % n;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

double Rng::normal() {
    // Marsaglia polar method without spare caching, so draws stay
    // position independent in the stream.
    for (;;) {
        double u = 2.0 * uniform01() - 1.0;
        double v = 2.0 * uniform01() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double Rng::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw ContractError("gamma parameters must be positive");
    }
    if (shape < 1.0) {
        // Boost to shape + 1, then scale back.
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia & Tsang squeeze method.
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return scale * d * v;
        }
    }
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0)) throw ContractError("poisson mean must be >= 0");
    // Knuth multiplication, chunked so exp(-mean) never underflows.
    std::uint64_t total = 0;
    while (mean > 0.0) {
        double chunk = mean > 500.0 ? 500.0 : mean;
        mean -= chunk;
        double limit = std::exp(-chunk);
        double p = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        total += k - 1;
    }
    return total;
}

std::vector<double> Rng::dirichlet(double concentration, std::size_t k) {
    return dirichlet(std::vector<double>(k, concentration));
}

std::vector<double> Rng::dirichlet(const std::vector<double>& concentration) {
    std::vector<double> out(concentration.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < concentration.size(); ++i) {
        out[i] = gamma(concentration[i]);
        sum += out[i];
    }
    if (sum <= 0.0) {
        // All draws underflowed (tiny concentrations); fall back to one-hot.
        out.assign(concentration.size(), 0.0);
        out[uniform_below(concentration.size())] = 1.0;
        return out;
    }
    for (auto& x : out) x /= sum;
    return out;
}

}  // namespace lonetext
