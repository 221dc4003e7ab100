#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sdmlab {

/// Seeded generator whose derived draws do not depend on the standard
/// library's distribution implementations, so every platform reproduces
/// the same streams bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    static constexpr std::string_view identifier() {
        return "mt19937_64;uniform53;box-muller;lemire-bounded";
    }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    /// Unbiased integer on [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);
    double normal();

    friend bool operator==(const Rng& a, const Rng& b) {
        return a.engine_ == b.engine_ && a.has_spare_ == b.has_spare_ && a.spare_ == b.spare_;
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Independent child seed for stream `stream` of a run seeded with `seed` (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sdmlab
