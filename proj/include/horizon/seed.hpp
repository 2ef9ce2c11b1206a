#pragma once

#include <cstdint>
#include <random>

namespace horizon {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// 64-bit experiment seed. Child streams are derived by hashing (parent, stream index),
/// so every Monte Carlo trial owns an independent, reproducible generator.
class Seed {
  public:
    constexpr Seed() = default;
    constexpr explicit Seed(std::uint64_t value) : value_(value) {}

    [[nodiscard]] constexpr std::uint64_t value() const { return value_; }

    [[nodiscard]] constexpr Seed child(std::uint64_t stream) const {
        return Seed{splitmix64(splitmix64(value_) ^ splitmix64(~stream))};
    }

    [[nodiscard]] std::mt19937_64 engine() const { return std::mt19937_64{value_}; }

    friend constexpr bool operator==(Seed, Seed) = default;

  private:
    std::uint64_t value_ = 0;
};

} // namespace horizon
