// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_RNG_HPP
#define LITE_RNG_HPP

#include <cstdint>
#include <optional>
#include <string_view>

namespace lite {

/// SplitMix64 output finalizer.
std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Child seed = mix(parent ^ mix(hash(name))). Streams for different names
/// are independent of the order in which they are requested.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view name) noexcept;

/// SplitMix64 generator with Box–Muller normals. Streams are defined by
/// the algorithm alone, so they reproduce across platforms and languages.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed), seed_(seed) {}

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept;
    double normal() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    Rng child(std::string_view name) const noexcept { return Rng(derive_seed(seed_, name)); }

private:
    std::uint64_t state_;
    std::uint64_t seed_;
    std::optional<double> spare_;
};

}  // namespace lite

#endif  // LITE_RNG_HPP
