#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace geomlaw {

/// xoshiro256** seeded through splitmix64. Substreams are separated by
/// 2^128-step jumps, so stream w of seed s is fixed for any worker count.
class RngStream
{
  public:
    using result_type = std::uint64_t;

    static constexpr std::string_view algorithm = "xoshiro256**/splitmix64";

    explicit RngStream(std::uint64_t seed = 0);

    /// Stream `index` derived from `seed`.
    static RngStream substream(std::uint64_t seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    /// Exp(1).
    double exponential();

    std::uint64_t seed() const { return seed_; }

  private:
    void jump();

    std::array<std::uint64_t, 4> s_{};
    std::uint64_t seed_ = 0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace geomlaw
