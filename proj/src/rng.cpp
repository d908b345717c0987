#include "geomlaw/rng.hpp"

#include <bit>
#include <cmath>

namespace geomlaw {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed)
{
    std::uint64_t state = seed;
    for (auto& word : s_)
        word = splitmix64(state);
}

RngStream RngStream::substream(std::uint64_t seed, std::uint64_t index)
{
    RngStream rng(seed);
    for (std::uint64_t i = 0; i < index; ++i)
        rng.jump();
    return rng;
}

RngStream::result_type RngStream::operator()()
{
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

void RngStream::jump()
{
    static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaULL,
                                              0xd5a61266f0c9392cULL,
                                              0xa9582618e03fc9aaULL,
                                              0x39abdc4529b1661cULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump)
    {
        for (int b = 0; b < 64; ++b)
        {
            if (word & (std::uint64_t{1} << b))
            {
                for (int i = 0; i < 4; ++i)
                    acc[i] ^= s_[i];
            }
            (*this)();
        }
    }
    s_ = acc;
}

double RngStream::uniform()
{
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open()
{
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential()
{
    return -std::log(uniform_open());
}

}  // namespace geomlaw
