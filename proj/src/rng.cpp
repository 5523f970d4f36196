#include "smc/rng.hpp"

#include <cmath>
#include <numbers>

namespace smc {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

// Marks counters used for id derivation so they never coincide with output blocks.
constexpr std::uint32_t kSplitTag = 0xA5A5F00Du;
// Phase children live in their own domain so they never equal an index child.
constexpr std::uint32_t kPhaseTag = 0x5A5AF00Du;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMulA, ctr[0], hi0, lo0);
        mulhilo(kMulB, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t id) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      id_{static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32), 0u}
{
}

RngStream::RngStream(PhiloxKey key, std::array<std::uint32_t, 3> id) noexcept : key_(key), id_(id) {}

RngStream RngStream::derive(std::uint64_t label, std::uint32_t tag) const noexcept
{
    const PhiloxKey label_key{static_cast<std::uint32_t>(label), static_cast<std::uint32_t>(label >> 32)};
    const PhiloxCounter h = philox4x32_10({id_[0], id_[1], id_[2], tag}, label_key);
    return RngStream(key_, {h[0], h[1], h[2]});
}

RngStream RngStream::split(std::uint64_t label) const noexcept { return derive(label, kSplitTag); }

RngStream RngStream::split(Phase phase) const noexcept
{
    return derive(static_cast<std::uint64_t>(phase), kPhaseTag);
}

void RngStream::refill() noexcept
{
    buffer_ = philox4x32_10({block_++, id_[0], id_[1], id_[2]}, key_);
    used_ = 0;
}

double RngStream::normal() noexcept
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

std::size_t RngStream::below(std::size_t n) noexcept
{
    // Lemire's multiply-shift; the bias is < n / 2^64 and irrelevant here.
    const unsigned __int128 p = static_cast<unsigned __int128>((*this)()) * n;
    return static_cast<std::size_t>(p >> 64);
}

std::uint64_t RngStream::seed() const noexcept
{
    return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
}

}  // namespace smc
