#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace smc {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

/// Labels for the top-level phases of a run. Streams for a phase are derived
/// as `base.split(phase).split(time).split(particle)`.
enum class Phase : std::uint64_t {
    Init = 1,
    Filter = 2,
    Backward = 3,
    Slot = 4,
    PathSelect = 5,
    Iteration = 6,
    Replicate = 7,
    Data = 8,
    Learning = 9,
    AncestorSampling = 10,
};

/**
 * Counter-based random stream.
 *
 * The 64-bit seed is the Philox key; the 96-bit stream id occupies the upper
 * three counter words and the lower word counts 128-bit blocks. Child streams
 * are derived by hashing (parent id, label) through Philox keyed by the label,
 * so any tree of labels yields reproducible, statistically independent streams
 * regardless of evaluation order or thread count.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, std::uint64_t id = 0) noexcept;

    RngStream split(std::uint64_t label) const noexcept;
    /// Phase children are derived in a separate domain from index children,
    /// so split(Phase::X) never coincides with split(i) for any index i.
    RngStream split(Phase phase) const noexcept;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept
    {
        if (used_ > 2) refill();
        const std::uint64_t lo = buffer_[static_cast<std::size_t>(used_)];
        const std::uint64_t hi = buffer_[static_cast<std::size_t>(used_) + 1];
        used_ += 2;
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept
    {
        constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
        return (static_cast<double>((*this)() >> 11) + 0.5) * scale;
    }
    /// Standard normal (Box-Muller, second variate cached).
    double normal() noexcept;
    /// Uniform integer in [0, n); n must be positive.
    std::size_t below(std::size_t n) noexcept;

    std::uint64_t seed() const noexcept;
    std::array<std::uint32_t, 3> id() const noexcept { return id_; }

private:
    RngStream(PhiloxKey key, std::array<std::uint32_t, 3> id) noexcept;
    RngStream derive(std::uint64_t label, std::uint32_t tag) const noexcept;
    void refill() noexcept;

    PhiloxKey key_;
    std::array<std::uint32_t, 3> id_;
    std::uint32_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace smc
