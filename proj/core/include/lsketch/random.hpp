#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace lsketch {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
/// Maps a 128-bit counter and 64-bit key to 128 pseudo-random bits.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

/// 64-bit finalizer from SplitMix64.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for an independent sub-stream, e.g. the i-th trial of a best-of-m run.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) noexcept;

// =============================================================================
/// A reproducible random stream identified by (seed, label, index).
///
/// The seed fixes the Philox key; the label and index select the upper half of
/// the counter, so streams with different labels never overlap. The lower half
/// counts blocks. Every draw in the library goes through one of these.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) noexcept;

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1].
    double uniform_open_low() noexcept { return 1.0 - uniform(); }
    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Standard normal (Box-Muller).
    double normal() noexcept;
    /// +1 or -1 with equal probability.
    int sign() noexcept { return (next_u32() & 1u) ? 1 : -1; }

    std::uint64_t seed() const noexcept { return seed_; }

  private:
    void refill() noexcept;

    std::uint64_t seed_;
    Philox4x32::Key key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    unsigned pos_ = 4;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

}  // namespace lsketch
