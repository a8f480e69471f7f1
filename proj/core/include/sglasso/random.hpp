#pragma once
#include <array>
#include <cstdint>
#include <limits>

namespace sglasso {

/*
 * Philox4x32-10 counter-based generator (Salmon et al., Random123).
 * The stream is a pure function of (seed, counter), so results are
 * identical across platforms and standard libraries.
 */
class Philox4x32
{
public:
    using result_type = std::uint32_t;
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
    {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        if (pos_ == 4) {
            block_ = bijection(ctr_, key_);
            increment();
            pos_ = 0;
        }
        return block_[pos_++];
    }

    /// The raw 10-round bijection.
    static Counter bijection(Counter ctr, Key key) noexcept;

private:
    void increment() noexcept
    {
        for (auto& c : ctr_) {
            if (++c != 0) break;
        }
    }

    Key key_;
    Counter ctr_{};
    Counter block_{};
    int pos_ = 4;
};

/// Seeded source of uniforms and standard normals built on Philox4x32.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) noexcept : bits_(seed) {}

    std::uint64_t next_u64() noexcept
    {
        const std::uint64_t hi = bits_();
        return (hi << 32) | bits_();
    }
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n), by rejection. n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept;
    /// Standard normal by the Box-Muller transform.
    double normal() noexcept;

private:
    Philox4x32 bits_;
    double spare_ = 0;
    bool has_spare_ = false;
};

} // namespace sglasso
