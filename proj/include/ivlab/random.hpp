#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace ivlab {

/// Counter-based Philox4x32-10 stream. A stream is fully determined by
/// (seed, stream id); draws are reproducible across platforms, so sharded
/// Monte-Carlo work can derive independent streams from (seed, shard index).
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() noexcept;
    /// Uniformly distributed direction on the unit sphere.
    void unit_vector(std::span<double> out) noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ivlab
