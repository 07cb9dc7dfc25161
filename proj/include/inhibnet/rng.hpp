#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace inhibnet {

/// Philox4x32-10 block function (Salmon et al., Random123).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter counter, Key key) noexcept;
};

/// Stream purposes. Values are part of the reproducibility contract; never renumber.
enum class Purpose : std::uint64_t {
    ProposalGap = 1,
    ProposalLabel = 2,
    ProposalNeuron = 3,
    AcceptanceCoin = 4,
    ResetDraw = 5,
    LatticeGap = 6,
    ForwardReset = 7,
    ForwardCoin = 8,
    Sample = 9,
    Replica = 10,
    Run = 11,
    Test = 12,
    State = 13,
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds tags into a key, one splitmix64 round per tag.
std::uint64_t derive_key(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept;

inline std::uint64_t tag(Purpose p) noexcept { return static_cast<std::uint64_t>(p); }

/// Random access into a keyed stream: draw `i` depends only on (key, i).
class CounterStream {
public:
    explicit CounterStream(std::uint64_t key) noexcept;

    /// 64 random bits; lane selects one of the two words of the 128-bit block.
    std::uint64_t bits(std::uint64_t index, unsigned lane = 0) const noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform(std::uint64_t index, unsigned lane = 0) const noexcept;

    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
};

/// Sequential adapter satisfying std::uniform_random_bit_generator.
class StreamEngine {
public:
    using result_type = std::uint64_t;

    explicit StreamEngine(std::uint64_t key) noexcept : stream_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;
    double uniform() noexcept;

private:
    CounterStream stream_;
    std::uint64_t next_ = 0;
};

inline double bits_to_unit_open(std::uint64_t x) noexcept {
    return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

} // namespace inhibnet
