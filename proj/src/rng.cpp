#include "inhibnet/rng.hpp"

namespace inhibnet {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}
} // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t key = mix64(base);
    for (std::uint64_t t : tags) {
        key = mix64(key ^ mix64(t + 0x632BE59BD9B4E019ull));
    }
    return key;
}

CounterStream::CounterStream(std::uint64_t key) noexcept : key_(key) {}

std::uint64_t CounterStream::bits(std::uint64_t index, unsigned lane) const noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u};
    const Philox4x32::Key k{static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)};
    const auto out = Philox4x32::block(ctr, k);
    const unsigned w = (lane & 1u) * 2u;
    return (static_cast<std::uint64_t>(out[w + 1]) << 32) | out[w];
}

double CounterStream::uniform(std::uint64_t index, unsigned lane) const noexcept {
    return bits_to_unit_open(bits(index, lane));
}

StreamEngine::result_type StreamEngine::operator()() noexcept {
    const std::uint64_t i = next_++;
    return stream_.bits(i >> 1, static_cast<unsigned>(i & 1u));
}

double StreamEngine::uniform() noexcept { return bits_to_unit_open((*this)()); }

} // namespace inhibnet
