#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

#include "knapq/rational.hpp"

namespace knapq {

// Deterministic byte stream: ChaCha12 keyed by a 32-byte seed, with the
// 64-bit stream nonce = FNV1a64(label) XOR caller nonce. All multi-byte
// reads are little-endian, so output is identical across platforms.
class Stream {
 public:
  Stream(const std::array<uint8_t, 32>& key, const std::string& label, uint64_t nonce) {
    static constexpr char kSigma[17] = "expand 32-byte k";
    for (int i = 0; i < 4; ++i) state_[i] = load32(reinterpret_cast<const uint8_t*>(kSigma) + 4 * i);
    for (int i = 0; i < 8; ++i) state_[4 + i] = load32(key.data() + 4 * i);
    state_[12] = 0;
    state_[13] = 0;
    uint64_t n = fnv1a64(label) ^ nonce;
    state_[14] = static_cast<uint32_t>(n & 0xffffffffu);
    state_[15] = static_cast<uint32_t>(n >> 32);
    pos_ = sizeof(block_);
    bit_buffer_ = 0;
    bits_left_ = 0;
  }

  uint64_t next_u64() {
    uint64_t v = 0;
    if (pos_ + 8 <= sizeof(block_)) {
      for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(block_[pos_ + i]) << (8 * i);
      pos_ += 8;
      return v;
    }
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(next_byte()) << (8 * i);
    return v;
  }

  void fill_bytes(uint8_t* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = next_byte();
  }

  // Single unbiased coin; buffered so 64 coins cost one block draw.
  bool next_bit() {
    if (bits_left_ == 0) {
      bit_buffer_ = next_u64();
      bits_left_ = 64;
    }
    bool b = (bit_buffer_ & 1u) != 0;
    bit_buffer_ >>= 1;
    --bits_left_;
    return b;
  }

  // Uniform integer in [0, bound), exact (rejection sampling).
  uint64_t uniform_below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Stream: uniform_below(0)");
    uint64_t min = (-bound) % bound;  // 2^64 mod bound
    uint64_t r;
    do {
      r = next_u64();
    } while (r < min);
    return r % bound;
  }

  // Uniform integer in [0, bound) for arbitrary-precision bounds.
  BigInt uniform_below_big(const BigInt& bound) {
    if (bound <= 0) throw std::invalid_argument("Stream: uniform_below_big requires bound > 0");
    if (bound <= BigInt(UINT64_MAX)) return BigInt(uniform_below(static_cast<uint64_t>(bound)));
    size_t bits = boost::multiprecision::msb(bound) + 1;
    size_t bytes = (bits + 7) / 8;
    unsigned top_mask = bits % 8 == 0 ? 0xffu : ((1u << (bits % 8)) - 1u);
    std::string buf(bytes, '\0');
    while (true) {
      fill_bytes(reinterpret_cast<uint8_t*>(buf.data()), bytes);
      buf[bytes - 1] = static_cast<char>(static_cast<unsigned char>(buf[bytes - 1]) & top_mask);
      BigInt v = 0;
      for (size_t i = bytes; i-- > 0;) {
        v <<= 8;
        v += static_cast<unsigned char>(buf[i]);
      }
      if (v < bound) return v;
    }
  }

  // True with probability exactly p; requires 0 <= p <= 1. The denominator
  // is positive and the fraction reduced, so num/den comparisons suffice.
  bool bernoulli(const Rational& p) {
    if (p.is_negative() || p.num() > p.den()) throw std::invalid_argument("Stream: bernoulli range");
    if (p.is_zero()) return false;
    if (p.num() == p.den()) return true;
    if (p.den() <= std::numeric_limits<uint64_t>::max()) {
      return uniform_below(static_cast<uint64_t>(p.den())) <
             static_cast<uint64_t>(p.num());
    }
    return uniform_below_big(p.den()) < p.num();
  }

  static uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  static uint32_t load32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
  }

  static uint32_t rotl(uint32_t v, int c) { return (v << c) | (v >> (32 - c)); }

  static void quarter(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
    a += b;
    d = rotl(d ^ a, 16);
    c += d;
    b = rotl(b ^ c, 12);
    a += b;
    d = rotl(d ^ a, 8);
    c += d;
    b = rotl(b ^ c, 7);
  }

  void refill() {
    uint32_t x[16];
    std::memcpy(x, state_, sizeof(x));
    for (int round = 0; round < 6; ++round) {  // 12 rounds total
      quarter(x[0], x[4], x[8], x[12]);
      quarter(x[1], x[5], x[9], x[13]);
      quarter(x[2], x[6], x[10], x[14]);
      quarter(x[3], x[7], x[11], x[15]);
      quarter(x[0], x[5], x[10], x[15]);
      quarter(x[1], x[6], x[11], x[12]);
      quarter(x[2], x[7], x[8], x[13]);
      quarter(x[3], x[4], x[9], x[14]);
    }
    for (int i = 0; i < 16; ++i) {
      uint32_t v = x[i] + state_[i];
      block_[4 * i] = static_cast<uint8_t>(v & 0xff);
      block_[4 * i + 1] = static_cast<uint8_t>((v >> 8) & 0xff);
      block_[4 * i + 2] = static_cast<uint8_t>((v >> 16) & 0xff);
      block_[4 * i + 3] = static_cast<uint8_t>((v >> 24) & 0xff);
    }
    if (++state_[12] == 0) ++state_[13];
    pos_ = 0;
  }

  uint8_t next_byte() {
    if (pos_ >= sizeof(block_)) refill();
    return block_[pos_++];
  }

  uint32_t state_[16];
  uint8_t block_[64];
  size_t pos_;
  uint64_t bit_buffer_;
  int bits_left_;
};

// Seed plus per-run nonce, with the two derived stream families:
//  - run_stream(): feeds every draw the run makes against the instance
//    (weighted samples, sentinel padding coins); depends on run_nonce.
//  - shared_stream(k): feeds the k-th quantile call's internal randomness;
//    depends only on the seed, so every run sees the same bytes.
struct RandomnessPlan {
  std::array<uint8_t, 32> seed{};
  uint64_t run_nonce = 0;

  static std::array<uint8_t, 32> seed_from_hex(const std::string& hex) {
    if (hex.size() > 64) throw std::invalid_argument("seed: more than 64 hex digits");
    std::array<uint8_t, 32> out{};
    auto nibble = [](char c) -> unsigned {
      if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
      throw std::invalid_argument("seed: invalid hex digit");
    };
    // Left-aligned, zero-padded on the right; odd-length input gets a low zero nibble.
    for (size_t i = 0; i < hex.size(); ++i) {
      unsigned v = nibble(hex[i]);
      if (i % 2 == 0)
        out[i / 2] = static_cast<uint8_t>(v << 4);
      else
        out[i / 2] |= static_cast<uint8_t>(v);
    }
    return out;
  }

  static RandomnessPlan from_hex(const std::string& hex, uint64_t run_nonce) {
    RandomnessPlan p;
    p.seed = seed_from_hex(hex);
    p.run_nonce = run_nonce;
    return p;
  }

  Stream run_stream() const { return Stream(seed, "sampling", run_nonce); }
  Stream shared_stream(uint64_t call_index) const { return Stream(seed, "internal", call_index); }
};

}  // namespace knapq
