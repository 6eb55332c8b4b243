// Deterministic random streams. A stream is keyed by (seed, stream_id) and
// generated in counter mode (Philox-style 4x64, 10 rounds), so distinct
// stream ids give disjoint sequences by construction and replication r can
// always be re-derived as RandomStream(seed, r) regardless of which worker
// ran it.

#ifndef QCSTAT_RNG_HPP
#define QCSTAT_RNG_HPP

#include <cstdint>

namespace qcstat {

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : key0_(seed), key1_(stream_id) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      fill_block();
      pos_ = 0;
    }
    return block_[pos_++];
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs and
  // quantile transforms are safe.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return key0_; }
  std::uint64_t stream_id() const { return key1_; }

 private:
  static void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t* hi,
                        std::uint64_t* lo) {
    const unsigned __int128 prod =
        static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
    *hi = static_cast<std::uint64_t>(prod >> 64);
    *lo = static_cast<std::uint64_t>(prod);
  }

  void fill_block() {
    constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
    constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
    constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
    std::uint64_t c0 = ctr0_, c1 = ctr1_, c2 = ctr2_, c3 = ctr3_;
    std::uint64_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi0, lo0, hi1, lo1;
      mul_hi_lo(kMult0, c0, &hi0, &lo0);
      mul_hi_lo(kMult1, c2, &hi1, &lo1);
      const std::uint64_t n0 = hi1 ^ c1 ^ k0;
      const std::uint64_t n1 = lo1;
      const std::uint64_t n2 = hi0 ^ c3 ^ k1;
      const std::uint64_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    block_[0] = c0;
    block_[1] = c1;
    block_[2] = c2;
    block_[3] = c3;
    // 256-bit counter increment.
    if (++ctr0_ == 0 && ++ctr1_ == 0 && ++ctr2_ == 0) ++ctr3_;
  }

  std::uint64_t key0_, key1_;
  std::uint64_t ctr0_ = 0, ctr1_ = 0, ctr2_ = 0, ctr3_ = 0;
  std::uint64_t block_[4] = {0, 0, 0, 0};
  int pos_ = 4;
};

}  // namespace qcstat

#endif  // QCSTAT_RNG_HPP
