#pragma once

#include <cstdint>

namespace rc {

// Counter-based SplitMix64 stream.  A value is a pure function of
// (seed, stream, counter), so recording the seed and the number of draws in
// a run manifest pins every artifact bit-exactly.  Distinct streams from the
// same seed are used for independent purposes (edge sweeps, loop
// orientations, tile thresholds) without coupling their consumption order.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0)
      : base_(seed + 0x9e3779b97f4a7c15ULL * (stream + 1)), ctr_(0) {}

  uint64_t next_u64() {
    uint64_t z = base_ + 0x9e3779b97f4a7c15ULL * (++ctr_);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform on [0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in {0, ..., n-1}, unbiased
  uint32_t below(uint32_t n) {
    uint64_t threshold = (~uint64_t{0}) - (~uint64_t{0}) % n;
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= threshold);
    return static_cast<uint32_t>(v % n);
  }

  uint64_t draws() const { return ctr_; }

 private:
  uint64_t base_;
  uint64_t ctr_;
};

}  // namespace rc
