#ifndef REPARAM_RNG_HPP
#define REPARAM_RNG_HPP

#include <cstdint>

namespace reparam {

// Counter-based generator in the splitmix64 family: the k-th output is a
// pure function of (seed, k), so streams replay identically on every
// platform. One stream per owner; never share a live state across threads.
class RngState {
 public:
  explicit RngState(std::uint64_t seed) : seed_(seed), position_(0) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++position_) * UINT64_C(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe as a quantile argument.
  double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t position_;
};

}  // namespace reparam

#endif  // REPARAM_RNG_HPP
