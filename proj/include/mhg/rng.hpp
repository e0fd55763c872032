#ifndef MHG_RNG_HPP
#define MHG_RNG_HPP

#include <cstdint>
#include <random>

namespace mhg {

// Seeded random source with reproducible bounded draws. std::mt19937_64 has a
// standard-mandated output sequence, but std::uniform_int_distribution does
// not, so bounded draws are done by rejection here to keep byte-identical
// results across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::size_t below(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
  }

  // Uniform in [0, 1).
  double unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t fork_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mhg

#endif  // MHG_RNG_HPP
