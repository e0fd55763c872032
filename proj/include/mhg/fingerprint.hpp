#ifndef MHG_FINGERPRINT_HPP
#define MHG_FINGERPRINT_HPP

#include <cstdint>
#include <vector>

#include "mhg/molgraph.hpp"

namespace mhg {

// Fixed-width bit set folded from 64-bit substructure identifiers.
class Fingerprint {
 public:
  explicit Fingerprint(int bits = 2048);

  void fold_in(std::uint64_t identifier);
  int width() const { return bits_; }
  int count() const;
  bool test(int bit) const;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  int bits_;
  std::vector<std::uint64_t> words_;
};

// ECFP-style iterative neighborhood hashing: round 0 hashes the atom label,
// round r hashes (own id, sorted (bond label, neighbor id) pairs). All
// identifiers from rounds 0..radius are folded in. Isomorphic graphs give
// identical fingerprints.
Fingerprint morgan_fingerprint(const MolecularGraph& g, int radius = 2,
                               int bits = 2048);

// |a & b| / |a | b|; 1.0 when both empty. Throws WidthMismatch.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

}  // namespace mhg

#endif  // MHG_FINGERPRINT_HPP
