#include "mhg/fingerprint.hpp"

#include <algorithm>
#include <bit>

#include "mhg/errors.hpp"

namespace mhg {

namespace {

// splitmix64 finalizer; fixed constants keep identifiers stable everywhere.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t seed, std::uint64_t value) {
  return mix(seed ^ mix(value));
}

std::uint64_t hash_atom(const AtomLabel& a) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  h = combine(h, static_cast<std::uint64_t>(a.element));
  h = combine(h, static_cast<std::uint64_t>(a.charge + 16));
  h = combine(h, static_cast<std::uint64_t>(a.implicit_h));
  h = combine(h, static_cast<std::uint64_t>(a.valence));
  h = combine(h, static_cast<std::uint64_t>(a.chirality));
  return h;
}

std::uint64_t hash_bond(const BondLabel& b) {
  std::uint64_t h = 0x13198a2e03707344ULL;
  h = combine(h, static_cast<std::uint64_t>(b.order));
  h = combine(h, static_cast<std::uint64_t>(b.ez));
  return h;
}

}  // namespace

Fingerprint::Fingerprint(int bits)
    : bits_(bits), words_((bits + 63) / 64, 0) {
  if (bits <= 0) throw Error("fingerprint width must be positive");
}

void Fingerprint::fold_in(std::uint64_t identifier) {
  int bit = static_cast<int>(identifier % static_cast<std::uint64_t>(bits_));
  words_[bit / 64] |= 1ULL << (bit % 64);
}

int Fingerprint::count() const {
  int total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

bool Fingerprint::test(int bit) const {
  return (words_[bit / 64] >> (bit % 64)) & 1ULL;
}

Fingerprint morgan_fingerprint(const MolecularGraph& g, int radius,
                               int bits) {
  Fingerprint fp(bits);
  const int n = g.atom_count();
  std::vector<std::uint64_t> ids(n);
  for (NodeId v = 0; v < n; ++v) {
    ids[v] = hash_atom(g.atom(v));
    fp.fold_in(ids[v]);
  }
  for (int round = 1; round <= radius; ++round) {
    std::vector<std::uint64_t> next(n);
    for (NodeId v = 0; v < n; ++v) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
      for (const auto& inc : g.incident(v)) {
        env.emplace_back(hash_bond(g.bond(inc.bond).label), ids[inc.neighbor]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = combine(0x082efa98ec4e6c89ULL, ids[v]);
      for (const auto& [bond_h, nbr_h] : env) {
        h = combine(h, bond_h);
        h = combine(h, nbr_h);
      }
      next[v] = h;
      fp.fold_in(h);
    }
    ids = std::move(next);
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width()) {
    throw WidthMismatch("fingerprint widths differ: " +
                        std::to_string(a.width()) + " vs " +
                        std::to_string(b.width()));
  }
  long intersection = 0;
  long unions = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    intersection += std::popcount(a.words()[i] & b.words()[i]);
    unions += std::popcount(a.words()[i] | b.words()[i]);
  }
  if (unions == 0) return 1.0;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

}  // namespace mhg
