#ifndef MHG_TESTS_HELPERS_HPP
#define MHG_TESTS_HELPERS_HPP

#include <string>
#include <vector>

#include "mhg/hypergraph.hpp"
#include "mhg/molgraph.hpp"
#include "mhg/rng.hpp"
#include "mhg/smiles.hpp"

namespace helpers {

// Rebuilds g with atom ids permuted: new id perm[v] gets old atom v.
inline mhg::MolecularGraph permute_graph(const mhg::MolecularGraph& g,
                                         const std::vector<int>& perm) {
  mhg::MolecularGraph out;
  std::vector<mhg::AtomLabel> labels(g.atom_count());
  for (int v = 0; v < g.atom_count(); ++v) labels[perm[v]] = g.atom(v);
  for (const auto& label : labels) out.add_atom(label);
  for (const auto& bond : g.bonds()) {
    out.add_bond(perm[bond.u], perm[bond.v], bond.label);
  }
  return out;
}

inline std::vector<int> random_permutation(int n, mhg::Rng& rng) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[static_cast<int>(rng.below(i + 1))]);
  }
  return perm;
}

// A small, structurally diverse molecule set used across tests.
inline std::vector<std::string> small_molecules() {
  return {
      "CC",
      "CCO",
      "CC(C)C",
      "C1CCCCC1",
      "C1=CC=CC=C1",
      "C1=CC=CC=C1O",
      "CC(=O)OC",
      "C1CCC2CCCCC2C1",
      "N#CC1=CC=CC=C1",
      "F/C=C/F",
      "F/C=C\\F",
      "C[C@H](N)C(=O)O",
      "CS(=O)(=O)C",
      "[NH3+]CC([O-])=O",
      "ClC1=CC=C(Br)C=C1",
      "C1=CC=NC=C1",
      "CCOC(=O)CC",
      "C1CC1",
      "OCC(O)CO",
      "CN1CCCC1",
  };
}

inline std::vector<mhg::MolecularGraph> parse_all(
    const std::vector<std::string>& smiles) {
  std::vector<mhg::MolecularGraph> graphs;
  for (const auto& s : smiles) graphs.push_back(mhg::parse_smiles(s));
  return graphs;
}

inline std::vector<mhg::Hypergraph> encode_all(
    const std::vector<mhg::MolecularGraph>& graphs) {
  std::vector<mhg::Hypergraph> hs;
  for (const auto& g : graphs) hs.push_back(mhg::enc_h(g));
  return hs;
}

}  // namespace helpers

#endif  // MHG_TESTS_HELPERS_HPP
