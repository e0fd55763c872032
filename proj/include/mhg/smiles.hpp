#ifndef MHG_SMILES_HPP
#define MHG_SMILES_HPP

#include <string>
#include <vector>

#include "mhg/molgraph.hpp"

namespace mhg {

// Kekule-only SMILES dialect: organic-subset and bracket atoms over
// {B,C,N,O,F,P,S,Cl,Br,I,H}, bond symbols - = # / \, ring closures (digits
// and %nn), branches, charges, @/@@ chirality, bracket H counts. Lowercase
// aromatic atoms are rejected with AromaticNotSupported.
MolecularGraph parse_smiles(const std::string& text);

// Deterministic writer; parse_smiles(write_smiles(g)) is isomorphic to g.
// Throws UnsupportedFeature for graphs outside the dialect.
std::string write_smiles(const MolecularGraph& g);

struct RejectedLine {
  int line_number = 0;  // 1-based
  std::string text;
  std::string reason;
};

struct CorpusReport {
  int accepted = 0;
  std::vector<RejectedLine> rejected;
};

// One SMILES per line; '#'-prefixed comment lines and blank lines are
// skipped; trailing whitespace-separated fields are ignored. Rejected lines
// are recorded, never fatal. Throws IoError if the file cannot be read.
std::pair<std::vector<MolecularGraph>, CorpusReport> load_dataset(
    const std::string& path);

// Same contract as load_dataset, applied to already-split lines.
std::pair<std::vector<MolecularGraph>, CorpusReport> parse_dataset_lines(
    const std::vector<std::string>& lines);

}  // namespace mhg

#endif  // MHG_SMILES_HPP
