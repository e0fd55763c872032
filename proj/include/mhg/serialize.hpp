#ifndef MHG_SERIALIZE_HPP
#define MHG_SERIALIZE_HPP

#include <string>
#include <vector>

#include "mhg/grammar.hpp"

namespace mhg {

// JSON grammar file: format version, rule table (lhs, nodes, hyperedges,
// external order, non-terminal order, canonical key) and start-rule ids.
// Keys are verified on load by re-canonicalizing every rule.
void save_grammar(const Mhg& mhg, const std::string& path);
Mhg load_grammar(const std::string& path);

std::string grammar_to_json(const Mhg& mhg);
Mhg grammar_from_json(const std::string& text);

// JSON sequence file: one parse sequence (and optionally the source SMILES)
// per molecule.
void save_sequences(const std::vector<ParseSequence>& sequences,
                    const std::vector<std::string>& smiles,
                    const std::string& path);
std::pair<std::vector<ParseSequence>, std::vector<std::string>> load_sequences(
    const std::string& path);

}  // namespace mhg

#endif  // MHG_SERIALIZE_HPP
