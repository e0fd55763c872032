#include <doctest.h>

#include "mhg/errors.hpp"
#include "mhg/hypergraph.hpp"
#include "mhg/smiles.hpp"

#include "helpers.hpp"

using namespace mhg;

TEST_CASE("enc_h swaps bonds to nodes and atoms to hyperedges") {
  SUBCASE("ethane") {
    Hypergraph h = enc_h(parse_smiles("CC"));
    CHECK(h.node_count() == 1);
    CHECK(h.hyperedge_count() == 2);
    CHECK(h.degree(0) == 2);
    for (HyperedgeId e = 0; e < 2; ++e) {
      CHECK(h.hyperedge(e).members == std::vector<NodeId>{0});
    }
  }
  SUBCASE("propane: the middle atom's hyperedge holds both bond nodes") {
    Hypergraph h = enc_h(parse_smiles("CCC"));
    CHECK(h.node_count() == 2);
    CHECK(h.hyperedge_count() == 3);
    CHECK(h.hyperedge(1).members.size() == 2);
    CHECK(h.hyperedge(0).members.size() == 1);
    CHECK(h.hyperedge(2).members.size() == 1);
  }
  SUBCASE("cyclohexane: 2-regular with all hyperedges of size 2") {
    Hypergraph h = enc_h(parse_smiles("C1CCCCC1"));
    CHECK(h.node_count() == 6);
    CHECK(h.hyperedge_count() == 6);
    for (HyperedgeId e = 0; e < 6; ++e) {
      CHECK(h.hyperedge(e).members.size() == 2);
    }
    for (NodeId v = 0; v < 6; ++v) CHECK(h.degree(v) == 2);
  }
  SUBCASE("counts are preserved") {
    for (const auto& smiles : helpers::small_molecules()) {
      MolecularGraph g = parse_smiles(smiles);
      Hypergraph h = enc_h(g);
      CAPTURE(smiles);
      CHECK(h.node_count() == g.bond_count());
      CHECK(h.hyperedge_count() == g.atom_count());
    }
  }
}

TEST_CASE("enc_h rejects single-atom molecules") {
  CHECK_THROWS_AS(enc_h(parse_smiles("[NH4+]")), EmptyBondSet);
  CHECK_THROWS_AS(enc_h(parse_smiles("C")), EmptyBondSet);
}

TEST_CASE("check_molecular_hypergraph matches the two conditions") {
  SUBCASE("every encoded graph passes") {
    for (const auto& smiles : helpers::small_molecules()) {
      CAPTURE(smiles);
      CHECK(check_molecular_hypergraph(enc_h(parse_smiles(smiles))).empty());
    }
  }
  SUBCASE("a node shared by three hyperedges is a regularity violation") {
    Hypergraph h;
    NodeId n = h.add_node(BondLabel{1, EzConfig::None});
    for (int i = 0; i < 3; ++i) {
      h.add_hyperedge(
          HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
    }
    auto violations = check_molecular_hypergraph(h);
    REQUIRE_FALSE(violations.empty());
    bool regularity = false;
    for (const auto& v : violations) {
      if (v.message.find("degree") != std::string::npos) regularity = true;
    }
    CHECK(regularity);
  }
  SUBCASE("weighted size must match the atom's degree target") {
    // Carbon with implicit_h=0 expects weighted size 4, not 3.
    Hypergraph h;
    NodeId a = h.add_node(BondLabel{1, EzConfig::None});
    NodeId b = h.add_node(BondLabel{1, EzConfig::None});
    NodeId c = h.add_node(BondLabel{1, EzConfig::None});
    h.add_hyperedge(HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 0)),
                    {a, b, c});
    auto violations = check_molecular_hypergraph(h);
    bool cardinality = false;
    for (const auto& v : violations) {
      if (v.message.find("weighted size") != std::string::npos) {
        cardinality = true;
      }
    }
    CHECK(cardinality);
  }
  SUBCASE("non-terminal labels are violations") {
    Hypergraph h;
    NodeId n = h.add_node(BondLabel{1, EzConfig::None});
    h.add_hyperedge(
        HyperedgeLabel::nonterminal({BondLabel{1, EzConfig::None}}), {n});
    h.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
    CHECK_FALSE(check_molecular_hypergraph(h).empty());
  }
}

TEST_CASE("a double bond is one node with weight two") {
  Hypergraph h = enc_h(parse_smiles("C=C"));
  CHECK(h.node_count() == 1);
  CHECK(h.node_label(0).order == 2);
  CHECK(check_molecular_hypergraph(h).empty());
}

TEST_CASE("dec_h inverts enc_h up to isomorphism") {
  for (const auto& smiles : helpers::small_molecules()) {
    MolecularGraph g = parse_smiles(smiles);
    CAPTURE(smiles);
    CHECK(isomorphic(dec_h(enc_h(g)), g));
  }
}

TEST_CASE("dec_h rejects invalid hypergraphs") {
  SUBCASE("degree-3 node") {
    Hypergraph h;
    NodeId n = h.add_node(BondLabel{1, EzConfig::None});
    NodeId m = h.add_node(BondLabel{1, EzConfig::None});
    h.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
    h.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 2)), {n, m});
    h.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 2)), {n, m});
    CHECK_THROWS_AS(dec_h(h), NotTwoRegular);
  }
  SUBCASE("cardinality mismatch") {
    Hypergraph h;
    NodeId n = h.add_node(BondLabel{1, EzConfig::None});
    h.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 0)), {n});
    h.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
    CHECK_THROWS_AS(dec_h(h), CardinalityMismatch);
  }
}
