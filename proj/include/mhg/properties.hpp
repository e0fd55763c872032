#ifndef MHG_PROPERTIES_HPP
#define MHG_PROPERTIES_HPP

#include <span>
#include <vector>

#include "mhg/molgraph.hpp"

namespace mhg {

// Per-component z-scoring fitted on a training column. Constant columns are
// flagged and passed through unscaled.
struct Standardizer {
  double mean = 0.0;
  double stddev = 1.0;
  bool constant = false;
  bool fitted = false;

  static Standardizer fit(std::span<const double> column);
  double transform(double x) const;  // throws UnfittedStandardizer
};

// max(ring size) - 6, clamped at 0; 0 for acyclic graphs.
int cycle_score(const MolecularGraph& g);

// Additive per-atom contribution proxy for the octanol-water partition
// coefficient. Deterministic and pluggable; not Crippen logP.
double logp_proxy(const MolecularGraph& g);

// Size/branching/ring proxy for synthetic accessibility.
double sa_proxy(const MolecularGraph& g);

// logP - SA - cycle with each component standardized on a training set, or
// the raw two-term variant (logP - SA, no cycle term).
class PropertySpec {
 public:
  static PropertySpec fit(const std::vector<MolecularGraph>& train);
  static PropertySpec raw();

  double score(const MolecularGraph& g) const;
  bool is_raw() const { return raw_; }

 private:
  bool raw_ = false;
  Standardizer logp_;
  Standardizer sa_;
  Standardizer cycle_;
};

double penalized_logp(const MolecularGraph& g, const PropertySpec& spec);

}  // namespace mhg

#endif  // MHG_PROPERTIES_HPP
