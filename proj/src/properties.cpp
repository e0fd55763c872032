#include "mhg/properties.hpp"

#include <cmath>

#include "mhg/errors.hpp"

namespace mhg {

Standardizer Standardizer::fit(std::span<const double> column) {
  Standardizer s;
  s.fitted = true;
  if (column.empty()) {
    s.constant = true;
    return s;
  }
  double sum = 0.0;
  for (double x : column) sum += x;
  s.mean = sum / static_cast<double>(column.size());
  double ss = 0.0;
  for (double x : column) ss += (x - s.mean) * (x - s.mean);
  double variance = ss / static_cast<double>(column.size());
  if (variance <= 0.0) {
    s.constant = true;
    s.stddev = 1.0;
  } else {
    s.stddev = std::sqrt(variance);
  }
  return s;
}

double Standardizer::transform(double x) const {
  if (!fitted) throw UnfittedStandardizer("standardizer was never fitted");
  if (constant) return x - mean;
  return (x - mean) / stddev;
}

int cycle_score(const MolecularGraph& g) {
  auto rings = ring_sizes(g);
  if (rings.empty()) return 0;
  int longest = rings.back();
  return longest > 6 ? longest - 6 : 0;
}

double logp_proxy(const MolecularGraph& g) {
  double total = 0.0;
  for (const AtomLabel& a : g.atoms()) {
    switch (a.element) {
      case Element::C: total += 0.2; break;
      case Element::N: total -= 0.2; break;
      case Element::O: total -= 0.4; break;
      case Element::S: total += 0.1; break;
      case Element::P: total -= 0.3; break;
      case Element::F:
      case Element::Cl:
      case Element::Br:
      case Element::I: total += 0.4; break;
      case Element::B:
      case Element::H: break;
    }
    total += 0.1 * a.implicit_h;
  }
  return total;
}

double sa_proxy(const MolecularGraph& g) {
  int heavy = 0;
  int branched = 0;
  for (NodeId v = 0; v < g.atom_count(); ++v) {
    if (g.atom(v).element == Element::H) continue;
    ++heavy;
    if (g.incident(v).size() >= 3) ++branched;
  }
  int rings = static_cast<int>(ring_sizes(g).size());
  return 0.05 * heavy + 0.3 * rings + 0.5 * branched;
}

PropertySpec PropertySpec::fit(const std::vector<MolecularGraph>& train) {
  std::vector<double> logp, sa, cycle;
  logp.reserve(train.size());
  for (const MolecularGraph& g : train) {
    logp.push_back(logp_proxy(g));
    sa.push_back(sa_proxy(g));
    cycle.push_back(static_cast<double>(cycle_score(g)));
  }
  PropertySpec spec;
  spec.logp_ = Standardizer::fit(logp);
  spec.sa_ = Standardizer::fit(sa);
  spec.cycle_ = Standardizer::fit(cycle);
  return spec;
}

PropertySpec PropertySpec::raw() {
  PropertySpec spec;
  spec.raw_ = true;
  return spec;
}

double PropertySpec::score(const MolecularGraph& g) const {
  if (raw_) return logp_proxy(g) - sa_proxy(g);
  return logp_.transform(logp_proxy(g)) - sa_.transform(sa_proxy(g)) -
         cycle_.transform(static_cast<double>(cycle_score(g)));
}

double penalized_logp(const MolecularGraph& g, const PropertySpec& spec) {
  return spec.score(g);
}

}  // namespace mhg
