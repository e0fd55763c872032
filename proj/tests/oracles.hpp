#ifndef MHG_TESTS_ORACLES_HPP
#define MHG_TESTS_ORACLES_HPP

// Brute-force reference implementations used only as test oracles. They are
// deliberately independent of the library's algorithms: isomorphism by
// permutation enumeration, cycle bases from exhaustive simple-cycle
// enumeration, eigenpairs from Jacobi rotations, linear solves by Gaussian
// elimination.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "mhg/grammar.hpp"
#include "mhg/molgraph.hpp"

namespace oracles {

// Label-preserving isomorphism by trying every node permutation. Only for
// tiny graphs.
inline bool brute_force_isomorphic(const mhg::MolecularGraph& a,
                                   const mhg::MolecularGraph& b) {
  const int n = a.atom_count();
  if (n != b.atom_count() || a.bond_count() != b.bond_count()) return false;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      if (a.atom(v) != b.atom(perm[v])) ok = false;
    }
    for (int e = 0; e < a.bond_count() && ok; ++e) {
      const auto& bond = a.bond(e);
      auto image = b.find_bond(perm[bond.u], perm[bond.v]);
      if (!image || b.bond(*image).label != bond.label) ok = false;
    }
    if (ok) {
      // Edge counts match, so the map is a bijection on edges too.
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// All simple cycles as edge sets, by DFS path extension from each root.
inline std::vector<std::vector<int>> all_simple_cycles(
    const mhg::MolecularGraph& g) {
  std::vector<std::vector<int>> cycles;
  std::set<std::vector<int>> seen;
  const int n = g.atom_count();
  std::vector<int> path_nodes;
  std::vector<int> path_bonds;
  std::vector<bool> on_path(n, false);

  std::function<void(int, int)> extend = [&](int root, int v) {
    for (const auto& inc : g.incident(v)) {
      if (!path_bonds.empty() && inc.bond == path_bonds.back()) continue;
      if (inc.neighbor == root && path_bonds.size() >= 2) {
        std::vector<int> cycle = path_bonds;
        cycle.push_back(inc.bond);
        std::sort(cycle.begin(), cycle.end());
        if (seen.insert(cycle).second) cycles.push_back(cycle);
        continue;
      }
      if (on_path[inc.neighbor] || inc.neighbor < root) continue;
      on_path[inc.neighbor] = true;
      path_bonds.push_back(inc.bond);
      extend(root, inc.neighbor);
      path_bonds.pop_back();
      on_path[inc.neighbor] = false;
    }
  };
  for (int root = 0; root < n; ++root) {
    on_path.assign(n, false);
    on_path[root] = true;
    path_bonds.clear();
    extend(root, root);
  }
  return cycles;
}

// Minimum cycle basis lengths: greedy GF(2) independence over the complete
// simple-cycle set ordered by length.
inline std::vector<int> brute_force_ring_sizes(const mhg::MolecularGraph& g) {
  auto cycles = all_simple_cycles(g);
  std::stable_sort(cycles.begin(), cycles.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() < b.size();
                   });
  const int m = g.bond_count();
  auto to_bits = [m](const std::vector<int>& cycle) {
    std::vector<std::uint64_t> bits((m + 63) / 64, 0);
    for (int e : cycle) bits[e / 64] ^= 1ULL << (e % 64);
    return bits;
  };
  std::vector<std::vector<std::uint64_t>> basis;
  std::vector<int> result;
  for (const auto& cycle : cycles) {
    auto bits = to_bits(cycle);
    for (const auto& row : basis) {
      // Reduce by the row's lowest set bit.
      int pivot = -1;
      for (std::size_t w = 0; w < row.size() && pivot < 0; ++w) {
        if (row[w]) pivot = static_cast<int>(w * 64 + std::countr_zero(row[w]));
      }
      if (pivot >= 0 && ((bits[pivot / 64] >> (pivot % 64)) & 1ULL)) {
        for (std::size_t w = 0; w < bits.size(); ++w) bits[w] ^= row[w];
      }
    }
    bool zero = std::all_of(bits.begin(), bits.end(),
                            [](std::uint64_t w) { return w == 0; });
    if (!zero) {
      basis.push_back(bits);
      result.push_back(static_cast<int>(cycle.size()));
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

// Rule isomorphism respecting lhs and external order, by enumerating node
// permutations that fix external positions and matching hyperedges greedily.
inline bool brute_force_rule_isomorphic(const mhg::ProductionRule& a,
                                        const mhg::ProductionRule& b) {
  using mhg::HyperedgeLabel;
  if (a.lhs != b.lhs) return false;
  const int n = a.rhs.node_count();
  if (n != b.rhs.node_count()) return false;
  if (a.rhs.hyperedge_count() != b.rhs.hyperedge_count()) return false;
  if (a.external.size() != b.external.size()) return false;

  std::vector<int> internal_a, internal_b;
  std::vector<bool> ext_a(n, false), ext_b(n, false);
  for (std::size_t i = 0; i < a.external.size(); ++i) {
    ext_a[a.external[i]] = true;
    ext_b[b.external[i]] = true;
  }
  for (int v = 0; v < n; ++v) {
    if (!ext_a[v]) internal_a.push_back(v);
    if (!ext_b[v]) internal_b.push_back(v);
  }
  if (internal_a.size() != internal_b.size()) return false;

  auto edges_match = [&](const std::vector<int>& map) {
    std::vector<bool> used(b.rhs.hyperedge_count(), false);
    for (int e = 0; e < a.rhs.hyperedge_count(); ++e) {
      const auto& ea = a.rhs.hyperedge(e);
      bool found = false;
      for (int f = 0; f < b.rhs.hyperedge_count() && !found; ++f) {
        if (used[f]) continue;
        const auto& eb = b.rhs.hyperedge(f);
        if (ea.label != eb.label || ea.members.size() != eb.members.size()) {
          continue;
        }
        if (ea.label.kind == HyperedgeLabel::Kind::NonTerminal) {
          bool same = true;
          for (std::size_t p = 0; p < ea.members.size(); ++p) {
            if (map[ea.members[p]] != eb.members[p]) same = false;
          }
          if (!same) continue;
        } else {
          std::vector<int> ma, mb;
          for (auto v : ea.members) ma.push_back(map[v]);
          for (auto v : eb.members) mb.push_back(v);
          std::sort(ma.begin(), ma.end());
          std::sort(mb.begin(), mb.end());
          if (ma != mb) continue;
        }
        used[f] = true;
        found = true;
      }
      if (!found) return false;
    }
    return true;
  };

  std::vector<int> assignment(internal_b.begin(), internal_b.end());
  std::sort(assignment.begin(), assignment.end());
  do {
    std::vector<int> map(n, -1);
    for (std::size_t i = 0; i < a.external.size(); ++i) {
      map[a.external[i]] = b.external[i];
    }
    bool label_ok = true;
    for (std::size_t i = 0; i < internal_a.size(); ++i) {
      map[internal_a[i]] = assignment[i];
      if (a.rhs.node_label(internal_a[i]) != b.rhs.node_label(assignment[i])) {
        label_ok = false;
      }
    }
    for (std::size_t i = 0; i < a.external.size() && label_ok; ++i) {
      if (a.rhs.node_label(a.external[i]) != b.rhs.node_label(b.external[i])) {
        label_ok = false;
      }
    }
    if (label_ok && edges_match(map)) return true;
  } while (std::next_permutation(assignment.begin(), assignment.end()));
  return false;
}

// Jacobi eigendecomposition of a small symmetric matrix; returns
// (eigenvalues, eigenvectors as rows), descending.
inline std::pair<std::vector<double>, std::vector<std::vector<double>>>
jacobi_eigen(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-30) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a[x][x] > a[y][y]; });
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  for (int k : order) {
    eigenvalues.push_back(a[k][k]);
    std::vector<double> column(n);
    for (int i = 0; i < n; ++i) column[i] = v[i][k];
    eigenvectors.push_back(column);
  }
  return {eigenvalues, eigenvectors};
}

// Dense symmetric solve by Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int row = col + 1; row < n; ++row) {
      double factor = a[row][col] / a[col][col];
      for (int k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (int row = n - 1; row >= 0; --row) {
    double sum = b[row];
    for (int k = row + 1; k < n; ++k) sum -= a[row][k] * x[k];
    x[row] = sum / a[row][row];
  }
  return x;
}

}  // namespace oracles

#endif  // MHG_TESTS_ORACLES_HPP
