#pragma once

// Enumeration of nonfanout inflations up to isomorphism, and of the
// sub-network isomorphism pairs that drive the C1 / C2 marginal constraints.
//
// Strategy: brute force over wiring tuples normalized so that each source's
// first attached slot is the identity permutation (hence the raw count
// prod_i (K!)^(attached_i - 1)), canonical form by exhaustive minimization
// over the copy-relabeling group (S_K per party type and per source type),
// then a further quotient by the base network's cardinality-preserving party
// permutations. `multiplicity` counts copy-relabel classes inside an orbit
// (the Fig.-1-style class count); `raw_wirings` counts normalized wirings.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "losr/network.hpp"

namespace losr {

struct InflationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InflationClass {
  Inflation representative;
  long long multiplicity = 1;   // copy-relabel classes merged into this orbit
  long long raw_wirings = 1;    // normalized raw wirings in this orbit
};

struct InflationEnumeration {
  std::vector<InflationClass> classes;
  unsigned long long raw_wiring_count = 1;  // prod_i (K!)^(attached_i - 1)
};

namespace detail {

using Wiring = std::vector<std::vector<std::vector<int>>>;

inline std::vector<std::vector<int>> all_permutations(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<int> flatten_wiring(const Wiring& w) {
  std::vector<int> out;
  for (const auto& src : w)
    for (const auto& row : src) out.insert(out.end(), row.begin(), row.end());
  return out;
}

inline Wiring unflatten_wiring(const std::vector<int>& key, int n, int order) {
  Wiring w(n, std::vector<std::vector<int>>(order, std::vector<int>(n - 1)));
  std::size_t ix = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < order; ++k)
      for (int t = 0; t < n - 1; ++t) w[i][k][t] = key[ix++];
  return w;
}

/// Lexicographic minimum of the flattened wiring over all party-copy and
/// source-copy relabelings. For a fixed party relabeling the source blocks
/// are independent, so each block minimizes over its own S_K separately.
inline std::vector<int> copy_relabel_canonical(const Scenario& scn, int order,
                                               const Wiring& w) {
  const int n = scn.n();
  const auto perms = all_permutations(order);
  const int np = static_cast<int>(perms.size());

  std::vector<int> best;
  std::vector<int> sigma(n, 0);  // permutation index per party type
  for (;;) {
    std::vector<int> key;
    key.reserve(static_cast<std::size_t>(n) * order * (n - 1));
    for (int i = 0; i < n; ++i) {
      const auto types = scn.parties_of_source(i);
      std::vector<int> best_block;
      for (const auto& tau : perms) {
        std::vector<int> block;
        block.reserve(static_cast<std::size_t>(order) * types.size());
        for (int k = 0; k < order; ++k)
          for (std::size_t t = 0; t < types.size(); ++t)
            block.push_back(perms[sigma[types[t]]][w[i][tau[k]][t]]);
        if (best_block.empty() || block < best_block) best_block = std::move(block);
      }
      key.insert(key.end(), best_block.begin(), best_block.end());
    }
    if (best.empty() || key < best) best = std::move(key);

    int j = n - 1;
    while (j >= 0 && sigma[j] == np - 1) sigma[j--] = 0;
    if (j < 0) break;
    ++sigma[j];
  }
  return best;
}

/// Cardinality-preserving party permutations of the canonical scenario;
/// each one maps source i to source rho(i).
inline std::vector<std::vector<int>> base_automorphisms(const Scenario& scn) {
  const int n = scn.n();
  std::vector<int> rho(n);
  std::iota(rho.begin(), rho.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j)
      ok = scn.party(rho[j]).input_cardinality == scn.party(j).input_cardinality &&
           scn.party(rho[j]).output_cardinality == scn.party(j).output_cardinality;
    if (ok) out.push_back(rho);
  } while (std::next_permutation(rho.begin(), rho.end()));
  return out;
}

inline Wiring apply_party_permutation(const Scenario& scn, int order,
                                      const Wiring& w, const std::vector<int>& rho) {
  const int n = scn.n();
  Wiring out(n, std::vector<std::vector<int>>(order, std::vector<int>(n - 1)));
  for (int i = 0; i < n; ++i) {
    const auto types = scn.parties_of_source(i);
    const auto types2 = scn.parties_of_source(rho[i]);
    for (std::size_t t = 0; t < types.size(); ++t) {
      const int t2 = static_cast<int>(
          std::find(types2.begin(), types2.end(), rho[types[t]]) - types2.begin());
      for (int k = 0; k < order; ++k) out[rho[i]][k][t2] = w[i][k][t];
    }
  }
  return out;
}

}  // namespace detail

/// All nonfanout inflations of the given order, one representative per
/// isomorphism class. Throws on resource-cap overrun before enumerating.
inline InflationEnumeration enumerate_inflations(
    const Scenario& scenario, int order,
    unsigned long long max_raw_wirings = 1'000'000ULL) {
  if (order < 1) throw InflationError("inflation order must be >= 1");
  const int n = scenario.n();

  unsigned long long kfact = 1;
  for (int j = 2; j <= order; ++j) kfact *= j;
  const int dof = n * (n - 2);  // (attached - 1) free slots per source
  unsigned long long raw = 1;
  for (int d = 0; d < dof; ++d) {
    if (raw > max_raw_wirings / kfact)
      throw InflationError("raw wiring count exceeds the configured cap");
    raw *= kfact;
  }
  if (raw > max_raw_wirings)
    throw InflationError("raw wiring count exceeds the configured cap");

  const auto perms = detail::all_permutations(order);

  // normalized enumeration: slot 0 of every source is the identity
  std::map<std::vector<int>, long long> class_sizes;  // canonical key -> raw size
  std::vector<int> choice(std::max(dof, 1), 0);
  detail::Wiring w(n, std::vector<std::vector<int>>(order, std::vector<int>(n - 1)));
  for (unsigned long long it = 0; it < raw; ++it) {
    int d = 0;
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < n - 1; ++t) {
        const auto& pi = (t == 0) ? perms[0] : perms[choice[d++]];
        for (int k = 0; k < order; ++k) w[i][k][t] = pi[k];
      }
    class_sizes[detail::copy_relabel_canonical(scenario, order, w)] += 1;

    int j = dof - 1;
    while (j >= 0 && choice[j] == static_cast<int>(perms.size()) - 1) choice[j--] = 0;
    if (j < 0) break;
    ++choice[j];
  }

  // quotient the copy-relabel classes by base automorphisms
  const auto autos = detail::base_automorphisms(scenario);
  std::map<std::vector<int>, std::vector<int>> orbit_of;  // key -> orbit min key
  for (const auto& [key, size] : class_sizes) {
    auto wk = detail::unflatten_wiring(key, n, order);
    std::vector<int> orbit_min = key;
    for (const auto& rho : autos) {
      auto image = detail::copy_relabel_canonical(
          scenario, order, detail::apply_party_permutation(scenario, order, wk, rho));
      if (image < orbit_min) orbit_min = std::move(image);
    }
    orbit_of[key] = std::move(orbit_min);
  }

  std::map<std::vector<int>, InflationClass> orbits;
  for (const auto& [key, size] : class_sizes) {
    const auto& omin = orbit_of[key];
    auto it = orbits.find(omin);
    if (it == orbits.end()) {
      InflationClass cls{Inflation(&scenario, order,
                                   detail::unflatten_wiring(omin, n, order)),
                         0, 0};
      it = orbits.emplace(omin, std::move(cls)).first;
    }
    it->second.multiplicity += 1;
    it->second.raw_wirings += size;
  }

  InflationEnumeration out;
  out.raw_wiring_count = raw;
  for (auto& [key, cls] : orbits) out.classes.push_back(std::move(cls));
  return out;
}

/// C1 pair: the marginal of Q on `inflation_parties` is pinned to the
/// marginal of P on `base_types` (aligned position-wise; types coincide).
struct C1Pair {
  std::vector<PartyCopy> inflation_parties;
  std::vector<int> base_types;
};

/// C2 pair: the marginal of Q_1 on `parties1` equals the marginal of Q_2 on
/// `parties2` under the position-wise (type-preserving) bijection.
struct C2Pair {
  std::vector<PartyCopy> parties1;
  std::vector<PartyCopy> parties2;
};

namespace detail {

inline void check_subset_enumerable(const Inflation& infl) {
  if (infl.num_parties() > 20)
    throw InflationError("inflation too large for subset enumeration");
}

}  // namespace detail

/// All maximal party-copy sets of the inflation whose induced sub-network is
/// isomorphic to the base sub-network on the same types. Non-maximal sets are
/// pruned: their marginal equalities follow from the maximal ones.
inline std::vector<C1Pair> enumerate_c1_pairs(const Inflation& inflation,
                                              const Scenario& scenario) {
  if (&inflation.base() != &scenario)
    throw InflationError("inflation was not built over this scenario");
  detail::check_subset_enumerable(inflation);

  const auto parties = inflation.all_parties();  // sorted (type, copy)
  const int m = static_cast<int>(parties.size());
  std::vector<std::uint32_t> valid;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<PartyCopy> sel;
    std::vector<int> types;
    bool distinct = true;
    for (int j = 0; j < m && distinct; ++j) {
      if (!(mask & (1u << j))) continue;
      if (!types.empty() && types.back() == parties[j].type) distinct = false;
      sel.push_back(parties[j]);
      types.push_back(parties[j].type);
    }
    if (!distinct) continue;
    if (subnetwork_isomorphism(SubNetwork::of_inflation(inflation, sel),
                               SubNetwork::of_scenario(scenario, types)))
      valid.push_back(mask);
  }

  std::vector<C1Pair> out;
  for (std::uint32_t mask : valid) {
    bool maximal = true;
    for (std::uint32_t other : valid)
      if (other != mask && (mask & other) == mask) maximal = false;
    if (!maximal) continue;
    C1Pair pair;
    for (int j = 0; j < m; ++j)
      if (mask & (1u << j)) {
        pair.inflation_parties.push_back(parties[j]);
        pair.base_types.push_back(parties[j].type);
      }
    out.push_back(std::move(pair));
  }
  return out;
}

namespace detail {

using PairSet = std::vector<std::pair<PartyCopy, PartyCopy>>;

inline PairSet pair_set(const C2Pair& p) {
  PairSet s;
  for (std::size_t j = 0; j < p.parties1.size(); ++j)
    s.emplace_back(p.parties1[j], p.parties2[j]);
  std::sort(s.begin(), s.end());
  return s;
}

inline PairSet reversed(const PairSet& s) {
  PairSet r;
  for (const auto& [a, b] : s) r.emplace_back(b, a);
  std::sort(r.begin(), r.end());
  return r;
}

inline bool pair_subset(const PairSet& small, const PairSet& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace detail

/// All maximal isomorphic sub-network pairs across two inflations of the same
/// base (i1 == i2 allowed; that case captures in-inflation symmetries such as
/// the global copy swap). Pairs implied by a larger pair under the same
/// bijection restriction are pruned; for i1 == i2 each unordered pair is
/// reported once, in canonical orientation.
inline std::vector<C2Pair> enumerate_c2_pairs(const Inflation& i1,
                                              const Inflation& i2) {
  if (&i1.base() != &i2.base())
    throw InflationError("C2 pairs require inflations of the same scenario");
  detail::check_subset_enumerable(i1);
  detail::check_subset_enumerable(i2);
  const bool same = (&i1 == &i2) || (i1.order() == i2.order() && i1.wiring() == i2.wiring());

  const auto p1 = i1.all_parties();
  const auto p2 = i2.all_parties();
  const int n = i1.base().n();

  // group i2's parties by type for the per-type matchings
  std::vector<std::vector<PartyCopy>> by_type(n);
  for (PartyCopy p : p2) by_type[p.type].push_back(p);

  std::vector<C2Pair> found;
  const int m1 = static_cast<int>(p1.size());
  for (std::uint32_t mask = 1; mask < (1u << m1); ++mask) {
    std::vector<PartyCopy> sel1;
    std::vector<int> count(n, 0);
    for (int j = 0; j < m1; ++j)
      if (mask & (1u << j)) {
        sel1.push_back(p1[j]);
        ++count[p1[j].type];
      }

    // choose, per type, an ordered arrangement of that many i2 copies
    std::vector<std::vector<std::vector<PartyCopy>>> options(n);
    bool possible = true;
    for (int t = 0; t < n && possible; ++t) {
      if (count[t] == 0) {
        options[t].push_back({});
        continue;
      }
      if (count[t] > static_cast<int>(by_type[t].size())) {
        possible = false;
        break;
      }
      // all ordered count[t]-arrangements of by_type[t]
      std::vector<int> idx(by_type[t].size());
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end());
      std::vector<bool> used(by_type[t].size(), false);
      std::vector<PartyCopy> cur;
      std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == count[t]) {
          options[t].push_back(cur);
          return;
        }
        for (std::size_t u = 0; u < by_type[t].size(); ++u) {
          if (used[u]) continue;
          used[u] = true;
          cur.push_back(by_type[t][u]);
          rec();
          cur.pop_back();
          used[u] = false;
        }
      };
      rec();
    }
    if (!possible) continue;

    // odometer over the per-type choices
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
      std::vector<std::size_t> cursor(n, 0);
      std::vector<PartyCopy> sel2;
      for (PartyCopy p : sel1) {
        sel2.push_back(options[p.type][pick[p.type]][cursor[p.type]]);
        ++cursor[p.type];
      }
      {
        auto sorted = sel2;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() &&
            subnetwork_isomorphism(SubNetwork::of_inflation(i1, sel1),
                                   SubNetwork::of_inflation(i2, sel2)))
          found.push_back({sel1, sel2});
      }
      int t = n - 1;
      while (t >= 0 && pick[t] + 1 == options[t].size()) pick[t--] = 0;
      if (t < 0) break;
      ++pick[t];
    }
  }

  // canonical orientation for the i1 == i2 case
  std::vector<detail::PairSet> sets;
  std::vector<C2Pair> oriented;
  for (auto& pr : found) {
    auto s = detail::pair_set(pr);
    if (same) {
      auto r = detail::reversed(s);
      if (r < s) {
        // report the reversed orientation instead
        C2Pair flipped;
        for (const auto& [a, b] : r) {
          flipped.parties1.push_back(a);
          flipped.parties2.push_back(b);
        }
        s = std::move(r);
        pr = std::move(flipped);
      }
    }
    if (std::find(sets.begin(), sets.end(), s) != sets.end()) continue;
    sets.push_back(std::move(s));
    oriented.push_back(std::move(pr));
  }

  std::vector<C2Pair> out;
  for (std::size_t a = 0; a < oriented.size(); ++a) {
    bool maximal = true;
    for (std::size_t b = 0; b < oriented.size() && maximal; ++b) {
      if (a == b) continue;
      if (detail::pair_subset(sets[a], sets[b])) maximal = false;
      if (same && detail::pair_subset(sets[a], detail::reversed(sets[b])))
        maximal = false;
    }
    if (maximal) out.push_back(oriented[a]);
  }
  return out;
}

}  // namespace losr
