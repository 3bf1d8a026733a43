#pragma once

// Scenarios N_N (one source per (N-1)-subset of parties), their nonfanout
// inflations, sub-networks and index-dropping isomorphisms.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace losr {

struct PartySpec {
  std::string name;
  int input_cardinality = 1;
  int output_cardinality = 2;

  friend bool operator==(const PartySpec&, const PartySpec&) = default;
};

/// The canonical N-party scenario: party j attaches every source except the
/// j-th. Parties and sources are indexed 0..n-1; source i attaches every
/// party except party i.
class Scenario {
 public:
  Scenario(std::vector<PartySpec> parties) : parties_(std::move(parties)) {
    if (parties_.size() < 2)
      throw std::invalid_argument("scenario needs at least 2 parties");
    std::set<std::string> names;
    for (const auto& p : parties_) {
      if (p.input_cardinality < 1 || p.output_cardinality < 1)
        throw std::invalid_argument("party cardinalities must be positive");
      if (!names.insert(p.name).second)
        throw std::invalid_argument("duplicate party name: " + p.name);
    }
  }

  int n() const { return static_cast<int>(parties_.size()); }
  const std::vector<PartySpec>& parties() const { return parties_; }
  const PartySpec& party(int j) const { return parties_.at(j); }

  bool source_attaches(int source, int party) const { return source != party; }

  std::vector<int> parties_of_source(int source) const {
    std::vector<int> out;
    for (int j = 0; j < n(); ++j)
      if (j != source) out.push_back(j);
    return out;
  }
  std::vector<int> sources_of_party(int party) const {
    return parties_of_source(party);
  }

 private:
  std::vector<PartySpec> parties_;
};

inline Scenario canonical_scenario(int n, std::vector<PartySpec> party_specs) {
  if (n < 2) throw std::invalid_argument("canonical scenario requires n >= 2");
  if (static_cast<int>(party_specs.size()) != n)
    throw std::invalid_argument("party_specs length must equal n");
  return Scenario(std::move(party_specs));
}

/// A party copy (type, copy index) inside an inflation; copy indices are
/// 0-based internally.
struct PartyCopy {
  int type = 0;
  int copy = 0;
  friend auto operator<=>(const PartyCopy&, const PartyCopy&) = default;
};

struct SourceCopy {
  int type = 0;
  int copy = 0;
  friend auto operator<=>(const SourceCopy&, const SourceCopy&) = default;
};

/// K-th order copy structure over a scenario. wiring[i][k][t] is the copy
/// index of the t-th attached party (in parties_of_source(i) order) that
/// source copy (i,k) attaches.
class Inflation {
 public:
  Inflation(const Scenario* base, int order,
            std::vector<std::vector<std::vector<int>>> wiring)
      : base_(base), order_(order), wiring_(std::move(wiring)) {
    if (order_ < 1) throw std::invalid_argument("inflation order must be >= 1");
    if (static_cast<int>(wiring_.size()) != base_->n())
      throw std::invalid_argument("wiring must cover every source type");
    for (const auto& src : wiring_) {
      if (static_cast<int>(src.size()) != order_)
        throw std::invalid_argument("wiring must cover every source copy");
      for (const auto& row : src)
        if (static_cast<int>(row.size()) != base_->n() - 1)
          throw std::invalid_argument("wiring row arity mismatch");
    }
  }

  const Scenario& base() const { return *base_; }
  int order() const { return order_; }
  const std::vector<std::vector<std::vector<int>>>& wiring() const {
    return wiring_;
  }

  int num_parties() const { return base_->n() * order_; }

  std::vector<PartyCopy> all_parties() const {
    std::vector<PartyCopy> out;
    for (int j = 0; j < base_->n(); ++j)
      for (int k = 0; k < order_; ++k) out.push_back({j, k});
    return out;
  }

  std::vector<PartyCopy> parties_of_source(SourceCopy s) const {
    const auto types = base_->parties_of_source(s.type);
    std::vector<PartyCopy> out;
    for (std::size_t t = 0; t < types.size(); ++t)
      out.push_back({types[t], wiring_[s.type][s.copy][t]});
    return out;
  }

  std::vector<SourceCopy> sources_of_party(PartyCopy p) const {
    std::vector<SourceCopy> out;
    for (int i = 0; i < base_->n(); ++i) {
      if (!base_->source_attaches(i, p.type)) continue;
      const auto types = base_->parties_of_source(i);
      const int t = static_cast<int>(
          std::find(types.begin(), types.end(), p.type) - types.begin());
      for (int k = 0; k < order_; ++k)
        if (wiring_[i][k][t] == p.copy) out.push_back({i, k});
    }
    return out;
  }

 private:
  const Scenario* base_;
  int order_;
  std::vector<std::vector<std::vector<int>>> wiring_;
};

/// Identity wiring of a given order: source copy k attaches copy k of each
/// of its parties (K disjoint copies of the base network).
inline Inflation identity_inflation(const Scenario& base, int order) {
  std::vector<std::vector<std::vector<int>>> w(
      base.n(), std::vector<std::vector<int>>(
                    order, std::vector<int>(base.n() - 1, 0)));
  for (int i = 0; i < base.n(); ++i)
    for (int k = 0; k < order; ++k)
      for (int t = 0; t < base.n() - 1; ++t) w[i][k][t] = k;
  return Inflation(&base, order, w);
}

/// Both nonfanout rules: per (source type, attached party type) the map
/// (source copy -> party copy) must be a permutation of the copy indices.
/// The source side is guaranteed by the wiring shape.
inline bool validate_inflation(const Inflation& candidate) {
  const int k = candidate.order();
  const auto& w = candidate.wiring();
  for (const auto& src : w) {
    for (std::size_t t = 0; t < src[0].size(); ++t) {
      std::vector<bool> seen(k, false);
      for (int c = 0; c < k; ++c) {
        const int m = src[c][t];
        if (m < 0 || m >= k || seen[m]) return false;
        seen[m] = true;
      }
    }
  }
  return true;
}

/// A sub-network: an ordered duplicate-free party(-copy) list plus all the
/// source copies those parties touch (derived, never chosen).
struct SubNetwork {
  const Inflation* host = nullptr;  // null when the host is the base scenario
  const Scenario* base = nullptr;
  std::vector<PartyCopy> parties;  // for a base host, copy is always 0

  static SubNetwork of_inflation(const Inflation& host,
                                 std::vector<PartyCopy> parties) {
    check_distinct(parties);
    return SubNetwork{&host, &host.base(), std::move(parties)};
  }
  static SubNetwork of_scenario(const Scenario& base, std::vector<int> types) {
    std::vector<PartyCopy> ps;
    for (int t : types) ps.push_back({t, 0});
    check_distinct(ps);
    return SubNetwork{nullptr, &base, std::move(ps)};
  }

  /// All source copies attached to the listed parties, with the set of listed
  /// party positions each one touches.
  std::map<SourceCopy, std::vector<int>> source_attachment() const {
    std::map<SourceCopy, std::vector<int>> out;
    for (std::size_t pos = 0; pos < parties.size(); ++pos) {
      if (host) {
        for (SourceCopy s : host->sources_of_party(parties[pos]))
          out[s].push_back(static_cast<int>(pos));
      } else {
        for (int s : base->sources_of_party(parties[pos].type))
          out[SourceCopy{s, 0}].push_back(static_cast<int>(pos));
      }
    }
    return out;
  }

 private:
  static void check_distinct(const std::vector<PartyCopy>& ps) {
    auto sorted = ps;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("sub-network party list has duplicates");
  }
};

struct IsoMap {
  // position-wise party bijection is implied by the ordered lists
  std::vector<std::pair<SourceCopy, SourceCopy>> source_bijection;
};

/// Index-dropping isomorphism between two sub-networks with the party
/// bijection fixed by list order; only the source correspondence is searched.
inline std::optional<IsoMap> subnetwork_isomorphism(const SubNetwork& g1,
                                                    const SubNetwork& g2) {
  if (g1.parties.size() != g2.parties.size()) return std::nullopt;
  for (std::size_t i = 0; i < g1.parties.size(); ++i)
    if (g1.parties[i].type != g2.parties[i].type) return std::nullopt;

  const auto att1 = g1.source_attachment();
  const auto att2 = g2.source_attachment();
  if (att1.size() != att2.size()) return std::nullopt;

  // group sources by (type, attached position set); matching multisets give
  // the bijection directly
  using Key = std::pair<int, std::vector<int>>;
  std::map<Key, std::vector<SourceCopy>> by_key1, by_key2;
  for (const auto& [s, pos] : att1) by_key1[{s.type, pos}].push_back(s);
  for (const auto& [s, pos] : att2) by_key2[{s.type, pos}].push_back(s);
  if (by_key1.size() != by_key2.size()) return std::nullopt;

  IsoMap iso;
  auto it1 = by_key1.begin();
  auto it2 = by_key2.begin();
  for (; it1 != by_key1.end(); ++it1, ++it2) {
    if (it1->first != it2->first || it1->second.size() != it2->second.size())
      return std::nullopt;
    for (std::size_t i = 0; i < it1->second.size(); ++i)
      iso.source_bijection.emplace_back(it1->second[i], it2->second[i]);
  }
  return iso;
}

}  // namespace losr
