#pragma once

// Compiles (scenario, observed behavior P, inflation list) into the equality
// feasibility system of the weak-LOSR inflation test: one dense behavior
// block Q^(I) per inflation, with
//   C1   rows pinning maximal isomorphic sub-network marginals to P,
//   C2   rows equating isomorphic sub-network marginals across (or within)
//        inflation blocks,
//   normalization and (full generating set) nonsignalling rows per block.
// Variables are raw probabilities so Farkas duals translate directly into
// witness inequalities over the entries of P. Marginal rows fix dropped
// parties' inputs at 0; the nonsignalling rows make the choice immaterial.

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "losr/behavior.hpp"
#include "losr/inflation.hpp"
#include "losr/simplex.hpp"

namespace losr {

struct ConstraintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RowTag { C1, C2, Normalization, Nonsignalling };

inline const char* row_tag_name(RowTag t) {
  switch (t) {
    case RowTag::C1: return "C1";
    case RowTag::C2: return "C2";
    case RowTag::Normalization: return "NORM";
    case RowTag::Nonsignalling: return "NS";
  }
  return "?";
}

template <class S>
struct ConstraintRow {
  SparseRow<S> row;
  RowTag tag = RowTag::C1;
  std::string key;  // stable human-readable identity, e.g. "C1 b0 A1B1 x0,0 o1,0"
  // for C1 rows: flat indices into the observed behavior P whose sum equals
  // the right-hand side; lets dual multipliers translate into a witness
  // functional over the entries of P
  std::vector<long long> rhs_terms;
};

/// Dense variable layout of one inflation block: the behavior table of all
/// party copies in (type, copy) order, inputs outer / outputs inner.
struct BlockLayout {
  std::vector<PartyCopy> parties;
  std::vector<PartySpec> specs;
  long long size = 1;

  explicit BlockLayout(const Inflation& infl) {
    parties = infl.all_parties();
    for (PartyCopy p : parties) {
      PartySpec spec = infl.base().party(p.type);
      spec.name += std::to_string(p.copy + 1);
      specs.push_back(spec);
      size *= static_cast<long long>(spec.input_cardinality) * spec.output_cardinality;
    }
  }

  int position_of(PartyCopy p) const {
    for (std::size_t j = 0; j < parties.size(); ++j)
      if (parties[j] == p) return static_cast<int>(j);
    throw ConstraintError("party copy not in block");
  }

  long long flat(const std::vector<int>& x, const std::vector<int>& o) const {
    long long ix = 0, ox = 0, out_combos = 1;
    for (std::size_t j = 0; j < specs.size(); ++j) {
      ix = ix * specs[j].input_cardinality + x[j];
      ox = ox * specs[j].output_cardinality + o[j];
      out_combos *= specs[j].output_cardinality;
    }
    return ix * out_combos + ox;
  }
};

template <class S>
struct ConstraintSystem {
  const Scenario* scenario = nullptr;
  std::vector<Inflation> inflations;
  std::vector<BlockLayout> blocks;
  std::vector<long long> block_offset;
  long long num_vars = 0;
  std::vector<ConstraintRow<S>> rows;

  std::vector<SparseRow<S>> sparse_rows() const {
    std::vector<SparseRow<S>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.row);
    return out;
  }
};

namespace detail {

inline std::string party_list_key(const std::vector<PartyCopy>& ps,
                                  const Scenario& scn) {
  std::string s;
  for (PartyCopy p : ps) s += scn.party(p.type).name + std::to_string(p.copy + 1);
  return s;
}

inline std::string tuple_key(const std::vector<int>& v) {
  std::string s;
  for (std::size_t j = 0; j < v.size(); ++j)
    s += (j ? "," : "") + std::to_string(v[j]);
  return s;
}

/// Columns of the marginal sum over `positions` at (x_sub, o_sub) with all
/// other parties' inputs fixed to 0 and outputs summed.
inline void marginal_columns(const BlockLayout& block, long long offset,
                             const std::vector<int>& positions,
                             const std::vector<int>& x_sub,
                             const std::vector<int>& o_sub,
                             std::vector<long long>& out_cols) {
  const int n = static_cast<int>(block.parties.size());
  std::vector<int> x(n, 0), o(n, 0), rest_radix(n, 1);
  std::vector<bool> in_sub(n, false);
  for (std::size_t t = 0; t < positions.size(); ++t) {
    x[positions[t]] = x_sub[t];
    o[positions[t]] = o_sub[t];
    in_sub[positions[t]] = true;
  }
  for (int j = 0; j < n; ++j)
    if (!in_sub[j]) rest_radix[j] = block.specs[j].output_cardinality;
  std::vector<int> rest(n, 0);
  do {
    for (int j = 0; j < n; ++j)
      if (!in_sub[j]) o[j] = rest[j];
    out_cols.push_back(offset + block.flat(x, o));
  } while (detail::next_tuple(rest, rest_radix));
}

}  // namespace detail

/// Compile the feasibility system. The scenario and the behavior's party
/// order must agree; the inflations must be built over this scenario.
template <class S>
ConstraintSystem<S> compile(const Scenario& scenario, const Behavior<S>& p,
                            const std::vector<Inflation>& inflations,
                            long long max_lp_vars = 1'000'000) {
  if (inflations.empty()) throw ConstraintError("inflation list is empty");
  if (p.num_parties() != scenario.n())
    throw ConstraintError("behavior party list does not match the scenario");
  for (int j = 0; j < scenario.n(); ++j)
    if (p.parties()[j].input_cardinality != scenario.party(j).input_cardinality ||
        p.parties()[j].output_cardinality != scenario.party(j).output_cardinality)
      throw ConstraintError("behavior cardinalities do not match the scenario");
  if (!p.is_normalized() || !p.is_nonnegative())
    throw ConstraintError("behavior is not a probability table");
  if (!check_nonsignalling(p))
    throw ConstraintError("behavior is signalling; the test is undefined");
  for (const auto& infl : inflations) {
    if (&infl.base() != &scenario)
      throw ConstraintError("inflation not built over this scenario");
    if (!validate_inflation(infl))
      throw ConstraintError("invalid nonfanout wiring");
  }

  ConstraintSystem<S> sys;
  sys.scenario = &scenario;
  sys.inflations = inflations;
  for (const auto& infl : sys.inflations) {
    sys.blocks.emplace_back(infl);
    sys.block_offset.push_back(sys.num_vars);
    sys.num_vars += sys.blocks.back().size;
    if (sys.num_vars > max_lp_vars)
      throw ConstraintError("LP variable count exceeds the configured cap");
  }
  const int nb = static_cast<int>(sys.inflations.size());

  // ---- C1 rows ------------------------------------------------------------
  // the base scenario viewed as its own (order-1) block, for addressing P
  const Inflation base_as_inflation = identity_inflation(scenario, 1);
  const BlockLayout base_layout(base_as_inflation);
  for (int b = 0; b < nb; ++b) {
    const auto& block = sys.blocks[b];
    for (const auto& pair : enumerate_c1_pairs(sys.inflations[b], scenario)) {
      auto marg = marginalize(p, pair.base_types, /*verify_nonsignalling=*/false);
      std::vector<int> positions;
      for (PartyCopy q : pair.inflation_parties)
        positions.push_back(block.position_of(q));
      std::vector<int> in_radix, out_radix;
      for (int t : positions) {
        in_radix.push_back(block.specs[t].input_cardinality);
        out_radix.push_back(block.specs[t].output_cardinality);
      }
      const std::string skey = detail::party_list_key(pair.inflation_parties, scenario);
      std::vector<int> x(positions.size(), 0);
      do {
        std::vector<int> o(positions.size(), 0);
        do {
          ConstraintRow<S> row;
          row.tag = RowTag::C1;
          row.key = "C1 b" + std::to_string(b) + " " + skey + " x" +
                    detail::tuple_key(x) + " o" + detail::tuple_key(o);
          std::vector<long long> cols;
          detail::marginal_columns(block, sys.block_offset[b], positions, x, o, cols);
          for (long long c : cols) row.row.coeffs.emplace_back(static_cast<int>(c), S(1));
          row.row.rhs = marg.at(x, o);
          detail::marginal_columns(base_layout, 0, pair.base_types, x, o,
                                   row.rhs_terms);
          sys.rows.push_back(std::move(row));
        } while (detail::next_tuple(o, out_radix));
      } while (detail::next_tuple(x, in_radix));
    }
  }

  // ---- C2 rows ------------------------------------------------------------
  std::map<std::vector<std::pair<int, int>>, bool> seen_c2;  // signed support
  for (int b1 = 0; b1 < nb; ++b1) {
    for (int b2 = b1; b2 < nb; ++b2) {
      const auto pairs = enumerate_c2_pairs(sys.inflations[b1], sys.inflations[b2]);
      for (const auto& pair : pairs) {
        if (b1 == b2 && pair.parties1 == pair.parties2) continue;  // vacuous
        const auto& blk1 = sys.blocks[b1];
        const auto& blk2 = sys.blocks[b2];
        std::vector<int> pos1, pos2;
        for (PartyCopy q : pair.parties1) pos1.push_back(blk1.position_of(q));
        for (PartyCopy q : pair.parties2) pos2.push_back(blk2.position_of(q));
        std::vector<int> in_radix, out_radix;
        for (int t : pos1) {
          in_radix.push_back(blk1.specs[t].input_cardinality);
          out_radix.push_back(blk1.specs[t].output_cardinality);
        }
        const std::string skey = detail::party_list_key(pair.parties1, scenario) +
                                 "~" + detail::party_list_key(pair.parties2, scenario);
        std::vector<int> x(pos1.size(), 0);
        do {
          std::vector<int> o(pos1.size(), 0);
          do {
            std::map<int, int> signed_cols;  // col -> net integer coefficient
            std::vector<long long> cols1, cols2;
            detail::marginal_columns(blk1, sys.block_offset[b1], pos1, x, o, cols1);
            detail::marginal_columns(blk2, sys.block_offset[b2], pos2, x, o, cols2);
            for (long long c : cols1) signed_cols[static_cast<int>(c)] += 1;
            for (long long c : cols2) signed_cols[static_cast<int>(c)] -= 1;
            std::vector<std::pair<int, int>> support;
            for (const auto& [c, v] : signed_cols)
              if (v != 0) support.emplace_back(c, v);
            if (support.empty()) continue;  // identical marginal expressions
            if (support.front().second < 0)
              for (auto& [c, v] : support) v = -v;  // orientation-normalize
            if (seen_c2.count(support)) continue;
            seen_c2.emplace(support, true);
            ConstraintRow<S> row;
            row.tag = RowTag::C2;
            row.key = "C2 b" + std::to_string(b1) + "b" + std::to_string(b2) + " " +
                      skey + " x" + detail::tuple_key(x) + " o" + detail::tuple_key(o);
            for (const auto& [c, v] : support)
              row.row.coeffs.emplace_back(c, S(v));
            row.row.rhs = S(0);
            sys.rows.push_back(std::move(row));
          } while (detail::next_tuple(o, out_radix));
        } while (detail::next_tuple(x, in_radix));
      }
    }
  }

  // ---- normalization ------------------------------------------------------
  for (int b = 0; b < nb; ++b) {
    const auto& block = sys.blocks[b];
    const int n = static_cast<int>(block.parties.size());
    std::vector<int> in_radix, out_radix;
    for (const auto& s : block.specs) {
      in_radix.push_back(s.input_cardinality);
      out_radix.push_back(s.output_cardinality);
    }
    std::vector<int> x(n, 0);
    do {
      ConstraintRow<S> row;
      row.tag = RowTag::Normalization;
      row.key = "NORM b" + std::to_string(b) + " x" + detail::tuple_key(x);
      std::vector<int> o(n, 0);
      do {
        row.row.coeffs.emplace_back(
            static_cast<int>(sys.block_offset[b] + block.flat(x, o)), S(1));
      } while (detail::next_tuple(o, out_radix));
      row.row.rhs = S(1);
      sys.rows.push_back(std::move(row));
    } while (detail::next_tuple(x, in_radix));
  }

  // ---- nonsignalling (full generating set per block) ----------------------
  for (int b = 0; b < nb; ++b) {
    const auto& block = sys.blocks[b];
    const int n = static_cast<int>(block.parties.size());
    std::vector<int> in_radix, out_radix;
    for (const auto& s : block.specs) {
      in_radix.push_back(s.input_cardinality);
      out_radix.push_back(s.output_cardinality);
    }
    for (int q = 0; q < n; ++q) {
      auto others_in = in_radix;
      others_in[q] = 1;
      auto others_out = out_radix;
      others_out[q] = 1;
      for (int v = 1; v < in_radix[q]; ++v) {
        std::vector<int> x(n, 0);
        do {
          std::vector<int> o(n, 0);
          do {
            ConstraintRow<S> row;
            row.tag = RowTag::Nonsignalling;
            row.key = "NS b" + std::to_string(b) + " q" + std::to_string(q) +
                      " v" + std::to_string(v) + " x" + detail::tuple_key(x) +
                      " o" + detail::tuple_key(o);
            auto xx = x;
            auto oo = o;
            for (int aq = 0; aq < out_radix[q]; ++aq) {
              oo[q] = aq;
              xx[q] = v;
              row.row.coeffs.emplace_back(
                  static_cast<int>(sys.block_offset[b] + block.flat(xx, oo)), S(1));
              xx[q] = 0;
              row.row.coeffs.emplace_back(
                  static_cast<int>(sys.block_offset[b] + block.flat(xx, oo)), S(-1));
            }
            row.row.rhs = S(0);
            sys.rows.push_back(std::move(row));
          } while (detail::next_tuple(o, others_out));
        } while (detail::next_tuple(x, others_in));
      }
    }
  }

  // deterministic ordering: origin tag first, then the lexicographic key
  // (which embeds the inflation index and the sub-network party list)
  std::stable_sort(sys.rows.begin(), sys.rows.end(),
                   [](const ConstraintRow<S>& a, const ConstraintRow<S>& b) {
                     if (a.tag != b.tag) return a.tag < b.tag;
                     return a.key < b.key;
                   });
  return sys;
}

/// The Fig.-2-style shared-bit no-go system: joint output distribution of the
/// n chain parties (no inputs), consecutive pairs pinned to the perfectly
/// correlated uniform bit, endpoints pinned independent-uniform.
inline ConstraintSystem<Rational> shared_bit_system(int n) {
  if (n < 3) throw ConstraintError("shared-bit demo requires n >= 3");
  if (n > 20) throw ConstraintError("shared-bit demo capped at n = 20");
  ConstraintSystem<Rational> sys;
  sys.num_vars = 1LL << n;

  auto pair_row = [&](int a, int b, int oa, int ob, const Rational& rhs,
                      RowTag tag, const std::string& key) {
    ConstraintRow<Rational> row;
    row.tag = tag;
    row.key = key;
    for (long long v = 0; v < sys.num_vars; ++v)
      if (((v >> (n - 1 - a)) & 1) == oa && ((v >> (n - 1 - b)) & 1) == ob)
        row.row.coeffs.emplace_back(static_cast<int>(v), Rational(1));
    row.row.rhs = rhs;
    sys.rows.push_back(std::move(row));
  };

  // C1: each consecutive pair shares the perfectly correlated uniform bit
  for (int j = 0; j + 1 < n; ++j)
    for (int oa = 0; oa < 2; ++oa)
      for (int ob = 0; ob < 2; ++ob)
        pair_row(j, j + 1, oa, ob, (oa == ob) ? Rational(1, 2) : Rational(0),
                 RowTag::C1,
                 "C1 pair(" + std::to_string(j) + "," + std::to_string(j + 1) +
                     ") o" + std::to_string(oa) + std::to_string(ob));

  // independence of the chain endpoints: uniform x uniform
  for (int oa = 0; oa < 2; ++oa)
    for (int ob = 0; ob < 2; ++ob)
      pair_row(0, n - 1, oa, ob, Rational(1, 4), RowTag::C2,
               "C2 endpoints o" + std::to_string(oa) + std::to_string(ob));

  ConstraintRow<Rational> norm;
  norm.tag = RowTag::Normalization;
  norm.key = "NORM";
  for (long long v = 0; v < sys.num_vars; ++v)
    norm.row.coeffs.emplace_back(static_cast<int>(v), Rational(1));
  norm.row.rhs = Rational(1);
  sys.rows.push_back(std::move(norm));
  return sys;
}

/// Line-oriented sparse dump: "# vars/rows" header, then per row a key
/// comment, one "<row> <tag> <col> <coeff>" line per nonzero and a final
/// "<row> <tag> rhs <value>" line.
template <class S>
void dump_constraints(const ConstraintSystem<S>& sys, std::ostream& os) {
  os << "# vars " << sys.num_vars << " rows " << sys.rows.size() << "\n";
  for (std::size_t r = 0; r < sys.rows.size(); ++r) {
    const auto& row = sys.rows[r];
    os << "# row " << r << " " << row.key << "\n";
    for (const auto& [c, v] : row.row.coeffs)
      os << r << " " << row_tag_name(row.tag) << " " << c << " " << v << "\n";
    os << r << " " << row_tag_name(row.tag) << " rhs " << row.row.rhs << "\n";
  }
}

}  // namespace losr
