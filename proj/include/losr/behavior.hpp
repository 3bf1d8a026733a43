#pragma once

// Probability-table algebra over ordered party lists. Tables are dense,
// row-major, inputs outer and outputs inner, parties in list order; the LP
// variable indexing reuses exactly this layout.

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "losr/network.hpp"
#include "losr/scalar.hpp"

namespace losr {

constexpr double kDefaultTolerance = 1e-9;

struct BehaviorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConditioningError : BehaviorError {
  using BehaviorError::BehaviorError;
};

/// Dichotomic observable: a signed product of (-1)^output factors, each at a
/// fixed input of one party.
struct CorrelatorTerm {
  std::vector<std::pair<int, int>> factors;  // (party index, input value)
};

/// Event "product of (-1)^output over these parties equals target", each at a
/// fixed input. A single-party event with target +1 is "output 0".
struct ParityEvent {
  std::vector<std::pair<int, int>> parties;  // (party index, input value)
  int target = +1;
};

template <class S>
class Behavior {
 public:
  using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  Behavior(std::vector<PartySpec> parties, Vector table)
      : parties_(std::move(parties)), table_(std::move(table)) {
    if (table_.size() != num_input_combos() * num_output_combos())
      throw BehaviorError("behavior table size mismatch");
  }

  static Behavior zero(std::vector<PartySpec> parties) {
    Eigen::Index n = 1;
    for (const auto& p : parties)
      n *= static_cast<Eigen::Index>(p.input_cardinality) * p.output_cardinality;
    return Behavior(std::move(parties), Vector::Zero(n));
  }

  const std::vector<PartySpec>& parties() const { return parties_; }
  int num_parties() const { return static_cast<int>(parties_.size()); }
  const Vector& table() const { return table_; }
  Vector& table() { return table_; }

  Eigen::Index num_input_combos() const {
    Eigen::Index n = 1;
    for (const auto& p : parties_) n *= p.input_cardinality;
    return n;
  }
  Eigen::Index num_output_combos() const {
    Eigen::Index n = 1;
    for (const auto& p : parties_) n *= p.output_cardinality;
    return n;
  }

  Eigen::Index flat_index(const std::vector<int>& inputs,
                          const std::vector<int>& outputs) const {
    Eigen::Index ix = 0;
    for (int j = 0; j < num_parties(); ++j) ix = ix * parties_[j].input_cardinality + inputs[j];
    Eigen::Index ox = 0;
    for (int j = 0; j < num_parties(); ++j) ox = ox * parties_[j].output_cardinality + outputs[j];
    return ix * num_output_combos() + ox;
  }

  const S& at(const std::vector<int>& inputs, const std::vector<int>& outputs) const {
    return table_[flat_index(inputs, outputs)];
  }
  S& at(const std::vector<int>& inputs, const std::vector<int>& outputs) {
    return table_[flat_index(inputs, outputs)];
  }

  bool is_normalized(double tol = kDefaultTolerance) const {
    const Eigen::Index out = num_output_combos();
    for (Eigen::Index x = 0; x < num_input_combos(); ++x) {
      S sum(0);
      for (Eigen::Index o = 0; o < out; ++o) sum += table_[x * out + o];
      if (!ScalarTraits<S>::is_zero(sum - S(1), tol)) return false;
    }
    return true;
  }

  bool is_nonnegative(double tol = kDefaultTolerance) const {
    for (Eigen::Index i = 0; i < table_.size(); ++i)
      if (table_[i] < S(0) && !ScalarTraits<S>::is_zero(table_[i], tol))
        return false;
    return true;
  }

  /// Affine mixture (1-w)*this + w*other; party lists must agree.
  Behavior mixed_with(const Behavior& other, const S& w) const {
    if (parties_.size() != other.parties_.size())
      throw BehaviorError("mixture party mismatch");
    return Behavior(parties_, ((S(1) - w) * table_ + w * other.table_).eval());
  }

  Behavior<double> to_float() const {
    Eigen::VectorXd t(table_.size());
    for (Eigen::Index i = 0; i < table_.size(); ++i) t[i] = losr::to_double(table_[i]);
    return Behavior<double>(parties_, std::move(t));
  }

 private:
  std::vector<PartySpec> parties_;
  Vector table_;
};

namespace detail {

inline bool next_tuple(std::vector<int>& v, const std::vector<int>& radix) {
  for (int j = static_cast<int>(v.size()) - 1; j >= 0; --j) {
    if (++v[j] < radix[j]) return true;
    v[j] = 0;
  }
  return false;
}

template <class S>
std::vector<int> input_radix(const Behavior<S>& b) {
  std::vector<int> r;
  for (const auto& p : b.parties()) r.push_back(p.input_cardinality);
  return r;
}
template <class S>
std::vector<int> output_radix(const Behavior<S>& b) {
  std::vector<int> r;
  for (const auto& p : b.parties()) r.push_back(p.output_cardinality);
  return r;
}

}  // namespace detail

/// The No Signalling equalities, checked party-locally: each party's output
/// marginal P(a_j | inputs) may depend on that party's own input only. (This
/// is the observable-level criterion; it does not inspect multi-party subset
/// marginals, so behaviors like the hidden-signalling LHVM pass.)
template <class S>
bool check_nonsignalling(const Behavior<S>& b, double tolerance = kDefaultTolerance) {
  if (!b.is_normalized(tolerance)) throw BehaviorError("behavior is not normalized");
  const int n = b.num_parties();
  const auto in_radix = detail::input_radix(b);
  const auto out_radix = detail::output_radix(b);
  for (int q = 0; q < n; ++q) {
    auto sum_radix = out_radix;
    sum_radix[q] = 1;
    for (int aq = 0; aq < out_radix[q]; ++aq) {
      // P(a_q | x) as a function of the full input tuple x
      std::vector<S> ref(in_radix[q], S(0));
      std::vector<bool> have_ref(in_radix[q], false);
      std::vector<int> x(n, 0);
      do {
        S p(0);
        std::vector<int> o(n, 0);
        o[q] = aq;
        std::vector<int> rest(n, 0);
        do {
          for (int j = 0; j < n; ++j)
            if (j != q) o[j] = rest[j];
          p += b.at(x, o);
        } while (detail::next_tuple(rest, sum_radix));
        if (!have_ref[x[q]]) {
          ref[x[q]] = p;
          have_ref[x[q]] = true;
        } else if (!ScalarTraits<S>::is_zero(p - ref[x[q]], tolerance)) {
          return false;
        }
      } while (detail::next_tuple(x, in_radix));
    }
  }
  return true;
}

/// Marginal over `keep` (party indices into b, in the order requested).
/// Dropped parties' inputs are fixed at 0; nonsignalling guarantees the
/// choice is immaterial.
template <class S>
Behavior<S> marginalize(const Behavior<S>& b, const std::vector<int>& keep,
                        bool verify_nonsignalling = true,
                        double tolerance = kDefaultTolerance) {
  for (int j : keep)
    if (j < 0 || j >= b.num_parties()) throw BehaviorError("marginalize: bad party index");
  {
    auto sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw BehaviorError("marginalize: duplicate party");
  }
  if (verify_nonsignalling && !check_nonsignalling(b, tolerance))
    throw BehaviorError("marginalize: behavior is signalling, marginal ill-defined");

  std::vector<PartySpec> parties;
  for (int j : keep) parties.push_back(b.parties()[j]);
  auto out = Behavior<S>::zero(parties);

  std::vector<bool> kept(b.num_parties(), false);
  for (int j : keep) kept[j] = true;
  const auto in_radix = detail::input_radix(b);
  auto sum_radix = detail::output_radix(b);
  for (int j : keep) sum_radix[j] = 1;

  const int m = static_cast<int>(keep.size());
  std::vector<int> kx(m, 0), ko(m, 0);
  std::vector<int> kx_radix, ko_radix;
  for (int j : keep) {
    kx_radix.push_back(b.parties()[j].input_cardinality);
    ko_radix.push_back(b.parties()[j].output_cardinality);
  }
  do {
    std::vector<int> x(b.num_parties(), 0);
    for (int t = 0; t < m; ++t) x[keep[t]] = kx[t];
    std::fill(ko.begin(), ko.end(), 0);
    do {
      std::vector<int> o(b.num_parties(), 0);
      for (int t = 0; t < m; ++t) o[keep[t]] = ko[t];
      S sum(0);
      auto oo = o;
      std::vector<int> rest(b.num_parties(), 0);
      do {
        for (int j = 0; j < b.num_parties(); ++j)
          if (!kept[j]) oo[j] = rest[j];
        sum += b.at(x, oo);
      } while (detail::next_tuple(rest, sum_radix));
      out.at(kx, ko) = sum;
    } while (detail::next_tuple(ko, ko_radix));
  } while (detail::next_tuple(kx, kx_radix));
  return out;
}

/// Independent composition: table is the entrywise product under the
/// concatenated party list.
template <class S>
Behavior<S> product(const Behavior<S>& b1, const Behavior<S>& b2) {
  for (const auto& p1 : b1.parties())
    for (const auto& p2 : b2.parties())
      if (p1.name == p2.name)
        throw BehaviorError("product: overlapping party name " + p1.name);
  std::vector<PartySpec> parties = b1.parties();
  parties.insert(parties.end(), b2.parties().begin(), b2.parties().end());
  auto out = Behavior<S>::zero(parties);

  const int n1 = b1.num_parties(), n2 = b2.num_parties();
  auto in_radix = detail::input_radix(out);
  auto out_radix = detail::output_radix(out);
  std::vector<int> x(n1 + n2, 0);
  do {
    std::vector<int> o(n1 + n2, 0);
    do {
      std::vector<int> x1(x.begin(), x.begin() + n1), x2(x.begin() + n1, x.end());
      std::vector<int> o1(o.begin(), o.begin() + n1), o2(o.begin() + n1, o.end());
      out.at(x, o) = b1.at(x1, o1) * b2.at(x2, o2);
    } while (detail::next_tuple(o, out_radix));
  } while (detail::next_tuple(x, in_radix));
  return out;
}

/// Conditional expectation of a signed product of dichotomic (-1)^output
/// observables, given a parity event. Parties not mentioned are summed out at
/// input 0. Zero-probability conditioning is an error, never a NaN.
template <class S>
S condition_expectation(const Behavior<S>& b, const CorrelatorTerm& observable,
                        const std::optional<ParityEvent>& given = std::nullopt) {
  const int n = b.num_parties();
  std::vector<int> x(n, 0);
  auto set_input = [&](int party, int input) {
    if (party < 0 || party >= n) throw BehaviorError("correlator: bad party index");
    if (input < 0 || input >= b.parties()[party].input_cardinality)
      throw BehaviorError("correlator: bad input value");
    if (x[party] != 0 && x[party] != input)
      throw BehaviorError("correlator: conflicting inputs for one party");
    x[party] = input;
  };
  for (auto [p, v] : observable.factors) set_input(p, v);
  if (given)
    for (auto [p, v] : given->parties) set_input(p, v);

  const auto out_radix = detail::output_radix(b);
  S numerator(0), denominator(0);
  std::vector<int> o(n, 0);
  do {
    int sign = 1;
    for (auto [p, v] : observable.factors)
      if (o[p] % 2 == 1) sign = -sign;
    bool in_event = true;
    if (given) {
      int parity = 1;
      for (auto [p, v] : given->parties)
        if (o[p] % 2 == 1) parity = -parity;
      in_event = (parity == given->target);
    }
    if (!in_event) continue;
    const S& prob = b.at(x, o);
    numerator += (sign > 0) ? prob : S(0) - prob;
    denominator += prob;
  } while (detail::next_tuple(o, out_radix));

  if (ScalarTraits<S>::is_zero(denominator, 1e-15))
    throw ConditioningError("conditioning event has zero probability");
  return numerator / denominator;
}

/// Uniformly random outputs, independent of inputs.
template <class S>
Behavior<S> uniform_behavior(std::vector<PartySpec> parties) {
  auto b = Behavior<S>::zero(std::move(parties));
  S p(1);
  for (const auto& spec : b.parties()) p /= S(spec.output_cardinality);
  b.table().setConstant(p);
  return b;
}

/// Local deterministic strategy: party j outputs assignment[j][x_j].
template <class S>
Behavior<S> deterministic_behavior(std::vector<PartySpec> parties,
                                   const std::vector<std::vector<int>>& assignment) {
  auto b = Behavior<S>::zero(std::move(parties));
  const int n = b.num_parties();
  auto in_radix = detail::input_radix(b);
  std::vector<int> x(n, 0);
  do {
    std::vector<int> o(n);
    for (int j = 0; j < n; ++j) o[j] = assignment[j][x[j]];
    b.at(x, o) = S(1);
  } while (detail::next_tuple(x, in_radix));
  return b;
}

}  // namespace losr
