#pragma once

// Dense small-system quantum statistics for the behaviors under study:
// noisy GHZ_N under the Bell/same strategy, the W-state three-game strategy,
// and the fine-tuned hidden-signalling LHVM contrast vector.
//
// Every measurement used by the GHZ strategy lies in the x-z plane with
// direction cosines in {0, +-1, +-1/sqrt2}, so the whole table is exact in
// Q(sqrt 2) and the oracle is templated on the scalar.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "losr/behavior.hpp"
#include "losr/scalar.hpp"

namespace losr {

/// Direction (cos theta, sin theta) of a dichotomic x-z plane measurement;
/// output a projects onto (I + (-1)^a (c Z + s X))/2.
template <class S>
struct BlochAxis {
  S c, s;
};

namespace detail {

template <class S>
S half_sqrt2() {
  return ScalarTraits<S>::from_root_two(RootTwo(Rational(0), Rational(1, 2)));
}

// rectilinear, Hadamard and the CHSH-optimal +-pi/4 axes
template <class S>
BlochAxis<S> axis_z() { return {S(1), S(0)}; }
template <class S>
BlochAxis<S> axis_x() { return {S(0), S(1)}; }
template <class S>
BlochAxis<S> axis_diag(int sign) {
  const S r = half_sqrt2<S>();
  return {r, (sign > 0) ? r : S(0) - r};
}

// 2x2 projector entry Pi_a[u][v] for outcome a on the given axis
template <class S>
S projector_entry(const BlochAxis<S>& ax, int a, int u, int v) {
  const S sgn = (a == 0) ? S(1) : S(-1);
  const S half = S(1) / S(2);
  if (u == v) return half * (S(1) + sgn * ((u == 0) ? ax.c : S(0) - ax.c));
  return half * sgn * ax.s;
}

}  // namespace detail

/// Party layout for the GHZ_N strategy: Alice (2 inputs), Bob (3 inputs),
/// N-2 Charlies (2 inputs each); all outputs binary.
inline std::vector<PartySpec> ghz_party_specs(int n) {
  if (n < 3) throw std::invalid_argument("ghz behavior requires n >= 3");
  std::vector<PartySpec> specs;
  specs.push_back({"A", 2, 2});
  specs.push_back({"B", 3, 2});
  for (int i = 0; i < n - 2; ++i)
    specs.push_back({"C" + std::to_string(i + 1), 2, 2});
  return specs;
}

template <class S>
BlochAxis<S> ghz_measurement_axis(int party, int input) {
  using namespace detail;
  if (party == 0) return (input == 0) ? axis_z<S>() : axis_x<S>();          // Alice
  if (party == 1) {                                                         // Bob
    if (input == 2) return axis_z<S>();
    return axis_diag<S>(input == 0 ? +1 : -1);
  }
  return (input == 0) ? axis_z<S>() : axis_x<S>();                          // Charlies
}

/// Statistics of rho_p = p |GHZ_N><GHZ_N| + (1-p) I/2^N under the strategy
/// above. <GHZ|(x)Pi|GHZ> expands over the four corner matrix elements, so no
/// 2^N-dimensional state is ever materialized.
template <class S>
Behavior<S> ghz_behavior(int n, const S& noise_p) {
  auto specs = ghz_party_specs(n);
  auto b = Behavior<S>::zero(specs);

  S mixed(1);
  for (int j = 0; j < n; ++j) mixed /= S(2);

  auto in_radix = detail::input_radix(b);
  auto out_radix = detail::output_radix(b);
  std::vector<int> x(n, 0);
  do {
    std::vector<BlochAxis<S>> ax;
    for (int j = 0; j < n; ++j) ax.push_back(ghz_measurement_axis<S>(j, x[j]));
    std::vector<int> o(n, 0);
    do {
      S p00(1), p11(1), p01(1), p10(1);
      for (int j = 0; j < n; ++j) {
        p00 *= detail::projector_entry(ax[j], o[j], 0, 0);
        p11 *= detail::projector_entry(ax[j], o[j], 1, 1);
        p01 *= detail::projector_entry(ax[j], o[j], 0, 1);
        p10 *= detail::projector_entry(ax[j], o[j], 1, 0);
      }
      const S ghz = (p00 + p11 + p01 + p10) / S(2);
      b.at(x, o) = noise_p * ghz + (S(1) - noise_p) * mixed;
    } while (detail::next_tuple(o, out_radix));
  } while (detail::next_tuple(x, in_radix));
  return b;
}

/// Fidelity of the white-noise GHZ mixture: f = p + (1-p)/2^N.
inline double fidelity_of(double p, int n = 3) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("noise parameter outside [0,1]");
  return p + (1.0 - p) / std::pow(2.0, n);
}
inline double noise_of(double f, int n = 3) {
  const double fmin = 1.0 / std::pow(2.0, n);
  if (f < fmin || f > 1.0) throw std::domain_error("fidelity outside valid range");
  return (f - fmin) / (1.0 - fmin);
}

/// GHZ density operator (for state-level sanity checks only).
inline Eigen::MatrixXd ghz_density(int n, double p) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(dim, dim) * ((1.0 - p) / double(dim));
  rho(0, 0) += p / 2;
  rho(dim - 1, dim - 1) += p / 2;
  rho(0, dim - 1) += p / 2;
  rho(dim - 1, 0) += p / 2;
  return rho;
}

/// W-state three-game strategy. Inputs 0..M for all parties; input 0 is
/// rectilinear (Bob's game-(iii) input), inputs 1..M are the chained-Bell
/// settings with setting 1 rectilinear for Alice and Charlie.
///
/// Angles: alpha_i = -(i-1) pi/M for Alice and Charlie, beta_i = pi +
/// (i-1/2) pi/M for Bob; on the steered (|01>+|10>)/sqrt2 pair the correlator
/// is -cos(alpha+beta), which makes every scored term sin^2(pi/4M).
inline Behavior<double> w_behavior(int m) {
  if (m < 2) throw std::invalid_argument("w behavior requires m >= 2");
  const double pi = 3.14159265358979323846;
  std::vector<PartySpec> specs = {{"A", m + 1, 2}, {"B", m + 1, 2}, {"C", m + 1, 2}};
  auto b = Behavior<double>::zero(specs);

  auto angle = [&](int party, int input) -> double {
    if (input == 0) return 0.0;
    if (party == 1) return pi + (input - 0.5) * pi / m;
    return -(input - 1) * pi / m;
  };

  // |W> = (|001>+|010>+|100>)/sqrt3, real amplitudes
  Eigen::VectorXd w = Eigen::VectorXd::Zero(8);
  w[1] = w[2] = w[4] = 1.0 / std::sqrt(3.0);

  auto in_radix = detail::input_radix(b);
  auto out_radix = detail::output_radix(b);
  std::vector<int> x(3, 0);
  do {
    std::vector<BlochAxis<double>> ax;
    for (int j = 0; j < 3; ++j) {
      const double th = angle(j, x[j]);
      ax.push_back({std::cos(th), std::sin(th)});
    }
    std::vector<int> o(3, 0);
    do {
      double p = 0.0;
      for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
          double term = w[u] * w[v];
          if (term == 0.0) continue;
          for (int j = 0; j < 3; ++j)
            term *= detail::projector_entry(ax[j], o[j], (u >> (2 - j)) & 1,
                                            (v >> (2 - j)) & 1);
          p += term;
        }
      }
      b.at(x, o) = p;
    } while (detail::next_tuple(o, out_radix));
  } while (detail::next_tuple(x, in_radix));
  return b;
}

/// The fine-tuned hidden-signalling LHVM: lambda uniform +-1, c = b = lambda,
/// a = b * (-1)^(xy). Nonsignalling as a distribution; the hidden model
/// signals from Bob to Alice.
template <class S>
Behavior<S> svetlichny_lhvm_behavior() {
  auto b = Behavior<S>::zero(ghz_party_specs(3));
  const S half = S(1) / S(2);
  for (int lambda : {+1, -1}) {
    const int cbit = (lambda == +1) ? 0 : 1;
    for (int xx = 0; xx < 2; ++xx) {
      for (int yy = 0; yy < 3; ++yy) {
        for (int zz = 0; zz < 2; ++zz) {
          const int bval = lambda;
          const int aval = ((xx * yy) % 2 == 0) ? bval : -bval;
          const int abit = (aval == +1) ? 0 : 1;
          b.at({xx, yy, zz}, {abit, cbit, cbit}) += half;
        }
      }
    }
  }
  return b;
}

}  // namespace losr
