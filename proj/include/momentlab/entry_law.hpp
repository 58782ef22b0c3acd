#pragma once

#include "momentlab/bignum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace momentlab {

enum class LawKind { Rademacher, Gaussian, PowerTail, Custom };

// Symmetric law of a single unscaled matrix entry a_ij.
struct EntryLaw {
  LawKind kind = LawKind::Rademacher;
  double v = 1.0;                // standard deviation
  double alpha = 15.0;           // tail index, power-tail only
  std::vector<double> custom;    // V_2, V_4, ... for Custom

  static EntryLaw rademacher(double v);
  static EntryLaw gaussian(double v);
  // Symmetrized Pareto |a| = sigma Y, P(Y > y) = y^{-alpha} for y >= 1, variance v^2.
  static EntryLaw power_tail(double v, double alpha);
  // Tail index 2 eta + 2 delta0 + 2, so E|a|^{2 eta + 2 delta0} is finite.
  static EntryLaw power_tail_for(double v, double eta, double delta0);
  static EntryLaw custom_moments(std::vector<double> even_moments);

  void validate() const;  // throws std::invalid_argument
  std::string name() const;
  bool bounded() const { return kind == LawKind::Rademacher; }
  bool can_sample() const { return kind != LawKind::Custom; }
  double pareto_scale() const;  // sigma of the power-tail law

  // E a^M; zero for odd M. Throws std::domain_error when infinite or unavailable.
  long double moment(int M) const;
  std::optional<Rational> exact_moment(int M) const;
  // E|a|^p for real p.
  long double abs_moment(long double p) const;
  // E[a^M; |a| <= U].
  long double truncated_moment(int M, long double U) const;
  // P(|a| > U).
  long double tail_probability(long double U) const;
  // Draws a from two independent uniforms in (0,1).
  double sample(double u1, double u2) const;
};

// E[a^M; |a| <= U] by adaptive Gauss-Kronrod quadrature of the density; used
// to cross-check the closed forms.
long double truncated_moment_quadrature(const EntryLaw& law, int M, long double U);

}  // namespace momentlab
