#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace triform {

/// Adaptive Simpson quadrature of fn over [a, b] (a > b allowed).
double adaptive_quadrature(const std::function<double(double)>& fn, double a,
                           double b, double tol = 1e-10);

/// A pair-wise interaction law f(d) = u(d, dbar) together with its
/// derivative and edge potential d ↦ ∫₁^d t·f(t) dt. The potential uses the
/// closed form when one is attached, adaptive quadrature otherwise.
class InteractionLaw {
 public:
  InteractionLaw() = default;
  InteractionLaw(std::string family, double target,
                 std::function<double(double)> f,
                 std::function<double(double)> f_prime,
                 std::function<double(double)> potential_closed_form = nullptr)
      : family_(std::move(family)),
        target_(target),
        f_(std::move(f)),
        f_prime_(std::move(f_prime)),
        potential_(std::move(potential_closed_form)) {}

  const std::string& family() const { return family_; }
  double target() const { return target_; }

  double f(double d) const { return f_(d); }
  double f_prime(double d) const { return f_prime_(d); }
  /// d/dx (x f(x)), the quantity conditions C1 and the A-matrix are built on.
  double xf_prime(double d) const { return f_(d) + d * f_prime_(d); }

  bool has_closed_form_potential() const { return static_cast<bool>(potential_); }
  double edge_potential(double d) const;

 private:
  std::string family_;
  double target_ = 1.0;
  std::function<double(double)> f_;
  std::function<double(double)> f_prime_;
  std::function<double(double)> potential_;
};

/// f(d) = (d² − d̄²)/d², with f'(d) = 2d̄²/d³ and
/// edge potential (d²−1)/2 − d̄²·ln d. Throws std::domain_error for d̄ ≤ 0.
InteractionLaw standard_law(double dbar);

/// f(d) = d − d̄. Increasing with a unique zero but fails C1 below d̄/2 and
/// fails C2 (bounded edge potential near 0); kept for validation tests.
InteractionLaw affine_law(double dbar);

/// Law factory by family name ("standard", "affine").
InteractionLaw make_law(const std::string& family, double dbar);

struct C1Report {
  bool c1_ok = false;
  int zero_crossings = 0;
  /// (x, d/dx (x f(x))) per grid point.
  std::vector<std::pair<double, double>> sampled;
  /// Grid points where the derivative is not strictly positive.
  std::vector<double> flagged;
};

/// Samples d/dx (x f(x)) analytically over the grid and counts zeros of f.
/// The grid must be positive, strictly increasing, and span [d̄/10, 10·d̄].
/// c1_ok iff every sampled derivative is positive and f changes sign exactly
/// once.
C1Report check_C1(const InteractionLaw& law, const std::vector<double>& grid);

struct C2Report {
  bool c2_trend_ok = false;
  /// (x, ∫ₓ¹ t f(t) dt) per probe point; the integral must diverge to −∞.
  std::vector<std::pair<double, double>> sampled;
};

/// Monotone-divergence probe of condition C2: along the strictly decreasing
/// probe (length ≥ 2), ∫ₓ¹ t f(t) dt must decrease with per-step drops that
/// do not decay toward zero.
C2Report check_C2(const InteractionLaw& law, const std::vector<double>& probe);

struct LawValidationReport {
  bool c1_ok = false;
  bool c2_trend_ok = false;
  std::vector<std::pair<double, double>> sampled_points;  // C1 samples
  C1Report c1;
  C2Report c2;
  bool ok() const { return c1_ok && c2_trend_ok; }
};

/// Runs check_C1 on a 121-point log grid over [d̄/10, 10·d̄] and check_C2 on
/// the probe d̄·10⁻¹ … d̄·10⁻⁸.
LawValidationReport validate_law(const InteractionLaw& law);

}  // namespace triform
