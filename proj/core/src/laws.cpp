#include "triform/laws.hpp"

#include <cmath>
#include <stdexcept>

namespace triform {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& fn, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = fn(lm), frm = fn(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& fn, double a,
                           double b, double tol) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
  const double whole = simpson(a, b, fa, fm, fb);
  return sign * adaptive_step(fn, a, b, fa, fm, fb, whole, tol, 48);
}

double InteractionLaw::edge_potential(double d) const {
  if (!(d > 0.0)) throw std::domain_error("edge potential needs d > 0");
  if (potential_) return potential_(d);
  return adaptive_quadrature([this](double t) { return t * f_(t); }, 1.0, d);
}

InteractionLaw standard_law(double dbar) {
  if (!(dbar > 0.0)) throw std::domain_error("target distance must be positive");
  const double d2 = dbar * dbar;
  return InteractionLaw(
      "standard", dbar,
      [d2](double d) { return (d * d - d2) / (d * d); },
      [d2](double d) { return 2.0 * d2 / (d * d * d); },
      [d2](double d) { return 0.5 * (d * d - 1.0) - d2 * std::log(d); });
}

InteractionLaw affine_law(double dbar) {
  if (!(dbar > 0.0)) throw std::domain_error("target distance must be positive");
  return InteractionLaw(
      "affine", dbar,
      [dbar](double d) { return d - dbar; },
      [](double) { return 1.0; },
      [dbar](double d) {
        return (d * d * d - 1.0) / 3.0 - dbar * 0.5 * (d * d - 1.0);
      });
}

InteractionLaw make_law(const std::string& family, double dbar) {
  if (family == "standard") return standard_law(dbar);
  if (family == "affine") return affine_law(dbar);
  throw std::invalid_argument("unknown law family '" + family + "'");
}

C1Report check_C1(const InteractionLaw& law, const std::vector<double>& grid) {
  if (grid.size() < 2)
    throw std::invalid_argument("C1 grid needs at least two points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0))
      throw std::invalid_argument("C1 grid must be strictly positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("C1 grid must be strictly increasing");
  }
  const double dbar = law.target();
  if (grid.front() > dbar / 10.0 * (1.0 + 1e-12) ||
      grid.back() < 10.0 * dbar * (1.0 - 1e-12))
    throw std::invalid_argument("C1 grid must span [dbar/10, 10*dbar]");

  C1Report report;
  bool all_positive = true;
  double prev_f = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double deriv = law.xf_prime(x);
    report.sampled.emplace_back(x, deriv);
    if (!(deriv > 0.0)) {
      all_positive = false;
      report.flagged.push_back(x);
    }
    const double fx = law.f(x);
    if (fx == 0.0) {
      ++report.zero_crossings;
    } else if (i > 0 && prev_f != 0.0 && (fx > 0.0) != (prev_f > 0.0)) {
      ++report.zero_crossings;
    }
    prev_f = fx;
  }
  report.c1_ok = all_positive && report.zero_crossings == 1;
  return report;
}

C2Report check_C2(const InteractionLaw& law, const std::vector<double>& probe) {
  if (probe.size() < 2)
    throw std::invalid_argument("C2 probe needs at least two points");
  for (std::size_t i = 0; i < probe.size(); ++i) {
    if (!(probe[i] > 0.0))
      throw std::invalid_argument("C2 probe must be strictly positive");
    if (i > 0 && !(probe[i] < probe[i - 1]))
      throw std::invalid_argument("C2 probe must be strictly decreasing");
  }

  C2Report report;
  for (double x : probe)
    report.sampled.emplace_back(x, -law.edge_potential(x));

  bool decreasing = true;
  for (std::size_t i = 1; i < report.sampled.size(); ++i)
    decreasing = decreasing &&
                 report.sampled[i].second < report.sampled[i - 1].second;

  // Divergence heuristic: the per-step drop must not decay toward zero.
  const auto& s = report.sampled;
  const double first_drop = s[0].second - s[1].second;
  const double last_drop = s[s.size() - 2].second - s.back().second;
  report.c2_trend_ok =
      decreasing && last_drop > 0.0 && last_drop >= 0.25 * first_drop;
  return report;
}

LawValidationReport validate_law(const InteractionLaw& law) {
  const double dbar = law.target();
  std::vector<double> grid;
  const int n = 121;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    grid.push_back(dbar / 10.0 * std::pow(100.0, t));
  }
  grid.front() = dbar / 10.0;
  grid.back() = 10.0 * dbar;

  std::vector<double> probe;
  for (int k = 1; k <= 8; ++k) probe.push_back(dbar * std::pow(10.0, -k));

  LawValidationReport report;
  report.c1 = check_C1(law, grid);
  report.c2 = check_C2(law, probe);
  report.c1_ok = report.c1.c1_ok;
  report.c2_trend_ok = report.c2.c2_trend_ok;
  report.sampled_points = report.c1.sampled;
  return report;
}

}  // namespace triform
