#include "triform/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace triform {

Eigen::MatrixXd hessian(const FormationSystem& system, const Configuration& p) {
  if (p.size() != system.agent_count())
    throw std::invalid_argument("configuration size does not match system");
  const int n = p.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const auto& edges = system.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    const Vec2 r = p.at(e.first) - p.at(e.second);
    const double d = r.norm();
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::domain_error("configuration outside P_G");
    const InteractionLaw& law = system.law(static_cast<int>(k));
    const Eigen::Matrix2d block =
        law.f(d) * Eigen::Matrix2d::Identity() +
        (law.f_prime(d) / d) * (r * r.transpose());
    const int i = 2 * (e.first - 1), j = 2 * (e.second - 1);
    h.block<2, 2>(i, j) += block;
    h.block<2, 2>(j, i) += block;
    h.block<2, 2>(i, i) -= block;
    h.block<2, 2>(j, j) -= block;
  }
  return h;
}

Eigen::MatrixXd rearrange_xy(const Eigen::MatrixXd& interleaved) {
  const int dim = static_cast<int>(interleaved.rows());
  const int n = dim / 2;
  Eigen::VectorXi perm(dim);  // rearranged index -> interleaved index
  for (int i = 0; i < n; ++i) {
    perm[i] = 2 * i;
    perm[n + i] = 2 * i + 1;
  }
  Eigen::MatrixXd out(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) out(r, c) = interleaved(perm[r], perm[c]);
  return out;
}

LineBlockHessian line_block_hessian(const FormationSystem& system,
                                    const Configuration& p,
                                    double align_tol) {
  const int n = p.size();
  double scale = 1.0;
  for (const Vec2& x : p.points) scale = std::max(scale, std::abs(x.x()));
  for (const Vec2& x : p.points)
    if (std::abs(x.y()) > align_tol * scale)
      throw std::invalid_argument(
          "line_block_hessian: configuration not aligned with the x-axis");

  LineBlockHessian out;
  out.A = Eigen::MatrixXd::Zero(n, n);
  out.B = Eigen::MatrixXd::Zero(n, n);
  const auto& edges = system.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    const int i = e.first - 1, j = e.second - 1;
    const double d = (p.at(e.first) - p.at(e.second)).norm();
    if (!(d > 0.0)) throw std::domain_error("configuration outside P_G");
    const InteractionLaw& law = system.law(static_cast<int>(k));
    const double a = law.xf_prime(d);
    const double b = law.f(d);
    out.A(i, j) += a;
    out.A(j, i) += a;
    out.A(i, i) -= a;
    out.A(j, j) -= a;
    out.B(i, j) += b;
    out.B(j, i) += b;
    out.B(i, i) -= b;
    out.B(j, j) -= b;
  }
  return out;
}

double default_zero_tol(const Eigen::VectorXd& eigenvalues) {
  const double sigma_max =
      eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return 1e-6 * std::max(1.0, sigma_max);
}

Signature signature_of(const Eigen::MatrixXd& symmetric, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      symmetric, Eigen::EigenvaluesOnly);
  Signature sig;
  sig.zero_tol = zero_tol;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    const double ev = solver.eigenvalues()[i];
    if (ev > zero_tol)
      ++sig.n_plus;
    else if (ev < -zero_tol)
      ++sig.n_minus;
    else
      ++sig.n_zero;
  }
  return sig;
}

Signature signature_of(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      symmetric, Eigen::EigenvaluesOnly);
  const double tol = default_zero_tol(solver.eigenvalues());
  Signature sig;
  sig.zero_tol = tol;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    const double ev = solver.eigenvalues()[i];
    if (ev > tol)
      ++sig.n_plus;
    else if (ev < -tol)
      ++sig.n_minus;
    else
      ++sig.n_zero;
  }
  return sig;
}

std::array<Eigen::VectorXd, 3> rigid_motion_null_vectors(const Configuration& p) {
  const int n = p.size();
  Eigen::VectorXd ta = Eigen::VectorXd::Zero(2 * n);
  Eigen::VectorXd tb = Eigen::VectorXd::Zero(2 * n);
  Eigen::VectorXd rp = Eigen::VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    ta[i] = 1.0;
    tb[n + i] = 1.0;
    rp[n + i] = p.points[i].x();
  }
  return {ta, tb, rp};
}

const char* to_string(OrbitClass c) {
  switch (c) {
    case OrbitClass::stable:
      return "stable";
    case OrbitClass::unstable_saddle:
      return "unstable-saddle";
    case OrbitClass::degenerate:
      return "degenerate";
  }
  return "?";
}

OrbitClassification classify_orbit(const FormationSystem& system,
                                   const Configuration& p_equilibrium,
                                   double zero_tol) {
  const Eigen::MatrixXd h = hessian(system, p_equilibrium);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h,
                                                        Eigen::EigenvaluesOnly);
  OrbitClassification out;
  out.eigenvalues = solver.eigenvalues();
  const double tol =
      zero_tol >= 0.0 ? zero_tol : default_zero_tol(out.eigenvalues);
  out.signature.zero_tol = tol;
  for (int i = 0; i < out.eigenvalues.size(); ++i) {
    const double ev = out.eigenvalues[i];
    if (ev > tol)
      ++out.signature.n_plus;
    else if (ev < -tol)
      ++out.signature.n_minus;
    else
      ++out.signature.n_zero;
  }
  const int n = system.agent_count();
  if (out.signature.n_plus == 0 && out.signature.n_minus == 2 * n - 3 &&
      out.signature.n_zero == 3)
    out.verdict = OrbitClass::stable;
  else if (out.signature.n_zero > 3)
    out.verdict = OrbitClass::degenerate;
  else
    out.verdict = OrbitClass::unstable_saddle;
  return out;
}

}  // namespace triform
