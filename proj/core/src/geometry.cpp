#include "triform/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace triform {

Eigen::VectorXd Configuration::flat() const {
  Eigen::VectorXd v(2 * size());
  for (int i = 0; i < size(); ++i) {
    v[2 * i] = points[i].x();
    v[2 * i + 1] = points[i].y();
  }
  return v;
}

Configuration Configuration::from_flat(const Eigen::VectorXd& v) {
  Configuration p;
  p.points.resize(v.size() / 2);
  for (int i = 0; i < p.size(); ++i) p.points[i] = Vec2(v[2 * i], v[2 * i + 1]);
  return p;
}

bool in_configuration_space(const TriangulatedLamanGraph& graph,
                            const Configuration& p) {
  if (p.size() != graph.vertex_count()) return false;
  for (const Edge& e : graph.edges()) {
    const double d = (p.at(e.first) - p.at(e.second)).norm();
    if (!(d > 0.0) || !std::isfinite(d)) return false;
  }
  return true;
}

Eigen::Matrix2d SE2Element::rotation() const {
  Eigen::Matrix2d r;
  const double c = std::cos(theta), s = std::sin(theta);
  r << c, -s, s, c;
  return r;
}

SE2Element se2_compose(const SE2Element& g2, const SE2Element& g1) {
  SE2Element out;
  out.theta = std::remainder(g2.theta + g1.theta, 2.0 * M_PI);
  out.v = g2.rotation() * g1.v + g2.v;
  return out;
}

Configuration se2_apply(const SE2Element& g, const Configuration& p) {
  const Eigen::Matrix2d r = g.rotation();
  Configuration out;
  out.points.reserve(p.size());
  for (const Vec2& x : p.points) out.points.push_back(r * x + g.v);
  return out;
}

Eigen::VectorXd rho(const TriangulatedLamanGraph& graph, const Configuration& p) {
  if (p.size() != graph.vertex_count())
    throw std::invalid_argument("configuration size does not match graph");
  Eigen::VectorXd out(graph.edges().size());
  for (std::size_t k = 0; k < graph.edges().size(); ++k) {
    const Edge& e = graph.edges()[k];
    out[static_cast<int>(k)] = (p.at(e.first) - p.at(e.second)).squaredNorm();
  }
  return out;
}

Eigen::MatrixXd rigidity_jacobian(const TriangulatedLamanGraph& graph,
                                  const Configuration& p) {
  const int m = static_cast<int>(graph.edges().size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, 2 * p.size());
  for (int k = 0; k < m; ++k) {
    const Edge& e = graph.edges()[k];
    const Vec2 r = p.at(e.first) - p.at(e.second);
    jac.block<1, 2>(k, 2 * (e.first - 1)) = 2.0 * r.transpose();
    jac.block<1, 2>(k, 2 * (e.second - 1)) = -2.0 * r.transpose();
  }
  return jac;
}

bool is_infinitesimally_rigid(const TriangulatedLamanGraph& graph,
                              const Configuration& p, double rank_tol) {
  const Eigen::MatrixXd jac = rigidity_jacobian(graph, p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return false;
  const double cutoff = rank_tol * sv[0];
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++rank;
  return rank == 2 * graph.vertex_count() - 3;
}

double collinearity_measure(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 u = b - a, w = c - a;
  const double nu = u.norm(), nw = w.norm();
  if (nu == 0.0 || nw == 0.0) return 0.0;
  return std::abs(u.x() * w.y() - u.y() * w.x()) / (nu * nw);
}

bool is_strongly_rigid(const TriangulatedLamanGraph& graph,
                       const Configuration& p, double collinearity_tol) {
  for (const auto& cyc : graph.three_cycles()) {
    if (collinearity_measure(p.at(cyc[0]), p.at(cyc[1]), p.at(cyc[2])) <
        collinearity_tol)
      return false;
  }
  return true;
}

bool is_line_configuration(const Configuration& p, double tol) {
  if (p.size() <= 2) return true;
  int ia = 0, ib = 1;
  double best = -1.0;
  for (int i = 0; i < p.size(); ++i)
    for (int j = i + 1; j < p.size(); ++j) {
      const double d = (p.points[i] - p.points[j]).norm();
      if (d > best) {
        best = d;
        ia = i;
        ib = j;
      }
    }
  if (best == 0.0) return true;  // all coincident
  for (int k = 0; k < p.size(); ++k) {
    if (k == ia || k == ib) continue;
    if (collinearity_measure(p.points[ia], p.points[ib], p.points[k]) >= tol)
      return false;
  }
  return true;
}

double orbit_distance(const Configuration& p, const Configuration& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("orbit_distance needs equal agent counts");
  const int n = p.size();
  if (n == 0) return 0.0;
  Vec2 cp = Vec2::Zero(), cq = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    cp += p.points[i];
    cq += q.points[i];
  }
  cp /= n;
  cq /= n;
  double dot = 0.0, cross = 0.0, norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = p.points[i] - cp;
    const Vec2 b = q.points[i] - cq;
    dot += a.dot(b);
    cross += a.x() * b.y() - a.y() * b.x();
    norm2 += a.squaredNorm() + b.squaredNorm();
  }
  const double mismatch = norm2 - 2.0 * std::hypot(dot, cross);
  return std::sqrt(std::max(0.0, mismatch) / n);
}

Configuration canonicalize(const Configuration& p) {
  if (p.size() < 2)
    throw std::domain_error("canonicalize needs at least two agents");
  const Vec2 origin = p.points[0];
  const Vec2 d = p.points[1] - origin;
  if (d.norm() == 0.0)
    throw std::domain_error("canonicalize: agents 1 and 2 coincide");
  const double c = d.x() / d.norm(), s = -d.y() / d.norm();
  Configuration out;
  out.points.reserve(p.size());
  for (const Vec2& x : p.points) {
    const Vec2 t = x - origin;
    out.points.emplace_back(c * t.x() - s * t.y(), s * t.x() + c * t.y());
  }
  return out;
}

}  // namespace triform
