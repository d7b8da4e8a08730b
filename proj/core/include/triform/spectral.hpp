#pragma once

#include <Eigen/Dense>
#include <array>

#include "triform/dynamics.hpp"

namespace triform {

/// Eigenvalue counts (n₊, n₋, n₀) of a symmetric matrix at a zero threshold.
struct Signature {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
  double zero_tol = 0.0;

  int dimension() const { return n_plus + n_minus + n_zero; }
  bool operator==(const Signature& o) const {
    return n_plus == o.n_plus && n_minus == o.n_minus && n_zero == o.n_zero;
  }
};

/// Hessian of the flow, ∂(vector_field)/∂p, in interleaved coordinates
/// (x1, y1, ..., xN, yN). Symmetric; the per-edge block is
/// f(d)·I + (f'(d)/d)·rrᵀ with r = x_i − x_j, added on the (i,j) block and
/// subtracted on the diagonal blocks. A critical orbit is exponentially
/// stable iff the signature is (0, 2N−3, 3).
Eigen::MatrixXd hessian(const FormationSystem& system, const Configuration& p);

/// Conjugation into the rearranged coordinate order (x1..xN, y1..yN).
Eigen::MatrixXd rearrange_xy(const Eigen::MatrixXd& interleaved);

/// The N×N blocks of the rearranged Hessian at an x-axis-aligned
/// configuration: off-diagonal A_ij = (x f_ij(x))' at d_ij and
/// B_ij = f_ij(d_ij) for edges, diagonals fixed by zero row sums.
struct LineBlockHessian {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
};

/// Throws std::invalid_argument when any |y_i| exceeds align_tol·scale.
LineBlockHessian line_block_hessian(const FormationSystem& system,
                                    const Configuration& p_aligned,
                                    double align_tol = 1e-9);

double default_zero_tol(const Eigen::VectorXd& eigenvalues);

Signature signature_of(const Eigen::MatrixXd& symmetric, double zero_tol);
/// zero_tol = 1e−6 · max(1, σ_max).
Signature signature_of(const Eigen::MatrixXd& symmetric);

/// (e,0), (0,e), (0,a) in rearranged coordinates: the infinitesimal
/// translations and, for x-axis-aligned p, the infinitesimal rotation.
std::array<Eigen::VectorXd, 3> rigid_motion_null_vectors(const Configuration& p);

enum class OrbitClass { stable, unstable_saddle, degenerate };

const char* to_string(OrbitClass c);

struct OrbitClassification {
  OrbitClass verdict = OrbitClass::degenerate;
  Signature signature;
  Eigen::VectorXd eigenvalues;  // ascending

  int morse_index() const { return signature.n_minus; }
  int co_index() const { return signature.n_plus; }
};

/// stable iff signature = (0, 2N−3, 3); degenerate iff n₀ > 3 (the
/// equivariant-Morse hypothesis fails at the orbit); otherwise an unstable
/// saddle. zero_tol < 0 selects the default policy.
OrbitClassification classify_orbit(const FormationSystem& system,
                                   const Configuration& p_equilibrium,
                                   double zero_tol = -1.0);

}  // namespace triform
