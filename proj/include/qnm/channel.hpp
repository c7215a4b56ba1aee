#pragma once

#include <optional>

#include "qnm/state.hpp"

namespace qnm {

/// Rectangular V with V^dag V = 1; env_dim tags the traced-out factor of a
/// Stinespring dilation (environment is the leading tensor factor of the rows).
struct Isometry {
  Mat matrix;
  int env_dim = 1;
};

/// Linear map between register spaces, held in any of three equivalent forms:
/// Kraus operators, normalized CJ (Choi) state on out (x) in', or the transfer
/// matrix acting on row-major vectorizations. Conversions are lazy and cached.
/// Construction does not force CP or TP; is_cp()/is_tp() report them.
class QuantumChannel {
 public:
  static QuantumChannel from_kraus(std::vector<Mat> kraus, SystemLayout in,
                                   SystemLayout out);
  /// `choi` is the normalized CJ state (Lambda (x) id)(phi+), indexed
  /// (out, in) row-major on both sides.
  static QuantumChannel from_choi(Mat choi, SystemLayout in, SystemLayout out);
  static QuantumChannel from_superop(Mat s, SystemLayout in, SystemLayout out);

  static QuantumChannel identity(const SystemLayout& layout);
  static QuantumChannel unitary(const Mat& u, SystemLayout in, SystemLayout out);
  static QuantumChannel unitary(const Mat& u, const SystemLayout& layout);
  /// Constant map X -> Tr(X) sigma.
  static QuantumChannel constant(const Mat& sigma, SystemLayout in, SystemLayout out);

  const SystemLayout& in_layout() const { return in_; }
  const SystemLayout& out_layout() const { return out_; }
  int in_dim() const { return in_.dim(); }
  int out_dim() const { return out_.dim(); }

  const std::vector<Mat>& kraus() const;  // derived from Choi if absent; needs CP
  const Mat& choi() const;
  const Mat& superop() const;

  bool is_cp(double eps = tol::kPositivity) const;
  bool is_tp(double eps = 1e-10) const;
  /// max-abs deviation of sum K^dag K (Choi input marginal) from identity/tau.
  double tp_defect() const;

  /// Action on a raw matrix of the full input dimension.
  Mat apply_matrix(const Mat& x) const;
  /// Hermitian-adjoint map (Kraus daggered), for variational use.
  Mat apply_adjoint_matrix(const Mat& y) const;

 private:
  QuantumChannel(SystemLayout in, SystemLayout out) : in_(std::move(in)), out_(std::move(out)) {}
  SystemLayout in_, out_;
  mutable std::optional<std::vector<Mat>> kraus_;
  mutable std::optional<Mat> choi_;
  mutable std::optional<Mat> superop_;
};

// ---- application -------------------------------------------------------------

/// Lambda (x) id applied to the registers named in `on` (in order, matching the
/// channel's input layout registers). Output register order: channel outputs
/// first, untouched registers after, in their original relative order.
DensityOperator apply(const QuantumChannel& lambda, const DensityOperator& rho,
                      const std::vector<std::string>& on);
/// Same, without normalization checks; returns the raw matrix and its layout.
std::pair<Mat, SystemLayout> apply_unnormalized(const QuantumChannel& lambda,
                                                const Mat& m,
                                                const SystemLayout& layout,
                                                const std::vector<std::string>& on);

// ---- CJ isomorphism ----------------------------------------------------------

DensityOperator cj_state(const QuantumChannel& lambda);
/// Xi(X) = |A| Tr_{A'}[(1 (x) X^T) eta]; throws if eta is not PSD.
QuantumChannel cj_inverse(const Mat& eta, const SystemLayout& in,
                          const SystemLayout& out);

/// Index shuffles between the two matrix encodings of the same map.
Mat superop_to_choi(const Mat& s, int in_dim, int out_dim);
Mat choi_to_superop(const Mat& choi, int in_dim, int out_dim);

// ---- algebra -----------------------------------------------------------------

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);
/// Weighted sum in superoperator form; layouts must agree pairwise.
QuantumChannel linear_combination(const std::vector<std::pair<double, QuantumChannel>>& terms);

QuantumChannel transpose_channel(const QuantumChannel& lambda);
Isometry stinespring_dilate(const QuantumChannel& lambda);

// ---- distances ---------------------------------------------------------------

struct DiamondBounds {
  double lower = 0.0;           // ||eta1 - eta2||_1, achievable input
  double upper = 0.0;           // |in| * lower
  double heuristic_exact = 0.0; // seeded local search over purified inputs
};

/// Two-sided diamond-distance bounds plus a fixed-seed variational refinement.
/// The refinement needs both maps CP; for general differences it is skipped
/// (heuristic_exact = lower).
DiamondBounds diamond_distance_bounds(const QuantumChannel& a, const QuantumChannel& b,
                                      int restarts = 5, int iters = 40);

}  // namespace qnm
