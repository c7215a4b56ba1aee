#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qnm/layout.hpp"

namespace qnm {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Construction and verification tolerances shared across the library.
namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kEigClamp = 1e-12;
}  // namespace tol

/// Positive unit-trace operator with a register layout.
class DensityOperator {
 public:
  DensityOperator(Mat matrix, SystemLayout layout);

  const Mat& matrix() const { return m_; }
  const SystemLayout& layout() const { return layout_; }
  int dim() const { return layout_.dim(); }

 private:
  Mat m_;
  SystemLayout layout_;
};

/// Real-valued entropic bookkeeping, keyed by expression descriptor,
/// e.g. "I(AR:B~)". Values in bits.
using EntropyLedger = std::map<std::string, double>;

// ---- composition / marginals -------------------------------------------------

Mat kron(const Mat& a, const Mat& b);

DensityOperator tensor_compose(const std::vector<DensityOperator>& parts);
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& discard);
DensityOperator permute_registers(const DensityOperator& rho,
                                  const std::vector<std::string>& order);

/// Raw-matrix partial trace over the registers flagged in `traced`
/// (one flag per register of `layout`, in order).
Mat partial_trace_raw(const Mat& m, const SystemLayout& layout,
                      const std::vector<bool>& traced);
Mat permute_raw(const Mat& m, const SystemLayout& layout,
                const std::vector<int>& new_order);

// ---- special states and operators -------------------------------------------

/// phi+ on SS' with labels (label, label+"'").
DensityOperator max_entangled(int dim, const std::string& label = "S");
Vec max_entangled_vec(int dim);
Mat phi_plus(int dim);          // rank-1 projector, d^2 x d^2
Mat pi_minus(int dim);          // 1 - phi+
Mat tau_minus(int dim);         // Pi^- / (d^2 - 1)
Mat maximally_mixed(int dim);   // 1/d
Mat swap_operator(int dim);     // F |i,j> = |j,i>

/// (Tr[AB], Tr[F A (x) B]); both sides of the swap trick.
std::pair<double, double> swap_trick_check(const Mat& a, const Mat& b);

// ---- norms -------------------------------------------------------------------

double trace_norm(const Mat& m);
double operator_norm(const Mat& m);
double hs_inner(const Mat& a, const Mat& b);  // Re Tr[a^dag b]
/// Holder slack ||X||_1 ||Y||_inf - Re Tr[XY]; >= 0 up to roundoff.
double holder_gap(const Mat& x, const Mat& y);

// ---- entropies (bits) --------------------------------------------------------

double binary_entropy(double p);
double von_neumann_entropy(const DensityOperator& rho);
double entropy_raw(const Mat& m);
double mutual_information(const DensityOperator& rho,
                          const std::vector<std::string>& part_a,
                          const std::vector<std::string>& part_b);
double conditional_mutual_information(const DensityOperator& rho,
                                      const std::vector<std::string>& part_a,
                                      const std::vector<std::string>& part_b,
                                      const std::vector<std::string>& cond);

/// I(A:B) - (1/2)||rho_AB - rho_A (x) rho_B||_1^2 ; nonnegative by Pinsker.
double pinsker_gap(const DensityOperator& rho_ab,
                   const std::vector<std::string>& part_a,
                   const std::vector<std::string>& part_b);

enum class FannesFlavor { Entropy, CondEntropy, MutualInfo, CondMutualInfo };
FannesFlavor fannes_flavor_from_string(const std::string& name);
double fannes_bound(double eps, const std::vector<int>& dims, FannesFlavor flavor);

// ---- random inputs (seeded, deterministic) -----------------------------------

Mat random_matrix(int rows, int cols, std::mt19937_64& rng);
Mat random_hermitian(int dim, std::mt19937_64& rng);
Mat random_density_matrix(int dim, std::mt19937_64& rng);
Vec random_pure_state(int dim, std::mt19937_64& rng);
Mat random_unitary(int dim, std::mt19937_64& rng);  // Haar via QR

}  // namespace qnm
