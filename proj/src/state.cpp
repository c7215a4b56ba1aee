#include "qnm/state.hpp"

#include <cmath>
#include <numeric>

namespace qnm {

DensityOperator::DensityOperator(Mat matrix, SystemLayout layout)
    : m_(std::move(matrix)), layout_(std::move(layout)) {
  if (m_.rows() != m_.cols() || m_.rows() != layout_.dim())
    throw std::invalid_argument("DensityOperator: matrix/layout dimension mismatch");
  double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::kHermitian)
    throw std::invalid_argument("DensityOperator: not Hermitian (asymmetry " +
                                std::to_string(asym) + ")");
  m_ = ((m_ + m_.adjoint()) / 2.0).eval();
  double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace)
    throw std::invalid_argument("DensityOperator: trace " + std::to_string(tr));
  Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::kPositivity)
    throw std::invalid_argument("DensityOperator: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

// ---- composition / marginals -------------------------------------------------

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

DensityOperator tensor_compose(const std::vector<DensityOperator>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor_compose: empty");
  Mat m = parts[0].matrix();
  SystemLayout layout = parts[0].layout();
  for (size_t i = 1; i < parts.size(); ++i) {
    layout = layout.concat(parts[i].layout());  // throws on duplicate labels
    m = kron(m, parts[i].matrix());
  }
  return DensityOperator(std::move(m), std::move(layout));
}

Mat partial_trace_raw(const Mat& m, const SystemLayout& layout,
                      const std::vector<bool>& traced) {
  const int n = layout.num_registers();
  if (static_cast<int>(traced.size()) != n)
    throw std::invalid_argument("partial_trace_raw: flag count mismatch");
  int dk = 1, dt = 1;
  for (int i = 0; i < n; ++i) (traced[i] ? dt : dk) *= layout.reg(i).dim;

  // Decompose a full index into (kept, traced) components via strides.
  std::vector<int> dims(n), strides(n);
  for (int i = 0; i < n; ++i) {
    dims[i] = layout.reg(i).dim;
    strides[i] = layout.stride(i);
  }
  // full index for kept multi-index k and traced multi-index t
  std::vector<int> kept_regs, tr_regs;
  for (int i = 0; i < n; ++i) (traced[i] ? tr_regs : kept_regs).push_back(i);

  auto full_index = [&](int kept, int tr) {
    int idx = 0;
    for (int j = static_cast<int>(kept_regs.size()) - 1; j >= 0; --j) {
      int r = kept_regs[j];
      idx += (kept % dims[r]) * strides[r];
      kept /= dims[r];
    }
    for (int j = static_cast<int>(tr_regs.size()) - 1; j >= 0; --j) {
      int r = tr_regs[j];
      idx += (tr % dims[r]) * strides[r];
      tr /= dims[r];
    }
    return idx;
  };

  Mat out = Mat::Zero(dk, dk);
  for (int r = 0; r < dk; ++r)
    for (int c = 0; c < dk; ++c) {
      cxd acc = 0.0;
      for (int t = 0; t < dt; ++t) acc += m(full_index(r, t), full_index(c, t));
      out(r, c) = acc;
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& discard) {
  const SystemLayout& layout = rho.layout();
  std::vector<bool> traced(layout.num_registers(), false);
  for (const auto& label : discard) traced[layout.index_of(label)] = true;
  return DensityOperator(partial_trace_raw(rho.matrix(), layout, traced),
                         layout.without(discard));
}

Mat permute_raw(const Mat& m, const SystemLayout& layout,
                const std::vector<int>& new_order) {
  const int n = layout.num_registers();
  const int d = layout.dim();
  std::vector<int> dims(n), strides(n);
  for (int i = 0; i < n; ++i) {
    dims[i] = layout.reg(i).dim;
    strides[i] = layout.stride(i);
  }
  // map from new flat index to old flat index
  std::vector<int> map(d);
  for (int idx = 0; idx < d; ++idx) {
    int rem = idx, old = 0;
    for (int j = n - 1; j >= 0; --j) {
      int r = new_order[j];
      old += (rem % dims[r]) * strides[r];
      rem /= dims[r];
    }
    map[idx] = old;
  }
  Mat out(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out(r, c) = m(map[r], map[c]);
  return out;
}

DensityOperator permute_registers(const DensityOperator& rho,
                                  const std::vector<std::string>& order) {
  const SystemLayout& layout = rho.layout();
  if (static_cast<int>(order.size()) != layout.num_registers())
    throw std::invalid_argument("permute_registers: order must name every register");
  std::vector<int> perm;
  std::vector<Register> regs;
  for (const auto& label : order) {
    int i = layout.index_of(label);
    perm.push_back(i);
    regs.push_back(layout.reg(i));
  }
  return DensityOperator(permute_raw(rho.matrix(), layout, perm),
                         SystemLayout(std::move(regs)));
}

// ---- special states ----------------------------------------------------------

Vec max_entangled_vec(int dim) {
  Vec v = Vec::Zero(dim * dim);
  for (int i = 0; i < dim; ++i) v(i * dim + i) = 1.0 / std::sqrt(double(dim));
  return v;
}

Mat phi_plus(int dim) {
  Vec v = max_entangled_vec(dim);
  return v * v.adjoint();
}

Mat pi_minus(int dim) { return Mat::Identity(dim * dim, dim * dim) - phi_plus(dim); }

Mat tau_minus(int dim) { return pi_minus(dim) / (double(dim) * dim - 1.0); }

Mat maximally_mixed(int dim) { return Mat::Identity(dim, dim) / double(dim); }

DensityOperator max_entangled(int dim, const std::string& label) {
  return DensityOperator(phi_plus(dim),
                         SystemLayout({{label, dim}, {label + "'", dim}}));
}

Mat swap_operator(int dim) {
  Mat f = Mat::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) f(j * dim + i, i * dim + j) = 1.0;
  return f;
}

std::pair<double, double> swap_trick_check(const Mat& a, const Mat& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("swap_trick_check: need equal square matrices");
  int d = static_cast<int>(a.rows());
  cxd lhs = (a * b).trace();
  Mat ab(d * d, d * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) ab.block(r * d, c * d, d, d) = a(r, c) * b;
  cxd rhs = (swap_operator(d) * ab).trace();
  return {lhs.real(), rhs.real()};
}

// ---- norms -------------------------------------------------------------------

double trace_norm(const Mat& m) {
  if (m.rows() == m.cols() &&
      (m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-11 * (1.0 + m.cwiseAbs().maxCoeff())) {
    Eigen::SelfAdjointEigenSolver<Mat> es(((m + m.adjoint()) / 2.0).eval(),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

double operator_norm(const Mat& m) {
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues().maxCoeff();
}

double hs_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace().real(); }

double holder_gap(const Mat& x, const Mat& y) {
  return trace_norm(x) * operator_norm(y) - (x * y).trace().real();
}

// ---- entropies ---------------------------------------------------------------

double binary_entropy(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12)
    throw std::invalid_argument("binary_entropy: p out of [0,1]");
  p = std::min(1.0, std::max(0.0, p));
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double entropy_raw(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < tol::kEigClamp) continue;  // clamp solver noise to 0
    h -= lam * std::log2(lam);
  }
  return h;
}

double von_neumann_entropy(const DensityOperator& rho) { return entropy_raw(rho.matrix()); }

static DensityOperator marginal_keeping(const DensityOperator& rho,
                                        const std::vector<std::string>& keep) {
  std::vector<std::string> discard;
  for (const auto& r : rho.layout().registers()) {
    if (std::find(keep.begin(), keep.end(), r.label) == keep.end())
      discard.push_back(r.label);
  }
  if (discard.empty()) return rho;
  return partial_trace(rho, discard);
}

static std::vector<std::string> join(std::vector<std::string> a,
                                     const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

double mutual_information(const DensityOperator& rho,
                          const std::vector<std::string>& part_a,
                          const std::vector<std::string>& part_b) {
  double ha = von_neumann_entropy(marginal_keeping(rho, part_a));
  double hb = von_neumann_entropy(marginal_keeping(rho, part_b));
  double hab = von_neumann_entropy(marginal_keeping(rho, join(part_a, part_b)));
  return ha + hb - hab;
}

double conditional_mutual_information(const DensityOperator& rho,
                                      const std::vector<std::string>& part_a,
                                      const std::vector<std::string>& part_b,
                                      const std::vector<std::string>& cond) {
  double hac = von_neumann_entropy(marginal_keeping(rho, join(part_a, cond)));
  double hbc = von_neumann_entropy(marginal_keeping(rho, join(part_b, cond)));
  double habc =
      von_neumann_entropy(marginal_keeping(rho, join(join(part_a, part_b), cond)));
  double hc = von_neumann_entropy(marginal_keeping(rho, cond));
  return hac + hbc - habc - hc;
}

double pinsker_gap(const DensityOperator& rho_ab,
                   const std::vector<std::string>& part_a,
                   const std::vector<std::string>& part_b) {
  double mi = mutual_information(rho_ab, part_a, part_b);
  DensityOperator ra = marginal_keeping(rho_ab, part_a);
  DensityOperator rb = marginal_keeping(rho_ab, part_b);
  DensityOperator prod = tensor_compose({ra, rb});
  // reorder product state to match rho_ab's register order
  DensityOperator joint = marginal_keeping(rho_ab, join(part_a, part_b));
  std::vector<std::string> order;
  for (const auto& r : joint.layout().registers()) order.push_back(r.label);
  DensityOperator prod_ord = permute_registers(prod, order);
  double dist = trace_norm(joint.matrix() - prod_ord.matrix());
  return mi - 0.5 * dist * dist;
}

FannesFlavor fannes_flavor_from_string(const std::string& name) {
  if (name == "entropy") return FannesFlavor::Entropy;
  if (name == "cond-entropy") return FannesFlavor::CondEntropy;
  if (name == "mutual-info") return FannesFlavor::MutualInfo;
  if (name == "cond-mutual-info") return FannesFlavor::CondMutualInfo;
  throw std::invalid_argument("unknown Fannes flavor: " + name);
}

double fannes_bound(double eps, const std::vector<int>& dims, FannesFlavor flavor) {
  if (eps < 0.0 || eps > 2.0) throw std::invalid_argument("fannes_bound: eps out of [0,2]");
  if (dims.empty()) throw std::invalid_argument("fannes_bound: need dims");
  double h = binary_entropy(std::min(eps, 1.0));
  double la = std::log2(double(dims[0]));
  double lmin = la;
  if (dims.size() > 1) lmin = std::min(la, std::log2(double(dims[1])));
  switch (flavor) {
    case FannesFlavor::Entropy:
      return eps * la + h;
    case FannesFlavor::CondEntropy:
      return 4.0 * eps * la + 2.0 * h;
    case FannesFlavor::MutualInfo:
      return 5.0 * eps * lmin + 3.0 * h;
    case FannesFlavor::CondMutualInfo:
      return 8.0 * eps * lmin + 4.0 * h;
  }
  throw std::logic_error("unreachable");
}

// ---- random inputs -----------------------------------------------------------

Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = cxd(g(rng), g(rng));
  return m;
}

Mat random_hermitian(int dim, std::mt19937_64& rng) {
  Mat m = random_matrix(dim, dim, rng);
  return (m + m.adjoint()) / 2.0;
}

Mat random_density_matrix(int dim, std::mt19937_64& rng) {
  Mat g = random_matrix(dim, dim, rng);
  Mat m = g * g.adjoint();
  return m / m.trace().real();
}

Vec random_pure_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cxd(g(rng), g(rng));
  return v / v.norm();
}

Mat random_unitary(int dim, std::mt19937_64& rng) {
  Mat g = random_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    cxd d = r(i, i);
    q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
  }
  return q;
}

}  // namespace qnm
