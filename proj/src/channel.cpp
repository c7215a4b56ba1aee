#include "qnm/channel.hpp"

#include <cmath>

namespace qnm {

namespace {

Vec vec_rowmajor(const Mat& x) {
  Vec v(x.rows() * x.cols());
  for (int r = 0; r < x.rows(); ++r)
    for (int c = 0; c < x.cols(); ++c) v(r * x.cols() + c) = x(r, c);
  return v;
}

Mat unvec_rowmajor(const Vec& v, int dim) {
  Mat x(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) x(r, c) = v(r * dim + c);
  return x;
}

}  // namespace

// ---- constructors ------------------------------------------------------------

QuantumChannel QuantumChannel::from_kraus(std::vector<Mat> kraus, SystemLayout in,
                                          SystemLayout out) {
  if (kraus.empty()) throw std::invalid_argument("from_kraus: need at least one operator");
  for (const auto& k : kraus)
    if (k.rows() != out.dim() || k.cols() != in.dim())
      throw std::invalid_argument("from_kraus: operator shape does not match layouts");
  QuantumChannel ch(std::move(in), std::move(out));
  ch.kraus_ = std::move(kraus);
  return ch;
}

QuantumChannel QuantumChannel::from_choi(Mat choi, SystemLayout in, SystemLayout out) {
  int d = in.dim() * out.dim();
  if (choi.rows() != d || choi.cols() != d)
    throw std::invalid_argument("from_choi: matrix shape does not match layouts");
  QuantumChannel ch(std::move(in), std::move(out));
  ch.choi_ = std::move(choi);
  return ch;
}

QuantumChannel QuantumChannel::from_superop(Mat s, SystemLayout in, SystemLayout out) {
  if (s.rows() != out.dim() * out.dim() || s.cols() != in.dim() * in.dim())
    throw std::invalid_argument("from_superop: matrix shape does not match layouts");
  QuantumChannel ch(std::move(in), std::move(out));
  ch.superop_ = std::move(s);
  return ch;
}

QuantumChannel QuantumChannel::identity(const SystemLayout& layout) {
  return from_kraus({Mat::Identity(layout.dim(), layout.dim())}, layout, layout);
}

QuantumChannel QuantumChannel::unitary(const Mat& u, SystemLayout in, SystemLayout out) {
  return from_kraus({u}, std::move(in), std::move(out));
}

QuantumChannel QuantumChannel::unitary(const Mat& u, const SystemLayout& layout) {
  return from_kraus({u}, layout, layout);
}

QuantumChannel QuantumChannel::constant(const Mat& sigma, SystemLayout in,
                                        SystemLayout out) {
  // Choi of X -> Tr(X) sigma is sigma (x) tau_in.
  Mat eta = kron(sigma, maximally_mixed(in.dim()));
  return from_choi(std::move(eta), std::move(in), std::move(out));
}

// ---- representation conversions ----------------------------------------------

Mat superop_to_choi(const Mat& s, int in_dim, int out_dim) {
  Mat eta(out_dim * in_dim, out_dim * in_dim);
  for (int b = 0; b < out_dim; ++b)
    for (int a = 0; a < in_dim; ++a)
      for (int bt = 0; bt < out_dim; ++bt)
        for (int at = 0; at < in_dim; ++at)
          eta(b * in_dim + a, bt * in_dim + at) =
              s(b * out_dim + bt, a * in_dim + at) / double(in_dim);
  return eta;
}

Mat choi_to_superop(const Mat& choi, int in_dim, int out_dim) {
  Mat s(out_dim * out_dim, in_dim * in_dim);
  for (int b = 0; b < out_dim; ++b)
    for (int bt = 0; bt < out_dim; ++bt)
      for (int a = 0; a < in_dim; ++a)
        for (int at = 0; at < in_dim; ++at)
          s(b * out_dim + bt, a * in_dim + at) =
              choi(b * in_dim + a, bt * in_dim + at) * double(in_dim);
  return s;
}

const Mat& QuantumChannel::superop() const {
  if (!superop_) {
    if (kraus_) {
      Mat s = Mat::Zero(out_dim() * out_dim(), in_dim() * in_dim());
      for (const auto& k : *kraus_) s += kron(k, k.conjugate());
      superop_ = std::move(s);
    } else {
      superop_ = choi_to_superop(*choi_, in_dim(), out_dim());
    }
  }
  return *superop_;
}

const Mat& QuantumChannel::choi() const {
  if (!choi_) choi_ = superop_to_choi(superop(), in_dim(), out_dim());
  return *choi_;
}

const std::vector<Mat>& QuantumChannel::kraus() const {
  if (!kraus_) {
    Mat j = choi() * double(in_dim());
    Mat herm = (j + j.adjoint()) / 2.0;
    if ((j - herm).cwiseAbs().maxCoeff() > 1e-9)
      throw std::runtime_error("kraus: Choi matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    if (es.eigenvalues().minCoeff() < -1e-8)
      throw std::runtime_error("kraus: map is not CP (Choi eigenvalue " +
                               std::to_string(es.eigenvalues().minCoeff()) + ")");
    std::vector<Mat> ks;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      double lam = es.eigenvalues()(i);
      if (lam < 1e-12) continue;
      Vec v = std::sqrt(lam) * es.eigenvectors().col(i);
      Mat k(out_dim(), in_dim());
      for (int b = 0; b < out_dim(); ++b)
        for (int a = 0; a < in_dim(); ++a) k(b, a) = v(b * in_dim() + a);
      ks.push_back(std::move(k));
    }
    if (ks.empty()) ks.push_back(Mat::Zero(out_dim(), in_dim()));
    kraus_ = std::move(ks);
  }
  return *kraus_;
}

bool QuantumChannel::is_cp(double eps) const {
  Mat herm = (choi() + choi().adjoint()) / 2.0;
  if ((choi() - herm).cwiseAbs().maxCoeff() > eps) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -eps;
}

double QuantumChannel::tp_defect() const {
  // sum K^dag K - 1, read off the Choi input marginal.
  const Mat& eta = choi();
  int da = in_dim(), db = out_dim();
  Mat m = Mat::Zero(da, da);
  for (int a = 0; a < da; ++a)
    for (int at = 0; at < da; ++at) {
      cxd acc = 0.0;
      for (int b = 0; b < db; ++b) acc += eta(b * da + a, b * da + at);
      m(a, at) = acc * double(da);
    }
  return (m - Mat::Identity(da, da)).cwiseAbs().maxCoeff();
}

bool QuantumChannel::is_tp(double eps) const { return tp_defect() <= eps; }

// ---- action ------------------------------------------------------------------

Mat QuantumChannel::apply_matrix(const Mat& x) const {
  if (x.rows() != in_dim() || x.cols() != in_dim())
    throw std::invalid_argument("apply_matrix: dimension mismatch");
  if (kraus_) {
    Mat y = Mat::Zero(out_dim(), out_dim());
    for (const auto& k : *kraus_) y += k * x * k.adjoint();
    return y;
  }
  return unvec_rowmajor(superop() * vec_rowmajor(x), out_dim());
}

Mat QuantumChannel::apply_adjoint_matrix(const Mat& y) const {
  if (y.rows() != out_dim() || y.cols() != out_dim())
    throw std::invalid_argument("apply_adjoint_matrix: dimension mismatch");
  if (kraus_) {
    Mat x = Mat::Zero(in_dim(), in_dim());
    for (const auto& k : *kraus_) x += k.adjoint() * y * k;
    return x;
  }
  return unvec_rowmajor(superop().adjoint() * vec_rowmajor(y), in_dim());
}

std::pair<Mat, SystemLayout> apply_unnormalized(const QuantumChannel& lambda,
                                                const Mat& m,
                                                const SystemLayout& layout,
                                                const std::vector<std::string>& on) {
  if (static_cast<int>(on.size()) != lambda.in_layout().num_registers())
    throw std::invalid_argument("apply: register count does not match channel input");
  std::vector<int> perm;
  for (size_t i = 0; i < on.size(); ++i) {
    int idx = layout.index_of(on[i]);
    if (layout.reg(idx).dim != lambda.in_layout().reg(int(i)).dim)
      throw std::invalid_argument("apply: register dim mismatch on " + on[i]);
    perm.push_back(idx);
  }
  std::vector<Register> rest_regs;
  for (int i = 0; i < layout.num_registers(); ++i) {
    if (std::find(perm.begin(), perm.end(), i) == perm.end()) {
      perm.push_back(i);
      rest_regs.push_back(layout.reg(i));
    }
  }
  Mat x = permute_raw(m, layout, perm);
  int da = lambda.in_dim(), db = lambda.out_dim();
  int dr = layout.dim() / da;

  Mat y = Mat::Zero(db * dr, db * dr);
  if (lambda.in_dim() * dr <= 0) throw std::logic_error("apply: empty space");
  bool kraus_path = false;
  try {
    kraus_path = !lambda.kraus().empty();
  } catch (const std::runtime_error&) {
    kraus_path = false;  // non-CP map, use the transfer matrix per rest-block
  }
  if (kraus_path) {
    Mat idr = Mat::Identity(dr, dr);
    for (const auto& k : lambda.kraus()) {
      Mat big = kron(k, idr);
      y += big * x * big.adjoint();
    }
  } else {
    const Mat& s = lambda.superop();
    for (int r = 0; r < dr; ++r)
      for (int rt = 0; rt < dr; ++rt) {
        Mat blk(da, da);
        for (int a = 0; a < da; ++a)
          for (int at = 0; at < da; ++at) blk(a, at) = x(a * dr + r, at * dr + rt);
        Mat out_blk = unvec_rowmajor(s * vec_rowmajor(blk), db);
        for (int b = 0; b < db; ++b)
          for (int bt = 0; bt < db; ++bt) y(b * dr + r, bt * dr + rt) = out_blk(b, bt);
      }
  }
  SystemLayout out_layout = lambda.out_layout().concat(SystemLayout(rest_regs));
  return {std::move(y), std::move(out_layout)};
}

DensityOperator apply(const QuantumChannel& lambda, const DensityOperator& rho,
                      const std::vector<std::string>& on) {
  auto [m, layout] = apply_unnormalized(lambda, rho.matrix(), rho.layout(), on);
  return DensityOperator(std::move(m), std::move(layout));
}

// ---- CJ isomorphism ----------------------------------------------------------

DensityOperator cj_state(const QuantumChannel& lambda) {
  std::vector<Register> regs = lambda.out_layout().registers();
  for (const auto& r : lambda.in_layout().registers())
    regs.push_back({r.label + "'", r.dim});
  return DensityOperator(lambda.choi(), SystemLayout(std::move(regs)));
}

QuantumChannel cj_inverse(const Mat& eta, const SystemLayout& in,
                          const SystemLayout& out) {
  Mat herm = (eta + eta.adjoint()) / 2.0;
  if ((eta - herm).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("cj_inverse: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("cj_inverse: matrix not PSD");
  return QuantumChannel::from_choi(herm, in, out);
}

// ---- algebra -----------------------------------------------------------------

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.in_dim() != first.out_dim())
    throw std::invalid_argument("compose: intermediate dimensions differ");
  Mat s = second.superop() * first.superop();
  return QuantumChannel::from_superop(std::move(s), first.in_layout(),
                                      second.out_layout());
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  // Tensor in Kraus form when both factors are CP; otherwise interleave the
  // transfer-matrix indices directly.
  SystemLayout in = a.in_layout().concat(b.in_layout());
  SystemLayout out = a.out_layout().concat(b.out_layout());
  bool cp = true;
  try {
    a.kraus();
    b.kraus();
  } catch (const std::runtime_error&) {
    cp = false;
  }
  if (cp) {
    std::vector<Mat> ks;
    for (const auto& ka : a.kraus())
      for (const auto& kb : b.kraus()) ks.push_back(kron(ka, kb));
    return QuantumChannel::from_kraus(std::move(ks), std::move(in), std::move(out));
  }
  const Mat& sa = a.superop();
  const Mat& sb = b.superop();
  int oa = a.out_dim(), ob = b.out_dim(), ia = a.in_dim(), ib = b.in_dim();
  Mat s(oa * ob * oa * ob, ia * ib * ia * ib);
  for (int b1 = 0; b1 < oa; ++b1)
    for (int b2 = 0; b2 < ob; ++b2)
      for (int bt1 = 0; bt1 < oa; ++bt1)
        for (int bt2 = 0; bt2 < ob; ++bt2) {
          int row = (b1 * ob + b2) * oa * ob + (bt1 * ob + bt2);
          for (int a1 = 0; a1 < ia; ++a1)
            for (int a2 = 0; a2 < ib; ++a2)
              for (int at1 = 0; at1 < ia; ++at1)
                for (int at2 = 0; at2 < ib; ++at2) {
                  int col = (a1 * ib + a2) * ia * ib + (at1 * ib + at2);
                  s(row, col) = sa(b1 * oa + bt1, a1 * ia + at1) *
                                sb(b2 * ob + bt2, a2 * ib + at2);
                }
        }
  return QuantumChannel::from_superop(std::move(s), std::move(in), std::move(out));
}

QuantumChannel linear_combination(
    const std::vector<std::pair<double, QuantumChannel>>& terms) {
  if (terms.empty()) throw std::invalid_argument("linear_combination: empty");
  const auto& first = terms.front().second;
  Mat s = Mat::Zero(first.out_dim() * first.out_dim(), first.in_dim() * first.in_dim());
  for (const auto& [w, ch] : terms) {
    if (ch.in_dim() != first.in_dim() || ch.out_dim() != first.out_dim())
      throw std::invalid_argument("linear_combination: layout mismatch");
    s += w * ch.superop();
  }
  return QuantumChannel::from_superop(std::move(s), first.in_layout(),
                                      first.out_layout());
}

QuantumChannel transpose_channel(const QuantumChannel& lambda) {
  std::vector<Mat> ks;
  for (const auto& k : lambda.kraus()) ks.push_back(k.transpose());
  return QuantumChannel::from_kraus(std::move(ks), lambda.out_layout(),
                                    lambda.in_layout());
}

Isometry stinespring_dilate(const QuantumChannel& lambda) {
  const auto& ks = lambda.kraus();
  int ne = static_cast<int>(ks.size());
  Mat v(ne * lambda.out_dim(), lambda.in_dim());
  for (int e = 0; e < ne; ++e) v.block(e * lambda.out_dim(), 0, lambda.out_dim(), lambda.in_dim()) = ks[e];
  return Isometry{std::move(v), ne};
}

// ---- distances ---------------------------------------------------------------

DiamondBounds diamond_distance_bounds(const QuantumChannel& a, const QuantumChannel& b,
                                      int restarts, int iters) {
  if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim())
    throw std::invalid_argument("diamond_distance_bounds: layout mismatch");
  DiamondBounds out;
  out.lower = trace_norm(a.choi() - b.choi());
  out.upper = double(a.in_dim()) * out.lower;
  out.heuristic_exact = out.lower;
  if (!a.is_cp(1e-8) || !b.is_cp(1e-8)) return out;

  int da = a.in_dim();
  int dim = da * da;  // channel input tensor a same-size reference
  auto delta = [&](const Mat& x) {
    Mat y = Mat::Zero(a.out_dim() * da, a.out_dim() * da);
    Mat idr = Mat::Identity(da, da);
    for (const auto& k : a.kraus()) {
      Mat big = kron(k, idr);
      y += big * x * big.adjoint();
    }
    for (const auto& k : b.kraus()) {
      Mat big = kron(k, idr);
      y -= big * x * big.adjoint();
    }
    return y;
  };
  auto delta_adj = [&](const Mat& y) {
    Mat x = Mat::Zero(dim, dim);
    Mat idr = Mat::Identity(da, da);
    for (const auto& k : a.kraus()) {
      Mat big = kron(k, idr);
      x += big.adjoint() * y * big;
    }
    for (const auto& k : b.kraus()) {
      Mat big = kron(k, idr);
      x -= big.adjoint() * y * big;
    }
    return x;
  };

  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  double best = out.lower;
  for (int r = 0; r < restarts; ++r) {
    Vec psi = (r == 0) ? max_entangled_vec(da) : random_pure_state(dim, rng);
    double val = 0.0;
    for (int it = 0; it < iters; ++it) {
      Mat t = delta(psi * psi.adjoint());
      t = ((t + t.adjoint()) / 2.0).eval();
      Eigen::SelfAdjointEigenSolver<Mat> es(t);
      val = es.eigenvalues().cwiseAbs().sum();
      Mat m = Mat::Zero(t.rows(), t.cols());
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        m += (es.eigenvalues()(i) >= 0 ? 1.0 : -1.0) * es.eigenvectors().col(i) *
             es.eigenvectors().col(i).adjoint();
      Mat n = delta_adj(m);
      n = ((n + n.adjoint()) / 2.0).eval();
      Eigen::SelfAdjointEigenSolver<Mat> esn(n);
      Vec next = esn.eigenvectors().col(esn.eigenvalues().size() - 1);
      if ((next - psi).norm() < 1e-12) {
        psi = next;
        break;
      }
      psi = next;
    }
    best = std::max(best, val);
  }
  out.heuristic_exact = std::min(best, out.upper);
  return out;
}

}  // namespace qnm
