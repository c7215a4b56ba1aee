#include "qnm/scheme.hpp"

#include <cmath>

namespace qnm {

EncryptionScheme::EncryptionScheme(std::vector<double> key_weights,
                                   std::vector<QuantumChannel> enc,
                                   std::vector<QuantumChannel> dec,
                                   SystemLayout a_layout, SystemLayout c_layout)
    : weights_(std::move(key_weights)),
      enc_(std::move(enc)),
      dec_(std::move(dec)),
      a_(std::move(a_layout)),
      c_(std::move(c_layout)),
      abar_(SystemLayout::single("Abar", a_.dim() + 1)) {
  if (weights_.empty() || weights_.size() != enc_.size() || enc_.size() != dec_.size())
    throw std::invalid_argument("scheme: key/channel count mismatch");
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("scheme: negative key weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("scheme: key weights sum to " + std::to_string(total));
  for (const auto& e : enc_)
    if (e.in_dim() != a_.dim() || e.out_dim() != c_.dim())
      throw std::invalid_argument("scheme: encrypt channel layout mismatch");
  for (const auto& d : dec_)
    if (d.in_dim() != c_.dim() || d.out_dim() != a_.dim() + 1)
      throw std::invalid_argument("scheme: decrypt channel layout mismatch");
}

Mat embed_abar(const Mat& rho_a, int a_dim) {
  Mat out = Mat::Zero(a_dim + 1, a_dim + 1);
  out.topLeftCorner(a_dim, a_dim) = rho_a;
  return out;
}

Mat accept_projector(int a_dim) {
  Mat p = Mat::Identity(a_dim + 1, a_dim + 1);
  p(a_dim, a_dim) = 0.0;
  return p;
}

double check_correctness(const EncryptionScheme& s) {
  int a = s.a_dim();
  double worst = 0.0;
  for (int k = 0; k < s.num_keys(); ++k) {
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < a; ++j) {
        Mat unit = Mat::Zero(a, a);
        unit(i, j) = 1.0;
        Mat out = s.dec(k).apply_matrix(s.enc(k).apply_matrix(unit));
        worst = std::max(worst, trace_norm(out - embed_abar(unit, a)));
      }
  }
  return worst;
}

QuantumChannel avg_encrypt(const EncryptionScheme& s) {
  std::vector<std::pair<double, QuantumChannel>> terms;
  for (int k = 0; k < s.num_keys(); ++k) terms.push_back({s.key_weight(k), s.enc(k)});
  return linear_combination(terms);
}

QuantumChannel avg_decrypt(const EncryptionScheme& s) {
  std::vector<std::pair<double, QuantumChannel>> terms;
  for (int k = 0; k < s.num_keys(); ++k) terms.push_back({s.key_weight(k), s.dec(k)});
  return linear_combination(terms);
}

// ---- constructors ------------------------------------------------------------

namespace {

Mat embed_isometry(int a_dim) {  // A -> Abar
  Mat e = Mat::Zero(a_dim + 1, a_dim);
  e.topLeftCorner(a_dim, a_dim) = Mat::Identity(a_dim, a_dim);
  return e;
}

}  // namespace

EncryptionScheme unitary_scheme_from(const UnitaryEnsemble& ensemble) {
  ensemble.validate();
  int d = ensemble.dim;
  SystemLayout a = SystemLayout::single("A", d);
  SystemLayout c = SystemLayout::single("C", d);
  SystemLayout abar = SystemLayout::single("Abar", d + 1);
  Mat embed = embed_isometry(d);
  std::vector<double> w;
  std::vector<QuantumChannel> enc, dec;
  std::vector<Mat> us;
  for (const auto& e : ensemble.elements) {
    w.push_back(e.weight);
    enc.push_back(QuantumChannel::from_kraus({e.unitary}, a, c));
    dec.push_back(QuantumChannel::from_kraus({embed * e.unitary.adjoint()}, c, abar));
    us.push_back(e.unitary);
  }
  EncryptionScheme s(std::move(w), std::move(enc), std::move(dec), a, c);
  s.set_unitaries(std::move(us));
  return s;
}

EncryptionScheme tagged_scheme(const EncryptionScheme& base, int t) {
  int td = 1 << t;
  Vec tag = Vec::Zero(std::max(td, 1));
  tag(0) = 1.0;
  return tagged_scheme(base, t, tag);
}

EncryptionScheme tagged_scheme(const EncryptionScheme& base, int t, const Vec& tag_state) {
  if (t == 0) return base;
  int td = 1 << t;
  int a_big = base.a_dim();
  if (a_big % td != 0)
    throw std::invalid_argument("tagged_scheme: tag space does not divide plaintext");
  if (tag_state.size() != td || std::abs(tag_state.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("tagged_scheme: tag state must be a unit vector on 2^t dims");
  int a_new = a_big / td;
  SystemLayout a = SystemLayout::single("A", a_new);
  SystemLayout abar = SystemLayout::single("Abar", a_new + 1);

  // |a'> -> |a'> (x) |tag>, an isometry A -> A' (x) T = base plaintext
  Mat append = Mat::Zero(a_big, a_new);
  for (int ap = 0; ap < a_new; ++ap)
    for (int ti = 0; ti < td; ++ti) append(ap * td + ti, ap) = tag_state(ti);

  // tag-verified extraction Abar_base -> A, and its complement mass
  Mat p_a = embed_isometry(a_big).adjoint();                 // Abar_base -> A_base
  Mat extract = Mat::Zero(a_new, a_big);                     // <tag| on the T factor
  for (int ap = 0; ap < a_new; ++ap)
    for (int ti = 0; ti < td; ++ti) extract(ap, ap * td + ti) = std::conj(tag_state(ti));
  Mat accept_map = embed_isometry(a_new) * extract * p_a;    // Abar_base -> Abar_new
  Mat q = Mat::Identity(a_big + 1, a_big + 1) -
          (extract * p_a).adjoint() * (extract * p_a);       // rejected subspace

  Eigen::SelfAdjointEigenSolver<Mat> es(q);
  std::vector<Mat> reject_arms;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < 1e-12) continue;
    Mat arm = Mat::Zero(a_new + 1, a_big + 1);
    arm.row(a_new) = std::sqrt(lam) * es.eigenvectors().col(i).adjoint();
    reject_arms.push_back(std::move(arm));
  }

  std::vector<double> w;
  std::vector<QuantumChannel> enc, dec;
  for (int k = 0; k < base.num_keys(); ++k) {
    w.push_back(base.key_weight(k));
    std::vector<Mat> eks;
    for (const auto& kr : base.enc(k).kraus()) eks.push_back(kr * append);
    enc.push_back(QuantumChannel::from_kraus(std::move(eks), a, base.c_layout()));
    std::vector<Mat> dks;
    for (const auto& kr : base.dec(k).kraus()) {
      dks.push_back(accept_map * kr);
      for (const auto& arm : reject_arms) dks.push_back(arm * kr);
    }
    dec.push_back(QuantumChannel::from_kraus(std::move(dks), base.c_layout(), abar));
  }
  EncryptionScheme s(std::move(w), std::move(enc), std::move(dec), a, base.c_layout());
  if (base.is_unitary()) s.set_unitaries(base.unitaries());
  s.set_c_blocks(base.c_blocks());
  EncryptionScheme::TagInfo info;
  info.tag_qubits = t;
  info.tag_state = tag_state;
  s.set_tag(std::move(info));
  return s;
}

EncryptionScheme injection_scheme(const EncryptionScheme& base) {
  int a = base.a_dim(), c = base.c_dim();
  int cp = c + a;
  SystemLayout c_new = SystemLayout::single("C", cp);
  SystemLayout abar = SystemLayout::single("Abar", a + 1);

  Mat top = Mat::Zero(cp, c);  // C block of the enlarged ciphertext
  top.topLeftCorner(c, c) = Mat::Identity(c, c);
  Mat pass = Mat::Zero(a + 1, cp);  // Ahat block decoded verbatim
  for (int j = 0; j < a; ++j) pass(j, c + j) = 1.0;

  std::vector<double> w;
  std::vector<QuantumChannel> enc, dec;
  for (int k = 0; k < base.num_keys(); ++k) {
    w.push_back(base.key_weight(k));
    std::vector<Mat> eks;
    for (const auto& kr : base.enc(k).kraus()) eks.push_back(top * kr);
    enc.push_back(QuantumChannel::from_kraus(std::move(eks), base.a_layout(), c_new));
    std::vector<Mat> dks{pass};
    for (const auto& kr : base.dec(k).kraus()) dks.push_back(kr * top.adjoint());
    dec.push_back(QuantumChannel::from_kraus(std::move(dks), c_new, abar));
  }
  EncryptionScheme s(std::move(w), std::move(enc), std::move(dec), base.a_layout(),
                     c_new);
  s.set_c_blocks({c, a});
  return s;
}

EncryptionScheme qotp_scheme(int n) { return unitary_scheme_from(pauli_group(n)); }

EncryptionScheme clifford_scheme(int n) { return unitary_scheme_from(clifford_group(n)); }

EncryptionScheme sampled_clifford_scheme(int n, int keys, uint64_t seed) {
  return unitary_scheme_from(random_clifford(n, keys, seed));
}

Mat werner_holevo_v(int d) {
  if (d % 2 != 0) throw std::invalid_argument("werner_holevo_v: d must be even");
  Mat v = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    double sign = (d - 2 * j - 1) > 0 ? 1.0 : -1.0;
    v(j, d - 1 - j) = cxd(0.0, sign);
  }
  return v;
}

EncryptionScheme werner_holevo_scheme(const UnitaryEnsemble& base_design) {
  if (base_design.dim % 2 != 0)
    throw std::invalid_argument("werner_holevo_scheme: dimension must be even");
  Mat v = werner_holevo_v(base_design.dim);
  UnitaryEnsemble keys;
  keys.dim = base_design.dim;
  keys.provenance = base_design.provenance;
  for (const auto& e : base_design.elements)
    keys.elements.push_back({e.unitary * v * e.unitary.transpose(), e.weight});
  return unitary_scheme_from(keys);
}

std::pair<Isometry, Mat> decompose_encryption_map(const QuantumChannel& e) {
  const auto& ks = e.kraus();
  int a = e.in_dim();
  int ne = static_cast<int>(ks.size());
  std::vector<double> s(ne, 0.0);
  for (int i = 0; i < ne; ++i) {
    for (int j = 0; j < ne; ++j) {
      Mat g = ks[i].adjoint() * ks[j];
      if (i == j) {
        s[i] = g.trace().real() / double(a);
        if ((g - s[i] * Mat::Identity(a, a)).cwiseAbs().maxCoeff() > 1e-8)
          throw std::runtime_error(
              "decompose_encryption_map: map is not of the isometry-ancilla form");
      } else if (g.cwiseAbs().maxCoeff() > 1e-8) {
        throw std::runtime_error(
            "decompose_encryption_map: map is not of the isometry-ancilla form");
      }
    }
  }
  // V (|a> (x) |i>) = K_i |a> / sqrt(s_i); sigma = diag(s)
  Mat v = Mat::Zero(e.out_dim(), a * ne);
  Mat sigma = Mat::Zero(ne, ne);
  for (int i = 0; i < ne; ++i) {
    if (s[i] < 1e-12)
      throw std::runtime_error("decompose_encryption_map: degenerate Kraus weight");
    sigma(i, i) = s[i];
    for (int col = 0; col < a; ++col)
      v.col(col * ne + i) = ks[i].col(col) / std::sqrt(s[i]);
  }
  return {Isometry{std::move(v), ne}, std::move(sigma)};
}

}  // namespace qnm
