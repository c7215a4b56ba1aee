#include "qnm/auth.hpp"

#include <cmath>

namespace qnm {

namespace {

struct TagMaps {
  Mat append;   // A -> C = A' (x) T, |a> -> |a>|tag>
  Mat extract;  // C -> A, <tag| on the T factor
  int tag_dim = 1;
};

TagMaps tag_maps(const EncryptionScheme& scheme) {
  TagMaps tm;
  int a = scheme.a_dim();
  int c = scheme.c_dim();
  Vec tag(1);
  tag(0) = 1.0;
  if (scheme.tag()) {
    tm.tag_dim = 1 << scheme.tag()->tag_qubits;
    tag = scheme.tag()->tag_state;
  }
  if (a * tm.tag_dim != c)
    throw std::invalid_argument("tag_maps: plaintext/tag/ciphertext dims inconsistent");
  tm.append = Mat::Zero(c, a);
  tm.extract = Mat::Zero(a, c);
  for (int ai = 0; ai < a; ++ai)
    for (int ti = 0; ti < tm.tag_dim; ++ti) {
      tm.append(ai * tm.tag_dim + ti, ai) = tag(ti);
      tm.extract(ai, ai * tm.tag_dim + ti) = std::conj(tag(ti));
    }
  return tm;
}

Mat embed_iso(int a) {
  Mat e = Mat::Zero(a + 1, a);
  e.topLeftCorner(a, a) = Mat::Identity(a, a);
  return e;
}

}  // namespace

double KeywiseReport::bad_fraction(double alpha) const {
  if (per_key.empty()) return 0.0;
  double thresh = alpha * ms_bound;
  int bad = 0;
  for (const auto& e : per_key)
    if (e.deviation * e.deviation > thresh) ++bad;
  return double(bad) / double(per_key.size());
}

KeywiseReport gyz_keywise(const EncryptionScheme& scheme, const Mat& v,
                          const Vec& psi, double delta_upper) {
  if (!scheme.is_unitary())
    throw std::invalid_argument("gyz_keywise: needs explicit key unitaries");
  if ((v.adjoint() * v - Mat::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("gyz_keywise: attack must be an isometry");
  TagMaps tm = tag_maps(scheme);
  int c = scheme.c_dim();
  int a = scheme.a_dim();
  int b = static_cast<int>(v.cols()) / c;
  int bt = static_cast<int>(v.rows()) / c;
  if (b * c != v.cols() || bt * c != v.rows())
    throw std::invalid_argument("gyz_keywise: attack does not factor over C");
  if (psi.size() != a * b)
    throw std::invalid_argument("gyz_keywise: input state dim mismatch");

  // Gamma_V = (1/|C|) Tr_C V, acting B -> Bt
  Mat gamma = Mat::Zero(bt, b);
  for (int x = 0; x < c; ++x)
    for (int i = 0; i < bt; ++i)
      for (int j = 0; j < b; ++j) gamma(i, j) += v(x * bt + i, x * b + j) / double(c);

  Vec ideal = kron(Mat::Identity(a, a), gamma) * psi;
  Mat ib = Mat::Identity(b, b), ibt = Mat::Identity(bt, bt);

  KeywiseReport rep;
  rep.ms_bound = 1.0 / double(tm.tag_dim) + 3.0 * delta_upper;
  for (int k = 0; k < scheme.num_keys(); ++k) {
    const Mat& u = scheme.unitaries()[k];
    Mat phi = kron(tm.extract, ibt) * kron(u.adjoint(), ibt) * v * kron(u, ib) *
              kron(tm.append, ib);
    Vec branch = phi * psi;
    double dev = (ideal - branch).norm();
    rep.per_key.push_back({k, dev, branch.squaredNorm()});
    rep.mean_sq_deviation += scheme.key_weight(k) * dev * dev;
  }
  return rep;
}

double gyz_residual(const EncryptionScheme& scheme, const QuantumChannel& attack,
                    const DensityOperator& rho_ab) {
  int c = scheme.c_dim();
  int a = scheme.a_dim();
  int b = attack.in_dim() / c;
  int bt = attack.out_dim() / c;
  Isometry dil = stinespring_dilate(attack);  // rows (env, C, Bt)
  int ne = dil.env_dim;

  // oblivious witness B -> E (x) Bt
  Mat g = Mat::Zero(ne * bt, b);
  for (int e = 0; e < ne; ++e)
    for (int x = 0; x < c; ++x)
      for (int i = 0; i < bt; ++i)
        for (int j = 0; j < b; ++j)
          g(e * bt + i, j) += dil.matrix(e * c * bt + x * bt + i, x * b + j) / double(c);

  Mat big_g = kron(Mat::Identity(a, a), g);  // A (x) B -> A (x) E (x) Bt
  Mat lifted = big_g * rho_ab.matrix() * big_g.adjoint();
  SystemLayout l_aebt({{"A", a}, {"E", ne}, {"Bt", bt}});
  Mat witness = partial_trace_raw(lifted, l_aebt, {false, true, false});
  Mat emb = kron(embed_iso(a), Mat::Identity(bt, bt));
  Mat ideal = emb * witness * emb.adjoint();  // on Abar (x) Bt

  Mat pacc = kron(accept_projector(a), Mat::Identity(bt, bt));
  double residual = 0.0;
  const SystemLayout& rho_layout = rho_ab.layout();
  for (int k = 0; k < scheme.num_keys(); ++k) {
    auto [enc_m, enc_l] = apply_unnormalized(scheme.enc(k), rho_ab.matrix(),
                                             rho_layout, {"A"});
    auto [att_m, att_l] = apply_unnormalized(attack, enc_m, enc_l, {"C", "B"});
    auto [dec_m, dec_l] = apply_unnormalized(scheme.dec(k), att_m, att_l, {"C"});
    // dec_l = [Abar, Bt]
    Mat projected = pacc * dec_m * pacc;
    residual += scheme.key_weight(k) * trace_norm(projected - ideal);
  }
  return residual;
}

DnsReport dns_residual(const EncryptionScheme& scheme, const QuantumChannel& attack,
                       const std::vector<DensityOperator>& battery) {
  int c = scheme.c_dim();
  int a = scheme.a_dim();
  double c2 = double(c) * c;

  DensityOperator dummy(Mat::Identity(1, 1),
                        SystemLayout({{"A", 1}, {"B", 1}, {"R", 1}}));
  AttackScenario sc{scheme, dummy, attack};
  CharacterizationParts parts = characterization_ideal(sc);

  DnsReport rep;
  Mat dk_tau = avg_decrypt(scheme).apply_matrix(maximally_mixed(c));
  rep.gamma_hat = (accept_projector(a) * dk_tau).trace().real();
  rep.gamma = std::max(rep.gamma_hat, 1.0 / c2);

  QuantumChannel acc = linear_combination(
      {{1.0, parts.prime}, {(rep.gamma * c2 - 1.0) / (c2 - 1.0), parts.second}});
  QuantumChannel rej = linear_combination(
      {{(1.0 - rep.gamma) * c2 / (c2 - 1.0), parts.second}});

  // the pair must sum to a TP map; renormalize through M^{-1/2} (.) M^{-1/2}
  // when it does not
  QuantumChannel total = linear_combination({{1.0, acc}, {1.0, rej}});
  int b = attack.in_dim() / c;
  const Mat& eta = total.choi();
  int bt = attack.out_dim() / c;
  Mat m = Mat::Zero(b, b);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      cxd accum = 0.0;
      for (int x = 0; x < bt; ++x) accum += eta(x * b + i, x * b + j);
      m(i, j) = accum * double(b);
    }
  rep.correction = operator_norm(m - Mat::Identity(b, b));
  if (rep.correction > 1e-10) {
    Eigen::SelfAdjointEigenSolver<Mat> es(((m + m.adjoint()) / 2.0).eval());
    Mat inv_sqrt = Mat::Zero(b, b);
    for (int i = 0; i < b; ++i) {
      double lam = std::max(es.eigenvalues()(i), 1e-14);
      inv_sqrt += (1.0 / std::sqrt(lam)) * es.eigenvectors().col(i) *
                  es.eigenvectors().col(i).adjoint();
    }
    QuantumChannel renorm = QuantumChannel::from_kraus(
        {inv_sqrt}, acc.in_layout(), acc.in_layout());
    acc = compose(acc, renorm);
    rej = compose(rej, renorm);
  }

  QuantumChannel eff = effective_channel(sc);
  Mat emb = embed_iso(a);
  for (const auto& rho : battery) {
    auto [eff_m, eff_l] = apply_unnormalized(eff, rho.matrix(), rho.layout(), {"A", "B"});
    // eff_l = [Abar, Bt]
    auto [acc_m, acc_l] = apply_unnormalized(acc, rho.matrix(), rho.layout(), {"B"});
    // acc_l = [Bt, A]; fold the A factor back in front and embed into Abar
    Mat acc_ab = permute_raw(acc_m, acc_l, {1, 0});
    Mat ideal = kron(emb, Mat::Identity(eff.out_dim() / (a + 1),
                                        eff.out_dim() / (a + 1)));
    Mat ideal_state = ideal * acc_ab * ideal.adjoint();

    std::vector<std::string> drop;
    for (const auto& reg : rho.layout().registers())
      if (reg.label != "B") drop.push_back(reg.label);
    DensityOperator rho_b = partial_trace(rho, drop);
    Mat rej_out = rej.apply_matrix(rho_b.matrix());
    Mat bot = Mat::Zero(a + 1, a + 1);
    bot(a, a) = 1.0;
    ideal_state += kron(bot, rej_out);

    rep.residual = std::max(rep.residual, trace_norm(eff_m - ideal_state));
  }
  return rep;
}

std::vector<GyzDnsEntry> gyz_implies_dns_check(
    const EncryptionScheme& scheme,
    const std::vector<std::pair<std::string, QuantumChannel>>& attacks,
    const DensityOperator& rho_ab, double slack) {
  std::vector<GyzDnsEntry> out;
  const double regime = 1.0 / (62.0 * 62.0);
  for (const auto& [name, attack] : attacks) {
    GyzDnsEntry e;
    e.attack = name;
    e.eps_gyz = gyz_residual(scheme, attack, rho_ab);
    e.eps_dns = dns_residual(scheme, attack, {rho_ab}).residual;
    e.bound = 4.0 * (28.0 * std::sqrt(e.eps_gyz) + 3.0 * e.eps_gyz);
    e.in_regime = e.eps_gyz <= regime;
    e.pass = !e.in_regime || e.eps_dns <= e.bound + slack;
    out.push_back(std::move(e));
  }
  return out;
}

std::pair<double, double> pauli_attack_accept_stats(const EncryptionScheme& scheme,
                                                    const Mat& p, const Vec& psi) {
  if (!scheme.is_unitary())
    throw std::invalid_argument("pauli_attack_accept_stats: needs key unitaries");
  Mat canon = phase_canonical(p);
  if ((canon - Mat::Identity(p.rows(), p.cols())).cwiseAbs().maxCoeff() < 1e-10)
    throw std::invalid_argument(
        "pauli_attack_accept_stats: identity attack has its own path");
  TagMaps tm = tag_maps(scheme);
  int a = scheme.a_dim();
  if (psi.size() != a)
    throw std::invalid_argument("pauli_attack_accept_stats: state dim mismatch");
  double accept = 0.0, fid_mass = 0.0;
  for (int k = 0; k < scheme.num_keys(); ++k) {
    const Mat& u = scheme.unitaries()[k];
    Vec branch = tm.extract * (u.adjoint() * (p * (u * (tm.append * psi))));
    double pk = branch.squaredNorm();
    accept += scheme.key_weight(k) * pk;
    if (pk > 1e-12)
      fid_mass += scheme.key_weight(k) * std::norm(psi.dot(branch)) / 1.0;
  }
  double fidelity = accept > 1e-12 ? fid_mass / accept : 0.0;
  return {accept, fidelity};
}

}  // namespace qnm
