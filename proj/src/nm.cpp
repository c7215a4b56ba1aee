#include "qnm/nm.hpp"

#include <cmath>

namespace qnm {

namespace {

QuantumChannel trivial_id(const std::string& label) {
  return QuantumChannel::identity(SystemLayout::single(label, 1));
}

QuantumChannel embed_id_channel(int a_dim) {  // A -> Abar, X -> X + 0
  Mat e = Mat::Zero(a_dim + 1, a_dim);
  e.topLeftCorner(a_dim, a_dim) = Mat::Identity(a_dim, a_dim);
  return QuantumChannel::from_kraus({e}, SystemLayout::single("A", a_dim),
                                    SystemLayout::single("Abar", a_dim + 1));
}

int side_info_dim(const AttackScenario& s) {
  return s.attack.in_dim() / s.scheme.c_dim();
}

int side_out_dim(const AttackScenario& s) {
  return s.attack.out_dim() / s.scheme.c_dim();
}

/// Superoperator of a linear map given its action on matrix units.
Mat superop_from_action(int in_dim, int out_dim,
                        const std::function<Mat(const Mat&)>& act) {
  Mat s(out_dim * out_dim, in_dim * in_dim);
  for (int i = 0; i < in_dim; ++i)
    for (int j = 0; j < in_dim; ++j) {
      Mat unit = Mat::Zero(in_dim, in_dim);
      unit(i, j) = 1.0;
      Mat img = act(unit);
      for (int b = 0; b < out_dim; ++b)
        for (int bt = 0; bt < out_dim; ++bt)
          s(b * out_dim + bt, i * in_dim + j) = img(b, bt);
    }
  return s;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

void AttackScenario::validate() const {
  const auto& l = initial.layout();
  for (const char* label : {"A", "B", "R"})
    if (!l.has(label))
      throw std::invalid_argument(std::string("scenario: initial state lacks register ") +
                                  label);
  if (l.reg(l.index_of("A")).dim != scheme.a_dim())
    throw std::invalid_argument("scenario: plaintext register dim mismatch");
  if (attack.in_dim() % scheme.c_dim() != 0 || attack.out_dim() % scheme.c_dim() != 0)
    throw std::invalid_argument("scenario: attack does not factor over the ciphertext");
  if (attack.in_dim() / scheme.c_dim() != l.reg(l.index_of("B")).dim)
    throw std::invalid_argument("scenario: side-info register dim mismatch");
}

QuantumChannel effective_channel(const AttackScenario& s) {
  int b = side_info_dim(s);
  int bt = side_out_dim(s);
  QuantumChannel id_b = QuantumChannel::identity(SystemLayout::single("B", b));
  QuantumChannel id_bt = QuantumChannel::identity(SystemLayout::single("Bt", bt));
  std::vector<std::pair<double, QuantumChannel>> terms;
  for (int k = 0; k < s.scheme.num_keys(); ++k) {
    QuantumChannel path = compose(tensor(s.scheme.dec(k), id_bt),
                                  compose(s.attack, tensor(s.scheme.enc(k), id_b)));
    terms.push_back({s.scheme.key_weight(k), std::move(path)});
  }
  return linear_combination(terms);
}

double p_equals(const AttackScenario& s) {
  int c = s.scheme.c_dim();
  int b = side_info_dim(s);
  int bt = side_out_dim(s);
  Mat rho_b(1, 1);
  if (b == 1) {
    rho_b = Mat::Identity(1, 1);
  } else {
    DensityOperator marg = partial_trace(s.initial, {"A", "R"});
    rho_b = marg.matrix();
  }
  SystemLayout in({{"C", c}, {"C'", c}, {"B", b}});
  Mat state = kron(phi_plus(c), rho_b);
  auto [out, out_layout] = apply_unnormalized(s.attack, state, in, {"C", "B"});
  // out_layout = [C, Bt, C']; contract with phi+ on (C, C')
  std::vector<int> perm{out_layout.index_of("C"), out_layout.index_of("C'"),
                        out_layout.index_of("Bt")};
  Mat perm_out = permute_raw(out, out_layout, perm);
  Mat proj = kron(phi_plus(c), Mat::Identity(bt, bt));
  return (proj * perm_out).trace().real();
}

EffectiveAttack evaluate_attack(const AttackScenario& s) {
  s.validate();
  EffectiveAttack rep{effective_channel(s)};
  rep.p_eq = p_equals(s);
  DensityOperator out = apply(rep.effective, s.initial, {"A", "B"});
  double mi_before = mutual_information(s.initial, {"A", "R"}, {"B"});
  double mi_after = mutual_information(out, {"Abar", "R"}, {"Bt"});
  double h = binary_entropy(clamp01(rep.p_eq));
  rep.ledger["I(AR:B)"] = mi_before;
  rep.ledger["I(AR:Bt)"] = mi_after;
  rep.ledger["h(p_eq)"] = h;
  rep.nm_gain = mi_after - mi_before - h;
  return rep;
}

double nm_gain(const AttackScenario& s) { return evaluate_attack(s).nm_gain; }

// ---- characterization --------------------------------------------------------

CharacterizationParts characterization_ideal(const AttackScenario& s) {
  int c = s.scheme.c_dim();
  int b = side_info_dim(s);
  int bt = side_out_dim(s);
  SystemLayout in_layout({{"C", c}, {"C'", c}, {"B", b}});
  Mat phi = phi_plus(c);
  Mat pim = pi_minus(c);

  auto reduced = [&](const Mat& proj, const Mat& x_b) {
    Mat state = kron(phi, x_b);
    auto [out, out_layout] = apply_unnormalized(s.attack, state, in_layout, {"C", "B"});
    std::vector<int> perm{out_layout.index_of("C"), out_layout.index_of("C'"),
                          out_layout.index_of("Bt")};
    Mat pout = permute_raw(out, out_layout, perm);
    Mat weighted = kron(proj, Mat::Identity(bt, bt)) * pout;
    SystemLayout l({{"C", c}, {"C'", c}, {"Bt", bt}});
    return partial_trace_raw(weighted, l, {true, true, false});
  };

  Mat s_prime = superop_from_action(
      b, bt, [&](const Mat& u) { return reduced(phi, u); });
  Mat s_second = superop_from_action(
      b, bt, [&](const Mat& u) { return reduced(pim, u); });

  CharacterizationParts parts{
      QuantumChannel::from_superop(std::move(s_prime), SystemLayout::single("B", b),
                                   SystemLayout::single("Bt", bt)),
      QuantumChannel::from_superop(std::move(s_second), SystemLayout::single("B", b),
                                   SystemLayout::single("Bt", bt)),
      QuantumChannel::identity(SystemLayout::single("A", 1))};  // placeholder

  int a = s.scheme.a_dim();
  QuantumChannel id_emb = embed_id_channel(a);
  Mat dk_tau = avg_decrypt(s.scheme).apply_matrix(maximally_mixed(c));
  QuantumChannel replace = QuantumChannel::constant(
      dk_tau, SystemLayout::single("A", a), SystemLayout::single("Abar", a + 1));

  double c2 = double(c) * c;
  QuantumChannel t1 = tensor(id_emb, parts.prime);
  QuantumChannel t2 = tensor(replace, parts.second);
  QuantumChannel t3 = tensor(id_emb, parts.second);
  parts.ideal = linear_combination(
      {{1.0, t1}, {c2 / (c2 - 1.0), t2}, {-1.0 / (c2 - 1.0), t3}});
  return parts;
}

ResidualBounds characterization_residual(const AttackScenario& s) {
  QuantumChannel eff = effective_channel(s);
  CharacterizationParts parts = characterization_ideal(s);
  DiamondBounds db = diamond_distance_bounds(eff, parts.ideal);
  return {db.lower, db.upper};
}

double characterization_forward_tolerance(double eps, int a_dim, int c_dim) {
  double a = a_dim;
  return 2.0 * std::sqrt(2.0 * eps) * a * a * a * a * double(c_dim) *
         (4.0 * std::sqrt(a) + 1.0);
}

double characterization_converse_tolerance(double eps, int a_dim, double r_bits) {
  return 5.0 * eps * (std::log2(double(a_dim)) + r_bits) +
         3.0 * binary_entropy(std::min(eps, 1.0));
}

// ---- ABW projection ----------------------------------------------------------

AbwResidual abw_residual(const AttackScenario& s) {
  if (side_info_dim(s) != 1 || side_out_dim(s) != 1)
    throw std::invalid_argument("abw_residual: adversary must carry no side information");
  QuantumChannel eff = effective_channel(s);
  int a = s.scheme.a_dim();
  int c = s.scheme.c_dim();
  const Mat& target = eff.choi();

  // basis of the family in Choi space: the embedded identity plus replacement
  // channels <D_K(H)> over a Hermitian operator basis of the ciphertext space
  std::vector<Mat> basis;
  basis.push_back(embed_id_channel(a).choi());
  QuantumChannel dk = avg_decrypt(s.scheme);
  Mat tau_a = maximally_mixed(a);
  auto push_replacement = [&](const Mat& h) {
    basis.push_back(kron(dk.apply_matrix(h), tau_a));
  };
  for (int i = 0; i < c; ++i)
    for (int j = i; j < c; ++j) {
      Mat h = Mat::Zero(c, c);
      if (i == j) {
        h(i, i) = 1.0;
        push_replacement(h);
      } else {
        h(i, j) = h(j, i) = 1.0;
        push_replacement(h);
        Mat g = Mat::Zero(c, c);
        g(i, j) = cxd(0, 1);
        g(j, i) = cxd(0, -1);
        push_replacement(g);
      }
    }

  int n = static_cast<int>(basis.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs(i) = hs_inner(basis[i], target);
    for (int j = 0; j < n; ++j) gram(i, j) = hs_inner(basis[i], basis[j]);
  }
  Eigen::VectorXd x = gram.completeOrthogonalDecomposition().solve(rhs);
  Mat proj = Mat::Zero(target.rows(), target.cols());
  for (int i = 0; i < n; ++i) proj += x(i) * basis[i];

  // clip the projection back into the CP cone
  Mat herm = (proj + proj.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  Mat clipped = Mat::Zero(proj.rows(), proj.cols());
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam <= 0.0) continue;
    clipped += lam * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }

  AbwResidual out;
  out.clip_amount = trace_norm(clipped - proj);
  out.choi_residual = trace_norm(target - clipped);
  out.diamond_upper = double(a) * out.choi_residual;
  return out;
}

// ---- secrecy -----------------------------------------------------------------

double its_check(const EncryptionScheme& scheme, const DensityOperator& rho_ab) {
  DensityOperator sigma = apply(avg_encrypt(scheme), rho_ab, {"A"});
  return mutual_information(sigma, {"C"}, {"B"});
}

double ind_distance(const EncryptionScheme& scheme, const DensityOperator& rho,
                    const DensityOperator& rho_prime) {
  QuantumChannel ek = avg_encrypt(scheme);
  auto [m1, l1] = apply_unnormalized(ek, rho.matrix(), rho.layout(), {"A"});
  auto [m2, l2] = apply_unnormalized(ek, rho_prime.matrix(), rho_prime.layout(), {"A"});
  return trace_norm(m1 - m2);
}

AttackScenario secrecy_attack_from_nm(const EncryptionScheme& scheme,
                                      const DensityOperator& rho_ar) {
  int c = scheme.c_dim();
  double d2 = double(c) * c;
  // eta_theta = tau_C (x) phi+ on (Bt, C'); register order (C, Bt, C')
  Mat eta_theta = kron(maximally_mixed(c), phi_plus(c));
  SystemLayout l({{"C", c}, {"Bt", c}, {"C'", c}});
  Mat pim_cc = kron(pi_minus(c), Mat::Identity(c, c));  // on (C, C', Bt)
  SystemLayout l_ccb({{"C", c}, {"C'", c}, {"Bt", c}});
  Mat pim = permute_raw(pim_cc, l_ccb, {0, 2, 1});  // reorder to (C, Bt, C')
  Mat eta = (d2 / (d2 - 1.0)) * (pim * eta_theta * pim);

  // our CJ convention indexes (out, in); here out = (C, Bt), in = C'
  QuantumChannel attack = QuantumChannel::from_choi(
      eta, SystemLayout({{"C", c}, {"B", 1}}), SystemLayout({{"C", c}, {"Bt", c}}));

  DensityOperator initial = tensor_compose(
      {rho_ar, DensityOperator(Mat::Identity(1, 1), SystemLayout::single("B", 1))});
  return AttackScenario{scheme, std::move(initial), std::move(attack)};
}

// ---- attack library ----------------------------------------------------------

namespace {

Mat shift_operator(int d) {
  Mat x = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

Mat clock_operator(int d) {
  Mat z = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = std::polar(1.0, 2.0 * M_PI * j / d);
  return z;
}

SystemLayout cb_layout(int c, int b) { return SystemLayout({{"C", c}, {"B", b}}); }
SystemLayout cbt_layout(int c, int bt) { return SystemLayout({{"C", c}, {"Bt", bt}}); }

}  // namespace

QuantumChannel identity_attack(const EncryptionScheme& scheme) {
  int c = scheme.c_dim();
  return QuantumChannel::from_kraus({Mat::Identity(c, c)}, cb_layout(c, 1),
                                    cbt_layout(c, 1));
}

QuantumChannel pauli_attack(const EncryptionScheme& scheme, const Mat& p) {
  int c = scheme.c_dim();
  if (p.rows() != c) throw std::invalid_argument("pauli_attack: dim mismatch");
  return QuantumChannel::from_kraus({p}, cb_layout(c, 1), cbt_layout(c, 1));
}

QuantumChannel replace_attack(const EncryptionScheme& scheme, const Mat& sigma) {
  int c = scheme.c_dim();
  QuantumChannel base =
      QuantumChannel::constant(sigma, SystemLayout::single("C", c),
                               SystemLayout::single("C", c));
  return QuantumChannel::from_choi(base.choi(), cb_layout(c, 1), cbt_layout(c, 1));
}

QuantumChannel coin_mixture_attack(const EncryptionScheme& scheme) {
  int c = scheme.c_dim();
  Mat u = shift_operator(c);
  std::vector<Mat> kraus;
  Vec heads = Vec::Zero(2), tails = Vec::Zero(2);
  heads(0) = 1.0;
  tails(1) = 1.0;
  // heads: conjugate by the shift; tails: replace with tau. Coin lands in Bt.
  Mat kh(2 * c, c);
  for (int col = 0; col < c; ++col)
    for (int row = 0; row < c; ++row)
      for (int coin = 0; coin < 2; ++coin)
        kh(row * 2 + coin, col) = u(row, col) * heads(coin) / std::sqrt(2.0);
  kraus.push_back(kh);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) {
      Mat k = Mat::Zero(2 * c, c);
      k(i * 2 + 1, j) = 1.0 / std::sqrt(2.0 * c);
      kraus.push_back(k);
    }
  return QuantumChannel::from_kraus(std::move(kraus), cb_layout(c, 1), cbt_layout(c, 2));
}

QuantumChannel cnot_copy_attack(const EncryptionScheme& scheme) {
  int c = scheme.c_dim();
  Mat u = Mat::Zero(c * c, c * c);  // |x, y> -> |x, y + x mod c>
  for (int x = 0; x < c; ++x)
    for (int y = 0; y < c; ++y) u(x * c + (y + x) % c, x * c + y) = 1.0;
  return QuantumChannel::from_kraus({u}, cb_layout(c, c), cbt_layout(c, c));
}

QuantumChannel injection_attack(const EncryptionScheme& scheme) {
  if (scheme.c_blocks().size() != 2)
    throw std::invalid_argument("injection_attack: scheme has no pass-through block");
  int c = scheme.c_blocks()[0];
  int a = scheme.c_blocks()[1];
  int cp = scheme.c_dim();
  // constant output: zero on the honest block, phi+ across (Ahat, Bt)
  Mat sigma = Mat::Zero(cp * a, cp * a);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j)
      sigma((c + i) * a + i, (c + j) * a + j) = 1.0 / double(a);
  QuantumChannel base = QuantumChannel::constant(
      sigma, SystemLayout::single("C", cp),
      SystemLayout({{"C", cp}, {"Bt", a}}));
  return QuantumChannel::from_choi(base.choi(), cb_layout(cp, 1),
                                   SystemLayout({{"C", cp}, {"Bt", a}}));
}

std::vector<NamedAttack> attack_library(uint64_t seed) {
  std::vector<NamedAttack> lib;
  lib.push_back({"identity", [](const EncryptionScheme& s) { return identity_attack(s); }});
  lib.push_back({"shift", [](const EncryptionScheme& s) {
                   return pauli_attack(s, shift_operator(s.c_dim()));
                 }});
  lib.push_back({"clock", [](const EncryptionScheme& s) {
                   return pauli_attack(s, clock_operator(s.c_dim()));
                 }});
  lib.push_back({"shift-clock", [](const EncryptionScheme& s) {
                   return pauli_attack(
                       s, shift_operator(s.c_dim()) * clock_operator(s.c_dim()));
                 }});
  lib.push_back({"replace-tau", [](const EncryptionScheme& s) {
                   return replace_attack(s, maximally_mixed(s.c_dim()));
                 }});
  lib.push_back({"replace-random", [seed](const EncryptionScheme& s) {
                   std::mt19937_64 rng(seed ^ 0xA11CEull);
                   return replace_attack(s, random_density_matrix(s.c_dim(), rng));
                 }});
  lib.push_back({"coin-mixture",
                 [](const EncryptionScheme& s) { return coin_mixture_attack(s); }});
  lib.push_back({"cnot-copy",
                 [](const EncryptionScheme& s) { return cnot_copy_attack(s); }});
  lib.push_back({"random-unitary", [seed](const EncryptionScheme& s) {
                   std::mt19937_64 rng(seed ^ 0xB0B1ull);
                   int c = s.c_dim();
                   return QuantumChannel::from_kraus({random_unitary(c, rng)},
                                                     cb_layout(c, 1), cbt_layout(c, 1));
                 }});
  lib.push_back({"random-isometry", [seed](const EncryptionScheme& s) {
                   std::mt19937_64 rng(seed ^ 0x150ull);
                   int c = s.c_dim();
                   Mat g = random_matrix(2 * c, c, rng);
                   Eigen::HouseholderQR<Mat> qr(g);
                   Mat q = Mat(qr.householderQ()).leftCols(c);
                   // reorder rows from (Bt, C) to (C, Bt)
                   Mat v(2 * c, c);
                   for (int bt = 0; bt < 2; ++bt)
                     for (int cc = 0; cc < c; ++cc)
                       v.row(cc * 2 + bt) = q.row(bt * c + cc);
                   return QuantumChannel::from_kraus({v}, cb_layout(c, 1),
                                                     cbt_layout(c, 2));
                 }});
  lib.push_back({"random-channel", [seed](const EncryptionScheme& s) {
                   std::mt19937_64 rng(seed ^ 0xC4A11ull);
                   int c = s.c_dim();
                   Mat g = random_matrix(2 * c, c, rng);
                   Eigen::HouseholderQR<Mat> qr(g);
                   Mat q = Mat(qr.householderQ()).leftCols(c);
                   std::vector<Mat> ks{q.topRows(c), q.bottomRows(c)};
                   return QuantumChannel::from_kraus(std::move(ks), cb_layout(c, 1),
                                                     cbt_layout(c, 1));
                 }});
  return lib;
}

DensityOperator random_abr_state(const EncryptionScheme& scheme, uint64_t seed) {
  std::mt19937_64 rng(seed);
  int a = scheme.a_dim();
  Vec psi = random_pure_state(a * a, rng);  // purify against an R copy of A
  Mat rho = psi * psi.adjoint();
  return DensityOperator(rho, SystemLayout({{"A", a}, {"R", a}}));
}

std::vector<AttackScenario> scenario_battery(const EncryptionScheme& scheme,
                                             int states_per_attack, uint64_t seed) {
  std::vector<AttackScenario> out;
  for (const auto& named : attack_library(seed)) {
    QuantumChannel attack = named.build(scheme);
    int b = attack.in_dim() / scheme.c_dim();
    for (int i = 0; i < states_per_attack; ++i) {
      uint64_t s = seed + 0x9E37ull * (i + 1);
      DensityOperator ar = random_abr_state(scheme, s);
      DensityOperator bstate = [&] {
        if (b == 1)
          return DensityOperator(Mat::Identity(1, 1), SystemLayout::single("B", 1));
        Mat m = Mat::Zero(b, b);
        m(0, 0) = 1.0;  // |0> side info; the copy attacks expect a blank page
        return DensityOperator(m, SystemLayout::single("B", b));
      }();
      DensityOperator init = permute_registers(
          tensor_compose({ar, bstate}), {"A", "B", "R"});
      out.push_back(AttackScenario{scheme, std::move(init), attack});
    }
  }
  return out;
}

}  // namespace qnm
