#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnm/auth.hpp"

using namespace qnm;

namespace {

EncryptionScheme tagged_two_qubit() {
  static EncryptionScheme s = tagged_scheme(clifford_scheme(2), 1);
  return s;
}

Mat pauli(int which) {  // 1=X, 2=Y, 3=Z
  Mat m = Mat::Zero(2, 2);
  switch (which) {
    case 1: m(0, 1) = m(1, 0) = 1.0; break;
    case 2: m(0, 1) = cxd(0, -1); m(1, 0) = cxd(0, 1); break;
    default: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

}  // namespace

TEST_CASE("keywise deviation of a fixed pauli attack") {
  EncryptionScheme scheme = tagged_two_qubit();
  std::mt19937_64 rng(3);
  Vec psi = random_pure_state(2, rng);
  Mat v = kron(pauli(1), Mat::Identity(2, 2));
  KeywiseReport rep = gyz_keywise(scheme, v, psi, 0.0);
  CHECK(rep.per_key.size() == 11520);
  // frozen: mean-square deviation is exactly 7/15 for every non-identity pauli
  CHECK(rep.mean_sq_deviation == doctest::Approx(7.0 / 15.0).epsilon(1e-10));
  CHECK(rep.mean_sq_deviation <= rep.ms_bound);
  CHECK(rep.ms_bound == doctest::Approx(0.5).epsilon(1e-12));
  // Markov: the weighted fraction of keys exceeding alpha times the bound
  for (double alpha : {1.5, 2.0, 4.0, 10.0}) {
    CHECK(rep.bad_fraction(alpha) <= 1.0 / alpha + 1e-12);
  }
}

TEST_CASE("identity attack has zero keywise deviation and zero residual") {
  EncryptionScheme scheme = tagged_two_qubit();
  std::mt19937_64 rng(5);
  Vec psi = random_pure_state(2, rng);
  Mat id4 = Mat::Identity(4, 4);
  KeywiseReport rep = gyz_keywise(scheme, id4, psi, 0.0);
  CHECK(rep.mean_sq_deviation < 1e-12);

  DensityOperator rho_ab(psi * psi.adjoint(), SystemLayout({{"A", 2}, {"B", 1}}));
  CHECK(gyz_residual(scheme, identity_attack(scheme), rho_ab) < 1e-9);
}

TEST_CASE("pauli attack accept statistics") {
  EncryptionScheme scheme = tagged_two_qubit();
  std::mt19937_64 rng(7);
  Vec psi = random_pure_state(2, rng);
  Mat v = kron(Mat::Identity(2, 2), pauli(3));
  auto [accept, fidelity] = pauli_attack_accept_stats(scheme, v, psi);
  CHECK(accept > 0.0);
  CHECK(accept < 1.0);
  CHECK(fidelity >= 0.0);
  CHECK(fidelity <= 1.0 + 1e-10);
  CHECK_THROWS(pauli_attack_accept_stats(scheme, Mat::Identity(4, 4), psi));
}

TEST_CASE("accept and reject simulators reproduce the identity attack") {
  EncryptionScheme scheme = tagged_two_qubit();
  QuantumChannel id_attack = identity_attack(scheme);
  std::mt19937_64 rng(11);
  std::vector<DensityOperator> battery;
  battery.emplace_back(maximally_mixed(2), SystemLayout({{"A", 2}, {"B", 1}}));
  battery.emplace_back(random_density_matrix(2, rng), SystemLayout({{"A", 2}, {"B", 1}}));
  DnsReport rep = dns_residual(scheme, id_attack, battery);
  CHECK(rep.residual < 1e-9);
  CHECK(rep.gamma_hat == doctest::Approx(0.5).epsilon(1e-10));  // one tag qubit
  CHECK(rep.correction < 1e-9);
}

TEST_CASE("reject-heavy attack still admits simulators within the tag bound") {
  EncryptionScheme scheme = tagged_two_qubit();
  QuantumChannel replace = replace_attack(scheme, maximally_mixed(4));
  std::mt19937_64 rng(13);
  std::vector<DensityOperator> battery;
  battery.emplace_back(random_density_matrix(2, rng), SystemLayout({{"A", 2}, {"B", 1}}));
  DnsReport rep = dns_residual(scheme, replace, battery);
  CHECK(rep.residual <= 4.0 / 2.0 + 1e-9);  // |T| = 2 here
}

TEST_CASE("small keywise residual implies small simulator residual") {
  EncryptionScheme scheme = tagged_two_qubit();
  int c = scheme.c_dim();
  std::mt19937_64 rng(17);
  std::vector<std::pair<std::string, QuantumChannel>> attacks;
  double eps = 2e-5;
  for (int i = 0; i < 3; ++i) {
    Mat h = random_hermitian(c, rng);
    h /= operator_norm(h);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Mat u = Mat::Zero(c, c);
    for (int j = 0; j < c; ++j)
      u += std::polar(1.0, -eps * es.eigenvalues()(j)) * es.eigenvectors().col(j) *
           es.eigenvectors().col(j).adjoint();
    attacks.push_back({"probe-" + std::to_string(i),
                       QuantumChannel::from_kraus({u}, SystemLayout({{"C", c}, {"B", 1}}),
                                                  SystemLayout({{"C", c}, {"Bt", 1}}))});
  }
  Vec psi = random_pure_state(2, rng);
  DensityOperator rho_ab(psi * psi.adjoint(), SystemLayout({{"A", 2}, {"B", 1}}));
  for (const auto& e : gyz_implies_dns_check(scheme, attacks, rho_ab)) {
    CHECK(e.in_regime);
    CHECK(e.pass);
    CHECK(e.eps_dns <= e.bound + 1e-6);
  }
}
