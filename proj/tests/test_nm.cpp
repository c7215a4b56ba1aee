#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnm/nm.hpp"

using namespace qnm;

namespace {

DensityOperator phi_abr(int a) {
  DensityOperator ar(phi_plus(a), SystemLayout({{"A", a}, {"R", a}}));
  DensityOperator b(Mat::Identity(1, 1), SystemLayout::single("B", 1));
  return tensor_compose({ar, b});
}

double oracle_mi_gain() {
  // spectrum {5/8, 1/8, 1/8, 1/8} of the joint state, minus one coin bit
  return -(5.0 / 8.0) * std::log2(5.0 / 8.0) -
         3.0 * (1.0 / 8.0) * std::log2(1.0 / 8.0) - 1.0;
}

}  // namespace

TEST_CASE("identity attack on a keyed scheme is allowance-free") {
  EncryptionScheme cs = clifford_scheme(1);
  AttackScenario sc{cs, phi_abr(2), identity_attack(cs)};
  EffectiveAttack rep = evaluate_attack(sc);
  CHECK(rep.p_eq == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(rep.nm_gain) < 1e-9);
  CHECK(rep.ledger.at("I(AR:Bt)") < 1e-9);
}

TEST_CASE("replacement attack overlap is one over the squared ciphertext dim") {
  EncryptionScheme cs = clifford_scheme(1);
  AttackScenario sc{cs, phi_abr(2), replace_attack(cs, maximally_mixed(2))};
  CHECK(p_equals(sc) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(nm_gain(sc) < 1e-9);
}

TEST_CASE("full clifford keys hold every library attack to zero gain") {
  EncryptionScheme cs = clifford_scheme(1);
  for (AttackScenario& sc : scenario_battery(cs, 2, 0xFEEDull)) {
    CHECK(nm_gain(sc) < 1e-9);
  }
}

TEST_CASE("coin-mixture attack on the one-time pad is malleable") {
  EncryptionScheme qotp = qotp_scheme(1);
  AttackScenario sc{qotp, phi_abr(2), coin_mixture_attack(qotp)};
  EffectiveAttack rep = evaluate_attack(sc);
  // heads is a flip (overlap 0), tails a replacement (overlap 1/4)
  CHECK(rep.p_eq == doctest::Approx(0.125).epsilon(1e-10));
  double mi_gain = rep.ledger.at("I(AR:Bt)") - rep.ledger.at("I(AR:B)");
  CHECK(mi_gain == doctest::Approx(oracle_mi_gain()).epsilon(1e-9));
  CHECK(rep.nm_gain > 0.0);  // exceeds the allowance: malleability witnessed
}

TEST_CASE("ciphertext copying gains exactly its allowance") {
  EncryptionScheme qotp = qotp_scheme(1);
  QuantumChannel copy = cnot_copy_attack(qotp);
  DensityOperator ar(phi_plus(2), SystemLayout({{"A", 2}, {"R", 2}}));
  Mat b0 = Mat::Zero(2, 2);
  b0(0, 0) = 1.0;
  DensityOperator b(b0, SystemLayout::single("B", 2));
  AttackScenario sc{qotp, tensor_compose({ar, b}), copy};
  EffectiveAttack rep = evaluate_attack(sc);
  CHECK(rep.p_eq == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.ledger.at("I(AR:Bt)") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(rep.nm_gain) < 1e-9);
}

TEST_CASE("exact characterization of twirled attacks") {
  EncryptionScheme cs = clifford_scheme(1);
  std::mt19937_64 rng(1);
  for (const auto& named : attack_library(0xABCDull)) {
    if (named.name == "cnot-copy" || named.name == "random-isometry") continue;
    QuantumChannel attack = named.build(cs);
    if (attack.in_dim() != cs.c_dim()) continue;  // keep the side-info-free ones
    AttackScenario sc{cs, phi_abr(2), attack};
    ResidualBounds rb = characterization_residual(sc);
    CHECK(rb.upper < 1e-9);
  }
}

TEST_CASE("characterization parts sum to a trace preserving map") {
  EncryptionScheme cs = clifford_scheme(1);
  QuantumChannel attack = coin_mixture_attack(cs);
  DensityOperator ar(phi_plus(2), SystemLayout({{"A", 2}, {"R", 2}}));
  DensityOperator b(Mat::Identity(1, 1), SystemLayout::single("B", 1));
  AttackScenario sc{cs, tensor_compose({ar, b}), attack};
  CharacterizationParts parts = characterization_ideal(sc);
  QuantumChannel sum = linear_combination({{1.0, parts.prime}, {1.0, parts.second}});
  CHECK(sum.tp_defect() < 1e-10);
  CHECK(parts.prime.is_cp(1e-9));
  CHECK(parts.second.is_cp(1e-9));
}

TEST_CASE("tolerance polynomials are monotone and vanish at zero") {
  CHECK(characterization_forward_tolerance(0.0, 2, 2) == 0.0);
  CHECK(characterization_converse_tolerance(0.0, 2, 1.0) == 0.0);
  CHECK(characterization_forward_tolerance(1e-4, 2, 2) <
        characterization_forward_tolerance(1e-2, 2, 2));
  CHECK(characterization_converse_tolerance(1e-4, 2, 1.0) <
        characterization_converse_tolerance(1e-2, 2, 1.0));
}

TEST_CASE("pad flip attack sits far from the identity-replacement family") {
  EncryptionScheme qotp = qotp_scheme(1);
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  AttackScenario sc{qotp, phi_abr(2), pauli_attack(qotp, x)};
  AbwResidual res = abw_residual(sc);
  CHECK(res.choi_residual == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(res.diamond_upper == doctest::Approx(8.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("twirled flip attack lies inside the family") {
  EncryptionScheme cs = clifford_scheme(1);
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  AttackScenario sc{cs, phi_abr(2), pauli_attack(cs, x)};
  CHECK(abw_residual(sc).choi_residual < 1e-9);
}

TEST_CASE("ciphertext extraction has zero identity overlap") {
  EncryptionScheme cs = clifford_scheme(1);
  DensityOperator ar(phi_plus(2), SystemLayout({{"A", 2}, {"R", 2}}));
  AttackScenario sc = secrecy_attack_from_nm(cs, ar);
  sc.validate();
  CHECK(std::abs(p_equals(sc)) < 1e-12);
  CHECK(sc.attack.is_cp());
  CHECK(sc.attack.tp_defect() < 1e-10);
}

TEST_CASE("injection attack on the block-extended scheme") {
  EncryptionScheme inj = injection_scheme(clifford_scheme(1));
  AttackScenario sc{inj, phi_abr(2), injection_attack(inj)};
  EffectiveAttack rep = evaluate_attack(sc);
  double cp2 = 16.0;  // squared extended ciphertext dimension
  CHECK(rep.p_eq == doctest::Approx(1.0 / cp2).epsilon(1e-9));
  CHECK(rep.nm_gain ==
        doctest::Approx(2.0 - binary_entropy(1.0 / cp2)).epsilon(1e-6));
}

TEST_CASE("secrecy checks reuse the attack machinery") {
  EncryptionScheme cs = clifford_scheme(1);
  DensityOperator phi_ab(phi_plus(2), SystemLayout({{"A", 2}, {"B", 2}}));
  CHECK(its_check(cs, phi_ab) < 1e-10);
  std::mt19937_64 rng(5);
  Mat r1 = random_density_matrix(2, rng), r2 = random_density_matrix(2, rng);
  DensityOperator s1(r1, SystemLayout({{"A", 2}, {"B", 1}}));
  DensityOperator s2(r2, SystemLayout({{"A", 2}, {"B", 1}}));
  CHECK(ind_distance(cs, s1, s2) < 1e-10);
}

TEST_CASE("attack library and battery are deterministic") {
  auto b1 = scenario_battery(clifford_scheme(1), 1, 42);
  auto b2 = scenario_battery(clifford_scheme(1), 1, 42);
  REQUIRE(b1.size() == b2.size());
  for (size_t i = 0; i < b1.size(); ++i) {
    CHECK((b1[i].initial.matrix() - b2[i].initial.matrix()).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((b1[i].attack.superop() - b2[i].attack.superop()).cwiseAbs().maxCoeff() ==
          0.0);
  }
}
