#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnm/design.hpp"

using namespace qnm;

TEST_CASE("pauli group sizes and unitarity") {
  UnitaryEnsemble p1 = pauli_group(1);
  CHECK(p1.elements.size() == 4);
  p1.validate();
  UnitaryEnsemble p2 = pauli_group(2);
  CHECK(p2.elements.size() == 16);
  p2.validate();
}

TEST_CASE("single qubit clifford group has 24 elements") {
  UnitaryEnsemble c1 = clifford_group(1);
  CHECK(c1.elements.size() == 24);
  c1.validate();
}

TEST_CASE("paulis are a 1-design but not a 2-design") {
  UnitaryEnsemble p1 = pauli_group(1);
  std::mt19937_64 rng(19);
  for (int i = 0; i < 10; ++i) {
    Mat x = random_matrix(2, 2, rng);
    Mat tw = t_twirl(p1, x, 1);
    CHECK((tw - x.trace() * maximally_mixed(2)).cwiseAbs().maxCoeff() < 1e-12);
  }
  DeficiencyReport two = design_deficiency(p1, DesignNotion::TTwirl2);
  CHECK(two.lower > 0.1);
}

TEST_CASE("clifford 2-twirl matches the closed form") {
  UnitaryEnsemble c1 = clifford_group(1);
  TwoTwirler tw(c1);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 25; ++i) {
    Mat m = random_matrix(4, 4, rng);
    CHECK((tw(m) - haar_2twirl(m)).cwiseAbs().maxCoeff() < 1e-10);
  }
  // and through the CJ state of the induced twirl channel
  CHECK((twirl_channel_choi(c1, 2) - haar_2twirl_choi(2)).cwiseAbs().maxCoeff() <
        1e-11);
}

TEST_CASE("closed-form 2-twirl is a projector commuting with the symmetry") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 10; ++i) {
    Mat m = random_matrix(9, 9, rng);
    Mat once = haar_2twirl(m);
    CHECK((haar_2twirl(once) - once).cwiseAbs().maxCoeff() < 1e-10);
    Mat u = random_unitary(3, rng);
    Mat uu = kron(u, u);
    CHECK((uu * once * uu.adjoint() - once).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("uubar twirl of cliffords matches the haar form") {
  UnitaryEnsemble c1 = clifford_group(1);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 15; ++i) {
    Mat x = random_matrix(4, 4, rng);
    CHECK((uubar_twirl(c1, x) - uubar_twirl_haar(x)).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK((uubar_twirl_channel_choi(c1) - uubar_twirl_haar_choi(2)).cwiseAbs().maxCoeff() <
        1e-11);
}

TEST_CASE("haar uubar twirl fixes phi+ and flattens its complement") {
  int d = 3;
  Mat twirled_phi = uubar_twirl_haar(phi_plus(d));
  CHECK((twirled_phi - phi_plus(d)).cwiseAbs().maxCoeff() < 1e-12);
  std::mt19937_64 rng(37);
  Mat rho = random_density_matrix(d * d, rng);
  Mat tw = uubar_twirl_haar(rho);
  double p = (phi_plus(d) * rho).trace().real();
  Mat expect = p * phi_plus(d) + (1.0 - p) * tau_minus(d);
  CHECK((tw - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("clifford deficiencies vanish while sampled ones shrink") {
  UnitaryEnsemble c1 = clifford_group(1);
  CHECK(design_deficiency(c1, DesignNotion::TTwirl1).upper < 1e-9);
  CHECK(design_deficiency(c1, DesignNotion::UUbar).upper < 1e-9);

  DeficiencyReport small = design_deficiency(random_clifford(1, 20, 5), DesignNotion::UUbar);
  DeficiencyReport big = design_deficiency(random_clifford(1, 300, 5), DesignNotion::UUbar);
  CHECK(big.lower <= small.lower + 1e-9);
}

TEST_CASE("sampled cliffords normalize pauli conjugation") {
  UnitaryEnsemble rc = random_clifford(1, 40, 99);
  rc.validate();
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  // every sampled element maps paulis to paulis up to sign structure:
  // conjugation preserves trace and hermiticity and squares to identity
  for (const auto& el : rc.elements) {
    for (const Mat* p : {&x, &z}) {
      Mat q = el.unitary * (*p) * el.unitary.adjoint();
      CHECK(std::abs(q.trace()) < 1e-9);
      CHECK((q * q - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((q - q.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("random circuit ensemble is deterministic per seed") {
  UnitaryEnsemble a = random_circuit_ensemble(2, 12, 5, 1234);
  UnitaryEnsemble b = random_circuit_ensemble(2, 12, 5, 1234);
  a.validate();
  REQUIRE(a.elements.size() == b.elements.size());
  for (size_t i = 0; i < a.elements.size(); ++i)
    CHECK((a.elements[i].unitary - b.elements[i].unitary).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("channel twirl of a unitary ensemble averages conjugations") {
  UnitaryEnsemble p1 = pauli_group(1);
  std::mt19937_64 rng(43);
  Mat rho = random_density_matrix(2, rng);
  QuantumChannel id2 = QuantumChannel::identity(SystemLayout::single("A", 2));
  QuantumChannel tw = channel_twirl(p1, id2);
  // twirling the identity leaves it fixed
  CHECK((tw.apply_matrix(rho) - rho).cwiseAbs().maxCoeff() < 1e-12);

  // twirling a fixed unitary conjugation averages it over the ensemble
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  QuantumChannel zc = QuantumChannel::unitary(z, SystemLayout::single("A", 2));
  Mat avg = Mat::Zero(2, 2);
  for (const auto& el : p1.elements)
    avg += el.weight * el.unitary.adjoint() * z * el.unitary * rho *
           (el.unitary.adjoint() * z * el.unitary).adjoint();
  CHECK((channel_twirl(p1, zc).apply_matrix(rho) - avg).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("phase canonicalization is idempotent and phase invariant") {
  std::mt19937_64 rng(47);
  Mat u = random_unitary(3, rng);
  Mat c1 = phase_canonical(u);
  Mat c2 = phase_canonical(std::polar(1.0, 1.234) * u);
  CHECK((c1 - c2).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((phase_canonical(c1) - c1).cwiseAbs().maxCoeff() < 1e-12);
}
