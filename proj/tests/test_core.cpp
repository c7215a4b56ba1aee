#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnm/state.hpp"

using namespace qnm;

namespace {

DensityOperator mixed(int d, const std::string& label) {
  return DensityOperator(maximally_mixed(d), SystemLayout::single(label, d));
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TEST_CASE("layout basics") {
  SystemLayout l({{"A", 2}, {"B", 3}, {"C", 4}});
  CHECK(l.dim() == 24);
  CHECK(l.stride(0) == 12);
  CHECK(l.stride(2) == 1);
  CHECK(l.index_of("B") == 1);
  CHECK_THROWS_AS(l.index_of("Z"), std::out_of_range);
  CHECK_THROWS_AS(l.concat(SystemLayout::single("A", 2)), std::invalid_argument);
  CHECK(l.without({"B"}) == SystemLayout({{"A", 2}, {"C", 4}}));
}

TEST_CASE("density operator validation") {
  CHECK_THROWS(DensityOperator(Mat::Identity(2, 2), SystemLayout::single("A", 2)));
  Mat bad = maximally_mixed(2);
  bad(0, 1) = 0.5;  // breaks Hermiticity
  CHECK_THROWS(DensityOperator(bad, SystemLayout::single("A", 2)));
  Mat neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS(DensityOperator(neg, SystemLayout::single("A", 2)));
}

TEST_CASE("tensor compose and partial trace roundtrip") {
  std::mt19937_64 rng(11);
  DensityOperator a(random_density_matrix(2, rng), SystemLayout::single("A", 2));
  DensityOperator b(random_density_matrix(3, rng), SystemLayout::single("B", 3));
  DensityOperator ab = tensor_compose({a, b});
  CHECK(std::abs(ab.matrix().trace().real() - 1.0) < 1e-12);
  DensityOperator back = partial_trace(ab, {"B"});
  CHECK((back.matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  DensityOperator backb = partial_trace(ab, {"A"});
  CHECK((backb.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-12);

  // trace of a triple after a double discard
  DensityOperator c(random_density_matrix(2, rng), SystemLayout::single("C", 2));
  DensityOperator abc = tensor_compose({a, b, c});
  DensityOperator ra = partial_trace(abc, {"B", "C"});
  CHECK(std::abs(ra.matrix().trace().real() - 1.0) < 1e-12);
  CHECK((ra.matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("maximally entangled state and friends") {
  DensityOperator phi = max_entangled(2, "A");
  CHECK(phi.layout() == SystemLayout({{"A", 2}, {"A'", 2}}));
  CHECK(std::abs(phi.matrix()(0, 0).real() - 0.5) < 1e-14);
  CHECK(std::abs(phi.matrix()(0, 3).real() - 0.5) < 1e-14);
  DensityOperator marg = partial_trace(phi, {"A'"});
  CHECK((marg.matrix() - maximally_mixed(2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs((tau_minus(2) * phi_plus(2)).trace()) < 1e-14);
  CHECK(std::abs(pi_minus(3).trace().real() - 8.0) < 1e-12);
}

TEST_CASE("register permutation") {
  std::mt19937_64 rng(5);
  DensityOperator a(random_density_matrix(2, rng), SystemLayout::single("A", 2));
  DensityOperator b(random_density_matrix(3, rng), SystemLayout::single("B", 3));
  DensityOperator ab = tensor_compose({a, b});
  DensityOperator ba = permute_registers(ab, {"B", "A"});
  CHECK(ba.layout() == SystemLayout({{"B", 3}, {"A", 2}}));
  DensityOperator ab2 = permute_registers(ba, {"A", "B"});
  CHECK((ab2.matrix() - ab.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  Mat expect = Mat::Zero(6, 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 3; ++l)
          expect(j * 2 + i, l * 2 + k) = ab.matrix()(i * 3 + j, k * 3 + l);
  CHECK((ba.matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("swap trick") {
  auto [l1, r1] = swap_trick_check(Mat::Identity(2, 2), Mat::Identity(2, 2));
  CHECK(std::abs(l1 - 2.0) < 1e-14);
  CHECK(std::abs(r1 - 2.0) < 1e-14);
  auto [l2, r2] = swap_trick_check(pauli_x(), pauli_z());
  CHECK(std::abs(l2) < 1e-14);
  CHECK(std::abs(r2) < 1e-14);

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dd(2, 6);
  for (int trial = 0; trial < 500; ++trial) {
    int d = dd(rng);
    Mat a = random_matrix(d, d, rng);
    Mat b = random_matrix(d, d, rng);
    auto [lhs, rhs] = swap_trick_check(a, b);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("norms") {
  Mat diff = phi_plus(2) - kron(maximally_mixed(2), maximally_mixed(2));
  CHECK(std::abs(trace_norm(diff) - 1.5) < 1e-12);
  std::mt19937_64 rng(3);
  Mat u = random_unitary(5, rng);
  CHECK(std::abs(operator_norm(u) - 1.0) < 1e-12);
  CHECK(std::abs(trace_norm(random_density_matrix(4, rng)) - 1.0) < 1e-12);
  // unitarity of the QR-based sampler
  CHECK((u * u.adjoint() - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Holder slack nonnegative") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    Mat x = random_matrix(4, 4, rng);
    Mat y = random_matrix(4, 4, rng);
    CHECK(holder_gap(x, y) > -1e-10);
  }
}

TEST_CASE("entropies") {
  CHECK(std::abs(von_neumann_entropy(mixed(8, "A")) - 3.0) < 1e-12);
  DensityOperator phi = max_entangled(2, "A");
  CHECK(von_neumann_entropy(phi) < 1e-9);
  CHECK(std::abs(mutual_information(phi, {"A"}, {"A'"}) - 2.0) < 1e-12);

  Mat cc = Mat::Zero(4, 4);
  cc(0, 0) = 0.5;
  cc(3, 3) = 0.5;
  DensityOperator classical(cc, SystemLayout({{"A", 2}, {"B", 2}}));
  CHECK(std::abs(mutual_information(classical, {"A"}, {"B"}) - 1.0) < 1e-12);

  CHECK(std::abs(binary_entropy(0.5) - 1.0) < 1e-14);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);

  // invariance under unitary conjugation
  std::mt19937_64 rng(9);
  Mat rho = random_density_matrix(4, rng);
  Mat u = random_unitary(4, rng);
  CHECK(std::abs(entropy_raw(rho) - entropy_raw(u * rho * u.adjoint())) < 1e-9);
}

TEST_CASE("chain rule and data processing") {
  std::mt19937_64 rng(13);
  DensityOperator rho(random_density_matrix(16, rng),
                      SystemLayout({{"A", 2}, {"B", 2}, {"C", 2}, {"D", 2}}));
  double lhs = conditional_mutual_information(rho, {"A"}, {"B", "C"}, {"D"});
  double rhs = conditional_mutual_information(rho, {"A"}, {"B"}, {"D"}) +
               conditional_mutual_information(rho, {"A"}, {"C"}, {"B", "D"});
  CHECK(std::abs(lhs - rhs) < 1e-9);
  CHECK(conditional_mutual_information(rho, {"A"}, {"B"}, {"C"}) > -1e-9);

  // discarding half of B can only lower I(A:B)
  DensityOperator rho3(random_density_matrix(8, rng),
                       SystemLayout({{"A", 2}, {"B1", 2}, {"B2", 2}}));
  double before = mutual_information(rho3, {"A"}, {"B1", "B2"});
  double after = mutual_information(partial_trace(rho3, {"B2"}), {"A"}, {"B1"});
  CHECK(after <= before + 1e-9);
}

TEST_CASE("pinsker gap") {
  std::mt19937_64 rng(17);
  DensityOperator a(random_density_matrix(2, rng), SystemLayout::single("A", 2));
  DensityOperator b(random_density_matrix(2, rng), SystemLayout::single("B", 2));
  DensityOperator prod = tensor_compose({a, b});
  CHECK(std::abs(pinsker_gap(prod, {"A"}, {"B"})) < 1e-10);

  DensityOperator phi = max_entangled(2, "A");
  CHECK(std::abs(pinsker_gap(phi, {"A"}, {"A'"}) - 0.875) < 1e-10);

  for (int trial = 0; trial < 500; ++trial) {
    DensityOperator rho(random_density_matrix(4, rng),
                        SystemLayout({{"A", 2}, {"B", 2}}));
    CHECK(pinsker_gap(rho, {"A"}, {"B"}) > -1e-9);
  }
}

TEST_CASE("entropy continuity bounds") {
  for (auto flavor : {FannesFlavor::Entropy, FannesFlavor::CondEntropy,
                      FannesFlavor::MutualInfo, FannesFlavor::CondMutualInfo})
    CHECK(fannes_bound(0.0, {2, 2}, flavor) == 0.0);
  CHECK(std::abs(fannes_bound(0.1, {2, 2}, FannesFlavor::MutualInfo) -
                 (0.5 + 3.0 * binary_entropy(0.1))) < 1e-12);
  CHECK(fannes_flavor_from_string("cond-entropy") == FannesFlavor::CondEntropy);
  CHECK_THROWS(fannes_flavor_from_string("nope"));

  // measured |dH| against the entropy flavor on perturbation pairs
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    Mat rho = random_density_matrix(4, rng);
    Mat sigma = random_density_matrix(4, rng);
    double eps = 0.5 * trace_norm(rho - sigma);
    double dh = std::abs(entropy_raw(rho) - entropy_raw(sigma));
    CHECK(dh <= fannes_bound(eps, {4}, FannesFlavor::Entropy) + 1e-9);
  }
}

TEST_CASE("determinism of seeded generators") {
  std::mt19937_64 r1(42), r2(42);
  CHECK((random_unitary(4, r1) - random_unitary(4, r2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((random_density_matrix(3, r1) - random_density_matrix(3, r2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}
