#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnm/scheme.hpp"

using namespace qnm;

TEST_CASE("one-time pad is correct and key-averages to noise") {
  EncryptionScheme qotp = qotp_scheme(1);
  CHECK(qotp.num_keys() == 4);
  CHECK(check_correctness(qotp) < 1e-12);
  std::mt19937_64 rng(3);
  QuantumChannel ek = avg_encrypt(qotp);
  for (int i = 0; i < 5; ++i) {
    Mat rho = random_density_matrix(2, rng);
    CHECK((ek.apply_matrix(rho) - maximally_mixed(2)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("two-qubit one-time pad") {
  EncryptionScheme qotp = qotp_scheme(2);
  CHECK(qotp.num_keys() == 16);
  CHECK(check_correctness(qotp) < 1e-12);
}

TEST_CASE("clifford scheme is correct and unitary") {
  EncryptionScheme cs = clifford_scheme(1);
  CHECK(cs.num_keys() == 24);
  CHECK(cs.is_unitary());
  CHECK(check_correctness(cs) < 1e-11);
  std::mt19937_64 rng(5);
  Mat rho = random_density_matrix(2, rng);
  CHECK((avg_encrypt(cs).apply_matrix(rho) - maximally_mixed(2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("average decrypt embeds into the extended output space") {
  EncryptionScheme cs = clifford_scheme(1);
  QuantumChannel dk = avg_decrypt(cs);
  CHECK(dk.out_dim() == 3);
  Mat img = dk.apply_matrix(maximally_mixed(2));
  CHECK((img - embed_abar(maximally_mixed(2), 2)).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(std::abs((accept_projector(2) * img).trace().real() - 1.0) < 1e-11);
}

TEST_CASE("keyed transpose scheme matches its closed-form average") {
  EncryptionScheme wh = werner_holevo_scheme(clifford_group(1));
  int d = 2;
  CHECK(check_correctness(wh) < 1e-10);
  QuantumChannel ek = avg_encrypt(wh);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 8; ++i) {
    Mat rho = random_density_matrix(d, rng);
    Mat expect = (double(d) * maximally_mixed(d) - rho.transpose()) / (d - 1.0);
    CHECK((ek.apply_matrix(rho) - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
  // frozen: the entangled probe lands at trace distance 3/2 from pure noise
  Mat phi = phi_plus(d);
  SystemLayout l({{"A", d}, {"R", d}});
  auto [enc, enc_l] = apply_unnormalized(ek, phi, l, {"A"});
  CHECK(trace_norm(enc - kron(maximally_mixed(d), maximally_mixed(d))) ==
        doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("antidiagonal key unitary is unitary and antisymmetric") {
  for (int d : {2, 4}) {
    Mat v = werner_holevo_v(d);
    CHECK((v * v.adjoint() - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((v.transpose() + v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("tag extension verifies and rejects") {
  EncryptionScheme base = qotp_scheme(1);  // plaintext splits as A' (x) T
  EncryptionScheme tagged = tagged_scheme(base, 1);
  CHECK(tagged.a_dim() == 1);
  CHECK(tagged.c_dim() == 2);
  CHECK(check_correctness(tagged) < 1e-11);
  CHECK(tagged.tag().has_value());
  CHECK(tagged.tag()->tag_qubits == 1);

  // honest path accepts with certainty
  Mat rho = Mat::Identity(1, 1);
  for (int k = 0; k < tagged.num_keys(); ++k) {
    Mat out = tagged.dec(k).apply_matrix(tagged.enc(k).apply_matrix(rho));
    CHECK(std::abs((accept_projector(1) * out).trace().real() - 1.0) < 1e-11);
  }

  // a garbled ciphertext leaks acceptance weight into the reject direction
  QuantumChannel dk = avg_decrypt(tagged);
  Mat noise_out = dk.apply_matrix(maximally_mixed(2));
  double acc = (accept_projector(1) * noise_out).trace().real();
  CHECK(acc == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("two tag qubits cut the forged-acceptance weight to a quarter") {
  EncryptionScheme tagged = tagged_scheme(qotp_scheme(2), 2);
  CHECK(tagged.a_dim() == 1);
  QuantumChannel dk = avg_decrypt(tagged);
  double acc = (accept_projector(1) * dk.apply_matrix(maximally_mixed(4))).trace().real();
  CHECK(acc == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("block extension passes the extra block through") {
  EncryptionScheme inj = injection_scheme(clifford_scheme(1));
  CHECK(inj.c_dim() == 4);
  REQUIRE(inj.c_blocks().size() == 2);
  CHECK(inj.c_blocks()[0] == 2);
  CHECK(inj.c_blocks()[1] == 2);
  CHECK(check_correctness(inj) < 1e-11);

  // a state supported on the pass-through block decrypts verbatim
  std::mt19937_64 rng(11);
  Mat rho_a = random_density_matrix(2, rng);
  Mat cipher = Mat::Zero(4, 4);
  cipher.bottomRightCorner(2, 2) = rho_a;
  for (int k = 0; k < inj.num_keys(); ++k) {
    Mat out = inj.dec(k).apply_matrix(cipher);
    CHECK((out - embed_abar(rho_a, 2)).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("sampled clifford scheme is deterministic and correct") {
  EncryptionScheme a = sampled_clifford_scheme(1, 12, 77);
  EncryptionScheme b = sampled_clifford_scheme(1, 12, 77);
  CHECK(a.num_keys() == 12);
  CHECK(check_correctness(a) < 1e-11);
  for (int k = 0; k < a.num_keys(); ++k)
    CHECK((a.unitaries()[k] - b.unitaries()[k]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("encryption map decomposition recovers isometry and ancilla") {
  // E(X) = U (X (x) sigma) U^dag for a seeded unitary and pure-ish ancilla
  std::mt19937_64 rng(13);
  Mat u = random_unitary(4, rng);
  Mat sigma = Mat::Zero(2, 2);
  sigma(0, 0) = 1.0;
  std::vector<Mat> kraus;
  Mat append = Mat::Zero(4, 2);
  append.block(0, 0, 2, 2).setZero();
  for (int i = 0; i < 2; ++i) append(i * 2 + 0, i) = 1.0;  // |i> -> |i>|0>
  kraus.push_back(u * append);
  QuantumChannel e = QuantumChannel::from_kraus(kraus, SystemLayout::single("A", 2),
                                                SystemLayout::single("C", 4));
  auto [v, anc] = decompose_encryption_map(e);
  CHECK((v.matrix.adjoint() * v.matrix - Mat::Identity(v.matrix.cols(), v.matrix.cols()))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK(std::abs(anc.trace().real() - 1.0) < 1e-10);
  // reconstruct the channel from the recovered pieces
  std::mt19937_64 rng2(17);
  Mat rho = random_density_matrix(2, rng2);
  Mat img = v.matrix * kron(rho, anc) * v.matrix.adjoint();
  CHECK((img - e.apply_matrix(rho)).cwiseAbs().maxCoeff() < 1e-9);
}
