#pragma once

#include <optional>

#include "qnm/design.hpp"

namespace qnm {

/// Key-indexed family of encrypt/decrypt channels. Decrypt outputs live on
/// Abar = A + a dedicated reject direction |bot>, realized as one extra basis
/// vector appended to the plaintext space (register label "Abar",
/// dim |A| + 1). For direct-sum ciphertext spaces, c_blocks lists the block
/// dimensions inside the single C register, in order.
class EncryptionScheme {
 public:
  struct TagInfo {
    int tag_qubits = 0;
    Vec tag_state;  // pure state on the tag factor
  };

  EncryptionScheme(std::vector<double> key_weights,
                   std::vector<QuantumChannel> enc, std::vector<QuantumChannel> dec,
                   SystemLayout a_layout, SystemLayout c_layout);

  int num_keys() const { return static_cast<int>(weights_.size()); }
  double key_weight(int k) const { return weights_.at(k); }
  const QuantumChannel& enc(int k) const { return enc_.at(k); }
  const QuantumChannel& dec(int k) const { return dec_.at(k); }
  const SystemLayout& a_layout() const { return a_; }
  const SystemLayout& c_layout() const { return c_; }
  const SystemLayout& abar_layout() const { return abar_; }
  int a_dim() const { return a_.dim(); }
  int c_dim() const { return c_.dim(); }

  bool is_unitary() const { return !unitaries_.empty(); }
  const std::vector<Mat>& unitaries() const { return unitaries_; }
  void set_unitaries(std::vector<Mat> us) { unitaries_ = std::move(us); }

  const std::vector<int>& c_blocks() const { return c_blocks_; }
  void set_c_blocks(std::vector<int> blocks) { c_blocks_ = std::move(blocks); }

  const std::optional<TagInfo>& tag() const { return tag_; }
  void set_tag(TagInfo t) { tag_ = std::move(t); }

 private:
  std::vector<double> weights_;
  std::vector<QuantumChannel> enc_, dec_;
  SystemLayout a_, c_, abar_;
  std::vector<Mat> unitaries_;  // nonempty iff every E_k is U_k (.) U_k^dag
  std::vector<int> c_blocks_;
  std::optional<TagInfo> tag_;
};

/// Embeds rho_A as rho + 0 on Abar.
Mat embed_abar(const Mat& rho_a, int a_dim);
/// Projector onto the accepted (non-bot) part of Abar.
Mat accept_projector(int a_dim);

/// Max over keys and a spanning input set of || D_k(E_k(rho)) - rho + 0 ||_1.
double check_correctness(const EncryptionScheme& s);

QuantumChannel avg_encrypt(const EncryptionScheme& s);  // E_K, A -> C
QuantumChannel avg_decrypt(const EncryptionScheme& s);  // D_K, C -> Abar

// ---- constructors ------------------------------------------------------------

EncryptionScheme unitary_scheme_from(const UnitaryEnsemble& ensemble);

/// Reserve t tag qubits inside the plaintext: the new scheme encrypts
/// rho (x) |tag><tag| and decrypts by projecting the tag factor, routing the
/// failed projection mass to bot. Requires the base plaintext to factor as
/// A' (x) T with |T| = 2^t.
EncryptionScheme tagged_scheme(const EncryptionScheme& base, int t);
EncryptionScheme tagged_scheme(const EncryptionScheme& base, int t, const Vec& tag_state);

/// Enlarges the ciphertext to C + Ahat (Ahat a copy of the plaintext space):
/// encryption never touches Ahat, decryption decrypts the C block and passes
/// the Ahat block through verbatim.
EncryptionScheme injection_scheme(const EncryptionScheme& base);

EncryptionScheme qotp_scheme(int n);
EncryptionScheme clifford_scheme(int n);  // n in {1,2}
EncryptionScheme sampled_clifford_scheme(int n, int keys, uint64_t seed);

/// Keys U_k = Uhat_k V Uhat_k^T over a 2-design {Uhat_k}; the key average
/// acts as X -> (d tau - X^T)/(d - 1). Requires even d.
EncryptionScheme werner_holevo_scheme(const UnitaryEnsemble& base_design);
/// The antidiagonal +-i unitary used by werner_holevo_scheme.
Mat werner_holevo_v(int d);

/// Recovers E = V ((.) (x) sigma) V^dag from the Choi spectrum.
std::pair<Isometry, Mat> decompose_encryption_map(const QuantumChannel& e);

}  // namespace qnm
