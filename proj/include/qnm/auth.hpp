#pragma once

#include "qnm/nm.hpp"

namespace qnm {

/// Per-key comparison of the attack's accept branch against the oblivious
/// simulator Gamma_V = (1/|C|) Tr_C V.
struct KeywiseReport {
  struct Entry {
    int key = 0;
    double deviation = 0.0;    // ||(Gamma_V - Phi_k) |psi>||_2
    double accept_prob = 0.0;  // ||Phi_k |psi>||_2^2
  };
  std::vector<Entry> per_key;
  double mean_sq_deviation = 0.0;
  double ms_bound = 0.0;  // 1/|T| + 3 delta

  /// Weighted fraction of keys with deviation^2 > alpha * ms_bound.
  double bad_fraction(double alpha) const;
};

/// Keywise accept-branch analysis for an isometric attack V on C (x) B against
/// a tagged unitary scheme, on the pure input psi (plaintext (x) side info).
/// delta_upper is the measured 2-design deficiency bound entering ms_bound.
KeywiseReport gyz_keywise(const EncryptionScheme& scheme, const Mat& v,
                          const Vec& psi, double delta_upper);

/// || Pi_acc D(Lambda(E(rho (x) tau_K))) Pi_acc - Lambda_acc(rho) (x) tau_K ||_1
/// with the oblivious witness Lambda_acc = Tr_E Gamma_V (.) Gamma_V^dag built
/// from the attack's dilation. General channels are dilated internally.
double gyz_residual(const EncryptionScheme& scheme, const QuantumChannel& attack,
                    const DensityOperator& rho_ab);

struct DnsReport {
  double residual = 0.0;    // max over the state battery
  double gamma_hat = 0.0;   // tag-verification weight of D_K(tau_C)
  double gamma = 0.0;       // max(gamma_hat, |C|^-2)
  double correction = 0.0;  // ||M - 1||_inf of the TP-correction, 0 if unused
};

/// Accept/reject simulator pair built from the exact effective-channel form:
/// Lambda_rej = ((1-gamma)|C|^2/(|C|^2-1)) Lambda'' and
/// Lambda_acc = Lambda' + ((gamma |C|^2 - 1)/(|C|^2-1)) Lambda''.
/// Returns the battery maximum of the defining trace distance.
DnsReport dns_residual(const EncryptionScheme& scheme, const QuantumChannel& attack,
                       const std::vector<DensityOperator>& battery);

struct GyzDnsEntry {
  std::string attack;
  double eps_gyz = 0.0;
  double eps_dns = 0.0;
  double bound = 0.0;  // 4 (28 sqrt(eps_gyz) + 3 eps_gyz)
  bool in_regime = false;  // eps_gyz <= 62^-2
  bool pass = false;       // in-regime and eps_dns <= bound + slack
};

/// Measures both residuals per attack and checks the square-root implication
/// where its small-epsilon precondition holds.
std::vector<GyzDnsEntry> gyz_implies_dns_check(
    const EncryptionScheme& scheme,
    const std::vector<std::pair<std::string, QuantumChannel>>& attacks,
    const DensityOperator& rho_ab, double slack = 1e-6);

/// Exact key-averaged acceptance probability of a fixed non-identity Pauli on
/// the ciphertext, and the post-selected plaintext fidelity with psi.
std::pair<double, double> pauli_attack_accept_stats(const EncryptionScheme& scheme,
                                                    const Mat& p, const Vec& psi);

}  // namespace qnm
