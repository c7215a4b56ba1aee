#pragma once

#include <functional>

#include "qnm/scheme.hpp"

namespace qnm {

/// Adversary model: she prepares rho on A (x) B (x) R, the ciphertext plus her
/// side information pass through her channel C (x) B -> C (x) Bt, and the
/// result is decrypted. Trivial B/R are 1-dim registers so every formula
/// applies verbatim.
struct AttackScenario {
  EncryptionScheme scheme;
  DensityOperator initial;  // registers A, B, R (B and/or R may have dim 1)
  QuantumChannel attack;    // in C (x) B, out C (x) Bt

  void validate() const;
};

/// Evaluation record for one scenario.
struct EffectiveAttack {
  QuantumChannel effective;  // A (x) B -> Abar (x) Bt
  double p_eq = 0.0;
  EntropyLedger ledger;
  double nm_gain = 0.0;  // I(AR:Bt) - I(AR:B) - h(p_eq), bits
};

/// Key-averaged plaintext-level channel Tr_K(D . Lambda . E((.) (x) tau_K)).
QuantumChannel effective_channel(const AttackScenario& s);
/// Overlap of the attack with the identity on the ciphertext.
double p_equals(const AttackScenario& s);
EffectiveAttack evaluate_attack(const AttackScenario& s);
double nm_gain(const AttackScenario& s);

/// The two reduced maps of the exact effective-channel form:
/// prime(X)  = Tr_CC'[phi+ Lambda(phi+ (x) X)]
/// second(X) = Tr_CC'[Pi-  Lambda(phi+ (x) X)]
/// and the assembled ideal id (x) prime + (|C|^2 <D_K(tau)> - id) (x) second / (|C|^2-1),
/// promoted to the decrypt output space Abar.
struct CharacterizationParts {
  QuantumChannel prime;   // B -> Bt, CP
  QuantumChannel second;  // B -> Bt, CP; prime + second is TP
  QuantumChannel ideal;   // A (x) B -> Abar (x) Bt
};
CharacterizationParts characterization_ideal(const AttackScenario& s);

struct ResidualBounds {
  double lower = 0.0;
  double upper = 0.0;
};
/// Diamond bounds between the measured effective channel and the ideal form.
ResidualBounds characterization_residual(const AttackScenario& s);

/// Tolerance polynomials of the approximate characterization:
/// forward 2 sqrt(2 eps) |A|^4 |C| (4 sqrt(|A|) + 1), converse
/// 5 eps (log|A| + r) + 3 h(eps).
double characterization_forward_tolerance(double eps, int a_dim, int c_dim);
double characterization_converse_tolerance(double eps, int a_dim, double r_bits);

/// Distance from the effective map (trivial side info) to the affine family
/// spanned by the identity and the replacement channels <D_K(sigma)>.
/// Computed as a least-squares Choi projection followed by CP clipping; the
/// reported value is the Choi 1-norm residual, with the |A|-factor diamond
/// upper bound alongside.
struct AbwResidual {
  double choi_residual = 0.0;
  double diamond_upper = 0.0;
  double clip_amount = 0.0;  // CP-cone correction applied after projection
};
AbwResidual abw_residual(const AttackScenario& s);

/// I(C:B) of the encrypted state, and the ciphertext distinguishability
/// ||E_K(rho) - E_K(rho')||_1.
double its_check(const EncryptionScheme& scheme, const DensityOperator& rho_ab);
double ind_distance(const EncryptionScheme& scheme, const DensityOperator& rho,
                    const DensityOperator& rho_prime);

/// The ciphertext-extraction attack: CJ state (d^2/(d^2-1)) Pi- eta Pi- with
/// eta = tau_C (x) phi+ on Bt C'; has p_eq = 0 and teleports the ciphertext
/// into the adversary's side output.
AttackScenario secrecy_attack_from_nm(const EncryptionScheme& scheme,
                                      const DensityOperator& rho_ar);

// ---- attack library ----------------------------------------------------------

struct NamedAttack {
  std::string name;
  /// Builds the attack channel for the given ciphertext and side-info dims.
  /// Side-info register Bt dim may differ from B; the scenario factory below
  /// pairs each attack with a compatible initial state.
  std::function<QuantumChannel(const EncryptionScheme&)> build;
};

/// Fixed, versioned battery: identity, Pauli conjugations, replace-with-sigma,
/// coin-mixture, CNOT-copy, and seeded random unitaries/isometries/channels.
std::vector<NamedAttack> attack_library(uint64_t seed = 0x5EEDull);

/// Scenario batteries: each attack from the library paired with seeded initial
/// states (purified A marginal; optional side info where the attack needs it).
std::vector<AttackScenario> scenario_battery(const EncryptionScheme& scheme,
                                             int states_per_attack, uint64_t seed);

/// Named constructions used by specific experiments.
QuantumChannel identity_attack(const EncryptionScheme& scheme);
QuantumChannel pauli_attack(const EncryptionScheme& scheme, const Mat& p);
QuantumChannel replace_attack(const EncryptionScheme& scheme, const Mat& sigma);
/// Flip a fair coin into Bt: heads conjugate the ciphertext by X...X, tails
/// replace it with tau.
QuantumChannel coin_mixture_attack(const EncryptionScheme& scheme);
/// CNOT from each ciphertext qubit onto a fresh B qubit (copy in the
/// computational basis). B and Bt are |C|-dim.
QuantumChannel cnot_copy_attack(const EncryptionScheme& scheme);
/// Discard the ciphertext, emit the zero-extended block state with phi+
/// across the pass-through block and Bt.
QuantumChannel injection_attack(const EncryptionScheme& scheme);

/// Purification of a seeded random A-marginal, with trivial B.
DensityOperator random_abr_state(const EncryptionScheme& scheme, uint64_t seed);

}  // namespace qnm
