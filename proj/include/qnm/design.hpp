#pragma once

#include "qnm/channel.hpp"

namespace qnm {

/// Finite weighted set of unitaries on a fixed dimension.
struct UnitaryEnsemble {
  struct Element {
    Mat unitary;
    double weight;
  };
  std::vector<Element> elements;
  int dim = 1;
  std::string provenance;  // "enumerated", "sampled(seed,count)", "circuit(depth,seed)"

  void validate(double eps = 1e-10) const;  // weights sum to 1, elements unitary
};

/// First nonzero entry made real-positive; used for dedup and stable ordering.
Mat phase_canonical(const Mat& u);

// ---- concrete ensembles ------------------------------------------------------

/// Phase-stripped n-qubit Pauli operators, uniform weights, 4^n elements.
UnitaryEnsemble pauli_group(int n);  // n in 1..4
/// Exhaustive closure of {H, P, CNOT} words up to global phase.
/// n=1: 24 elements; n=2: 11520 elements. BFS order, deterministic.
UnitaryEnsemble clifford_group(int n);  // n in {1,2}
UnitaryEnsemble random_clifford(int n, int count, uint64_t seed);  // n <= 4
UnitaryEnsemble random_circuit_ensemble(int n, int depth, int count, uint64_t seed);

// ---- twirls ------------------------------------------------------------------

/// Weighted average of U^{(x)t} X U^{(x)t dag} over the ensemble.
Mat t_twirl(const UnitaryEnsemble& d, const Mat& x, int t);
/// Average of U^{(x)2} applied with precomputed two-fold tensors; same result
/// as t_twirl(d, x, 2), amortized over many probes.
class TwoTwirler {
 public:
  explicit TwoTwirler(const UnitaryEnsemble& d);
  Mat operator()(const Mat& x) const;

 private:
  std::vector<std::pair<Mat, double>> u2_;
};

/// The same empirical two-fold average, for ensembles closed under right
/// multiplication by the n-qubit paulis, regrouped over cosets: the inner
/// pauli sum projects each probe onto the Q (x) Q lines and the outer sum
/// conjugates their precomputed images by one representative per coset.
/// An exact algebraic identity, not an approximation; makes the full
/// two-qubit enumeration tractable in time and memory.
class CosetTwoTwirler {
 public:
  CosetTwoTwirler(const UnitaryEnsemble& ensemble, int n);
  Mat operator()(const Mat& x) const;
  int rep_count() const { return reps_; }

 private:
  int dim_ = 1;  // d^2 for n qubits
  int reps_ = 0;
  std::vector<Mat> basis_;   // Q (x) Q
  std::vector<Mat> images_;  // coset-averaged (SQS^dag) (x) (SQS^dag)
};

/// Closed-form Haar average of (U^{(x)2} (x) 1_aux) M (... dag) via the
/// two-block commutant decomposition 1 (x) R1 + F (x) RF. The twirled factor
/// is the leading d^2 one; aux_dim names the trailing untouched factor.
Mat haar_2twirl(const Mat& m, int aux_dim = 1);

Mat uubar_twirl(const UnitaryEnsemble& d, const Mat& x);
/// phi+ Tr[phi+ X] + Pi- Tr[Pi- X]/(d^2-1).
Mat uubar_twirl_haar(const Mat& x);

QuantumChannel channel_twirl(const UnitaryEnsemble& d, const QuantumChannel& lambda);
QuantumChannel channel_twirl_haar(const QuantumChannel& lambda);

// ---- deficiency --------------------------------------------------------------

/// Closed-form CJ states of the Haar twirling channels, for distance baselines.
Mat haar_2twirl_choi(int d);
Mat uubar_twirl_haar_choi(int d);
Mat twirl_channel_choi(const UnitaryEnsemble& d, int t);  // empirical t-twirl CJ
Mat uubar_twirl_channel_choi(const UnitaryEnsemble& d);

enum class DesignNotion { TTwirl1, TTwirl2, UUbar, ChannelTwirl };
struct DeficiencyReport {
  DesignNotion notion;
  double lower = 0.0;
  double upper = 0.0;
  int probes = 0;
};

/// Diamond-distance bounds between empirical and Haar twirl channels. The
/// channel-twirl notion maximizes over a fixed probe battery (all Paulis on
/// matching qubit counts plus 20 seeded random channels) and reports the
/// battery maximum as lower, with upper inherited from the U-Ubar notion via
/// the dimension-factor relation.
DeficiencyReport design_deficiency(const UnitaryEnsemble& d, DesignNotion notion);

}  // namespace qnm
