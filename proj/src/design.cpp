#include "qnm/design.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace qnm {

void UnitaryEnsemble::validate(double eps) const {
  double total = 0.0;
  for (const auto& e : elements) {
    if (e.weight < 0.0) throw std::invalid_argument("ensemble: negative weight");
    if (e.unitary.rows() != dim || e.unitary.cols() != dim)
      throw std::invalid_argument("ensemble: element dimension mismatch");
    Mat defect = e.unitary * e.unitary.adjoint() - Mat::Identity(dim, dim);
    if (defect.cwiseAbs().maxCoeff() > eps)
      throw std::invalid_argument("ensemble: element not unitary");
    total += e.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("ensemble: weights sum to " + std::to_string(total));
}

Mat phase_canonical(const Mat& u) {
  for (int r = 0; r < u.rows(); ++r)
    for (int c = 0; c < u.cols(); ++c) {
      cxd v = u(r, c);
      if (std::abs(v) > 1e-8) return u * (std::conj(v) / std::abs(v));
    }
  return u;
}

namespace {

// Rounded-entry fingerprint of a phase-canonical unitary, for dedup.
std::string unitary_key(const Mat& u) {
  std::string key;
  key.reserve(static_cast<size_t>(u.size()) * 18);
  char buf[40];
  for (int r = 0; r < u.rows(); ++r)
    for (int c = 0; c < u.cols(); ++c) {
      double re = u(r, c).real(), im = u(r, c).imag();
      if (std::abs(re) < 5e-7) re = 0.0;
      if (std::abs(im) < 5e-7) im = 0.0;
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f;", re, im);
      key += buf;
    }
  return key;
}

Mat embed_1q(const Mat& g, int n, int qubit) {
  Mat u = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q) u = kron(u, q == qubit ? g : Mat::Identity(2, 2));
  return u;
}

Mat cnot_matrix(int n, int control, int target) {
  int d = 1 << n;
  Mat u = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    int cbit = (i >> (n - 1 - control)) & 1;
    int j = cbit ? i ^ (1 << (n - 1 - target)) : i;
    u(j, i) = 1.0;
  }
  return u;
}

std::vector<Mat> clifford_generators(int n) {
  Mat h(2, 2), p(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  p << 1, 0, 0, cxd(0, 1);
  std::vector<Mat> gens;
  for (int q = 0; q < n; ++q) {
    gens.push_back(embed_1q(h, n, q));
    gens.push_back(embed_1q(p, n, q));
  }
  for (int c = 0; c < n; ++c)
    for (int t = 0; t < n; ++t)
      if (c != t) gens.push_back(cnot_matrix(n, c, t));
  return gens;
}

}  // namespace

UnitaryEnsemble pauli_group(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("pauli_group: n must be 1..4");
  Mat i2 = Mat::Identity(2, 2);
  Mat x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cxd(0, -1), cxd(0, 1), 0;
  z << 1, 0, 0, -1;
  std::vector<Mat> single{i2, x, y, z};
  UnitaryEnsemble ens;
  ens.dim = 1 << n;
  ens.provenance = "enumerated";
  int count = 1;
  for (int q = 0; q < n; ++q) count *= 4;
  for (int code = 0; code < count; ++code) {
    Mat u = Mat::Identity(1, 1);
    int rem = code;
    for (int q = 0; q < n; ++q) {
      u = kron(u, single[rem % 4]);
      rem /= 4;
    }
    ens.elements.push_back({phase_canonical(u), 1.0 / count});
  }
  return ens;
}

UnitaryEnsemble clifford_group(int n) {
  if (n < 1 || n > 2)
    throw std::invalid_argument("clifford_group: enumeration limited to n in {1,2}");
  auto gens = clifford_generators(n);
  int d = 1 << n;
  std::vector<Mat> found{Mat::Identity(d, d)};
  std::unordered_set<std::string> seen{unitary_key(found[0])};
  // breadth-first closure over generator words
  for (size_t head = 0; head < found.size(); ++head) {
    Mat cur = found[head];
    for (const auto& g : gens) {
      Mat next = phase_canonical(g * cur);
      std::string key = unitary_key(next);
      if (seen.insert(std::move(key)).second) found.push_back(std::move(next));
    }
  }
  UnitaryEnsemble ens;
  ens.dim = d;
  ens.provenance = "enumerated";
  double w = 1.0 / double(found.size());
  for (auto& u : found) ens.elements.push_back({std::move(u), w});
  return ens;
}

UnitaryEnsemble random_clifford(int n, int count, uint64_t seed) {
  if (n < 1 || n > 4) throw std::invalid_argument("random_clifford: n must be 1..4");
  if (count < 1) throw std::invalid_argument("random_clifford: count must be positive");
  auto gens = clifford_generators(n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
  int d = 1 << n;
  int word_len = 60 + 20 * n;  // long generator words mix the walk well past cover time
  UnitaryEnsemble ens;
  ens.dim = d;
  ens.provenance = "sampled(" + std::to_string(seed) + "," + std::to_string(count) + ")";
  for (int i = 0; i < count; ++i) {
    Mat u = Mat::Identity(d, d);
    for (int s = 0; s < word_len; ++s) u = gens[pick(rng)] * u;
    ens.elements.push_back({phase_canonical(u), 1.0 / count});
  }
  return ens;
}

UnitaryEnsemble random_circuit_ensemble(int n, int depth, int count, uint64_t seed) {
  if (n < 1 || n > 4) throw std::invalid_argument("random_circuit_ensemble: n must be 1..4");
  Mat h(2, 2), t(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  t << 1, 0, 0, std::polar(1.0, M_PI / 4.0);
  std::vector<Mat> gates;
  for (int q = 0; q < n; ++q) {
    gates.push_back(embed_1q(h, n, q));
    gates.push_back(embed_1q(t, n, q));
  }
  for (int c = 0; c < n; ++c)
    for (int tq = 0; tq < n; ++tq)
      if (c != tq) gates.push_back(cnot_matrix(n, c, tq));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, gates.size() - 1);
  int d = 1 << n;
  UnitaryEnsemble ens;
  ens.dim = d;
  ens.provenance =
      "circuit(" + std::to_string(depth) + "," + std::to_string(seed) + ")";
  for (int i = 0; i < count; ++i) {
    Mat u = Mat::Identity(d, d);
    for (int s = 0; s < depth; ++s) u = gates[pick(rng)] * u;
    ens.elements.push_back({phase_canonical(u), 1.0 / count});
  }
  return ens;
}

// ---- twirls ------------------------------------------------------------------

namespace {

Mat tensor_power(const Mat& u, int t) {
  Mat out = u;
  for (int i = 1; i < t; ++i) out = kron(out, u);
  return out;
}

}  // namespace

Mat t_twirl(const UnitaryEnsemble& d, const Mat& x, int t) {
  int dim = 1;
  for (int i = 0; i < t; ++i) dim *= d.dim;
  if (x.rows() != dim || x.cols() != dim)
    throw std::invalid_argument("t_twirl: probe dimension mismatch");
  Mat acc = Mat::Zero(dim, dim);
  for (const auto& e : d.elements) {
    Mat ut = tensor_power(e.unitary, t);
    acc += e.weight * (ut * x * ut.adjoint());
  }
  return acc;
}

TwoTwirler::TwoTwirler(const UnitaryEnsemble& d) {
  for (const auto& e : d.elements) u2_.push_back({kron(e.unitary, e.unitary), e.weight});
}

Mat TwoTwirler::operator()(const Mat& x) const {
  if (u2_.empty()) throw std::logic_error("TwoTwirler: empty ensemble");
  Mat acc = Mat::Zero(x.rows(), x.cols());
  for (const auto& [u2, w] : u2_) acc += w * (u2 * x * u2.adjoint());
  return acc;
}

CosetTwoTwirler::CosetTwoTwirler(const UnitaryEnsemble& ensemble, int n) {
  UnitaryEnsemble paulis = pauli_group(n);
  int d = 1 << n;
  dim_ = d * d;
  if (ensemble.dim != d)
    throw std::invalid_argument("CosetTwoTwirler: ensemble dimension mismatch");

  // one representative per right coset of the (projective) pauli subgroup
  std::vector<Mat> reps;
  std::unordered_set<std::string> seen;
  for (const auto& e : ensemble.elements) {
    std::string coset_key;
    for (const auto& p : paulis.elements) {
      std::string k = unitary_key(phase_canonical(e.unitary * p.unitary));
      if (coset_key.empty() || k < coset_key) coset_key = std::move(k);
    }
    if (seen.insert(std::move(coset_key)).second) reps.push_back(e.unitary);
  }
  if (reps.size() * paulis.elements.size() != ensemble.elements.size())
    throw std::invalid_argument(
        "CosetTwoTwirler: ensemble is not closed under pauli right multiplication");
  reps_ = static_cast<int>(reps.size());

  for (const auto& q : paulis.elements) {
    basis_.push_back(kron(q.unitary, q.unitary));
    Mat img = Mat::Zero(dim_, dim_);
    for (const auto& s : reps) {
      Mat sq = s * q.unitary * s.adjoint();
      img += kron(sq, sq);
    }
    images_.push_back(img / double(reps_));
  }
}

Mat CosetTwoTwirler::operator()(const Mat& x) const {
  if (x.rows() != dim_ || x.cols() != dim_)
    throw std::invalid_argument("CosetTwoTwirler: probe dimension mismatch");
  Mat acc = Mat::Zero(x.rows(), x.cols());
  for (size_t q = 0; q < basis_.size(); ++q) {
    cxd coeff = (basis_[q].adjoint() * x).trace() / double(dim_);
    acc += coeff * images_[q];
  }
  return acc;
}

Mat haar_2twirl(const Mat& m, int aux_dim) {
  if (aux_dim < 1 || m.rows() != m.cols() || m.rows() % aux_dim != 0)
    throw std::invalid_argument("haar_2twirl: bad dimensions");
  int d2 = static_cast<int>(m.rows()) / aux_dim;
  int d = static_cast<int>(std::llround(std::sqrt(double(d2))));
  if (d * d != d2 || d < 2) throw std::invalid_argument("haar_2twirl: twirled factor not a square dim >= 4");

  SystemLayout layout({{"A2", d2}, {"X", aux_dim}});
  Mat f = swap_operator(d);
  Mat fm = kron(f, Mat::Identity(aux_dim, aux_dim)) * m;
  Mat tr_m = partial_trace_raw(m, layout, {true, false});
  Mat tr_fm = partial_trace_raw(fm, layout, {true, false});
  double den = double(d) * (double(d) * d - 1.0);
  Mat r1 = (double(d) * tr_m - tr_fm) / den;
  Mat rf = (double(d) * tr_fm - tr_m) / den;
  return kron(Mat::Identity(d2, d2), r1) + kron(f, rf);
}

Mat uubar_twirl(const UnitaryEnsemble& d, const Mat& x) {
  if (x.rows() != d.dim * d.dim || x.cols() != d.dim * d.dim)
    throw std::invalid_argument("uubar_twirl: probe dimension mismatch");
  Mat acc = Mat::Zero(x.rows(), x.cols());
  for (const auto& e : d.elements) {
    Mat w = kron(e.unitary, e.unitary.conjugate());
    acc += e.weight * (w * x * w.adjoint());
  }
  return acc;
}

Mat uubar_twirl_haar(const Mat& x) {
  int d2 = static_cast<int>(x.rows());
  int d = static_cast<int>(std::llround(std::sqrt(double(d2))));
  if (d * d != d2) throw std::invalid_argument("uubar_twirl_haar: dim not a square");
  Mat phi = phi_plus(d);
  Mat pim = pi_minus(d);
  cxd a = (phi * x).trace();
  cxd b = (pim * x).trace();
  return phi * a + pim * (b / (double(d) * d - 1.0));
}

QuantumChannel channel_twirl(const UnitaryEnsemble& d, const QuantumChannel& lambda) {
  if (lambda.in_dim() != d.dim || lambda.out_dim() != d.dim)
    throw std::invalid_argument("channel_twirl: channel dim mismatch");
  return QuantumChannel::from_choi(uubar_twirl(d, lambda.choi()), lambda.in_layout(),
                                   lambda.out_layout());
}

QuantumChannel channel_twirl_haar(const QuantumChannel& lambda) {
  if (lambda.in_dim() != lambda.out_dim())
    throw std::invalid_argument("channel_twirl_haar: need equal dims");
  return QuantumChannel::from_choi(uubar_twirl_haar(lambda.choi()), lambda.in_layout(),
                                   lambda.out_layout());
}

// ---- twirl-channel CJ states -------------------------------------------------

namespace {

// CJ state of the averaged conjugation channel: each element contributes the
// rank-1 state vec(U) vec(U)^dag / dim, so stack scaled vectorizations and
// take one self-adjoint product.
Mat conjugation_average_choi(const std::vector<std::pair<const Mat*, double>>& us,
                             int dim) {
  Mat stack(dim * dim, us.size());
  for (size_t e = 0; e < us.size(); ++e) {
    const Mat& u = *us[e].first;
    double scale = std::sqrt(us[e].second / double(dim));
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) stack(r * dim + c, e) = scale * u(r, c);
  }
  Mat acc = Mat::Zero(dim * dim, dim * dim);
  acc.selfadjointView<Eigen::Lower>().rankUpdate(stack);
  return Mat(acc.selfadjointView<Eigen::Lower>());
}

}  // namespace

Mat twirl_channel_choi(const UnitaryEnsemble& d, int t) {
  int dim = 1;
  for (int i = 0; i < t; ++i) dim *= d.dim;
  std::vector<Mat> powers;
  powers.reserve(d.elements.size());
  for (const auto& e : d.elements) powers.push_back(tensor_power(e.unitary, t));
  std::vector<std::pair<const Mat*, double>> us;
  for (size_t i = 0; i < powers.size(); ++i) us.push_back({&powers[i], d.elements[i].weight});
  return conjugation_average_choi(us, dim);
}

Mat uubar_twirl_channel_choi(const UnitaryEnsemble& d) {
  int dim = d.dim * d.dim;
  std::vector<Mat> ws;
  ws.reserve(d.elements.size());
  for (const auto& e : d.elements) ws.push_back(kron(e.unitary, e.unitary.conjugate()));
  std::vector<std::pair<const Mat*, double>> us;
  for (size_t i = 0; i < ws.size(); ++i) us.push_back({&ws[i], d.elements[i].weight});
  return conjugation_average_choi(us, dim);
}

Mat haar_2twirl_choi(int d) { return haar_2twirl(phi_plus(d * d), d * d); }

Mat uubar_twirl_haar_choi(int d) {
  int dd = d * d;
  Mat phi = phi_plus(d);
  Mat pim = pi_minus(d);
  return (kron(phi, phi) + kron(pim, pim) / (double(dd) - 1.0)) / double(dd);
}

DeficiencyReport design_deficiency(const UnitaryEnsemble& d, DesignNotion notion) {
  DeficiencyReport rep;
  rep.notion = notion;
  switch (notion) {
    case DesignNotion::TTwirl1: {
      Mat emp = twirl_channel_choi(d, 1);
      Mat haar = kron(maximally_mixed(d.dim), maximally_mixed(d.dim));
      rep.lower = trace_norm(emp - haar);
      rep.upper = double(d.dim) * rep.lower;
      rep.probes = 1;
      return rep;
    }
    case DesignNotion::TTwirl2: {
      Mat emp = twirl_channel_choi(d, 2);
      Mat haar = haar_2twirl_choi(d.dim);
      rep.lower = trace_norm(emp - haar);
      rep.upper = double(d.dim) * d.dim * rep.lower;
      rep.probes = 1;
      return rep;
    }
    case DesignNotion::UUbar: {
      Mat emp = uubar_twirl_channel_choi(d);
      Mat haar = uubar_twirl_haar_choi(d.dim);
      rep.lower = trace_norm(emp - haar);
      rep.upper = double(d.dim) * d.dim * rep.lower;
      rep.probes = 1;
      return rep;
    }
    case DesignNotion::ChannelTwirl: {
      // finite probe battery: Pauli conjugations (when dim is a power of two)
      // plus 20 seeded random channels; battery max is only a lower bound.
      std::vector<QuantumChannel> probes;
      SystemLayout l = SystemLayout::single("A", d.dim);
      int n = 0;
      while ((1 << n) < d.dim) ++n;
      if ((1 << n) == d.dim) {
        for (const auto& e : pauli_group(std::max(1, n)).elements)
          if (e.unitary.rows() == d.dim)
            probes.push_back(QuantumChannel::unitary(e.unitary, l));
      }
      std::mt19937_64 rng(0xC0FFEEull);
      for (int i = 0; i < 20; ++i) {
        Mat g = random_matrix(2 * d.dim, d.dim, rng);
        Eigen::HouseholderQR<Mat> qr(g);
        Mat q = Mat(qr.householderQ()).leftCols(d.dim);
        std::vector<Mat> ks{q.topRows(d.dim), q.bottomRows(d.dim)};
        probes.push_back(QuantumChannel::from_kraus(std::move(ks), l, l));
      }
      double worst = 0.0;
      for (const auto& p : probes) {
        Mat emp = uubar_twirl(d, p.choi());
        Mat haar = uubar_twirl_haar(p.choi());
        worst = std::max(worst, trace_norm(emp - haar));
      }
      DeficiencyReport uubar = design_deficiency(d, DesignNotion::UUbar);
      rep.lower = worst;
      rep.upper = double(d.dim) * uubar.upper;
      rep.probes = static_cast<int>(probes.size());
      return rep;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace qnm
