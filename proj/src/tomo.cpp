#include "qbench/tomo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qbench/pauli.hpp"
#include "qbench/qstate.hpp"
#include "qbench/rng.hpp"

namespace qbench {

namespace {

ComplexMatrix setting_unitary(int setting, int n_qubits) {
  ComplexMatrix u(1, 1);
  u(0, 0) = 1.0;
  std::vector<int> digits(n_qubits);
  for (int q = n_qubits - 1; q >= 0; --q) {
    digits[q] = setting % 4;
    setting /= 4;
  }
  for (int q = 0; q < n_qubits; ++q)
    u = kron(u, gate_matrix(tomo_setting_gate(digits[q]))).eval();
  return u;
}

std::vector<ComplexMatrix> all_setting_unitaries(int n_qubits) {
  int ns = 1 << (2 * n_qubits);
  std::vector<ComplexMatrix> us;
  us.reserve(ns);
  for (int s = 0; s < ns; ++s) us.push_back(setting_unitary(s, n_qubits));
  return us;
}

// diag(U rho U^dag); Eigen's a.dot(b) conjugates a
std::vector<double> model_probs(const ComplexMatrix& u, const ComplexMatrix& rho) {
  ComplexMatrix b = u * rho;
  const Index d = rho.rows();
  std::vector<double> p(d);
  for (Index k = 0; k < d; ++k) p[k] = u.row(k).dot(b.row(k)).real();
  return p;
}

// which single-qubit Pauli (index, sign) a setting gate turns into a Z
// measurement: m = u^dag Z u
std::pair<int, double> measured_pauli(int digit) {
  ComplexMatrix u = gate_matrix(tomo_setting_gate(digit));
  ComplexMatrix m = u.adjoint() * pauli1(3) * u;
  for (int p = 1; p <= 3; ++p) {
    Complex c = (pauli1(p) * m).trace() / 2.0;
    if (std::abs(std::abs(c.real()) - 1.0) < 1e-9 && std::abs(c.imag()) < 1e-9)
      return {p, c.real() > 0 ? 1.0 : -1.0};
  }
  throw std::logic_error("measured_pauli: setting gate does not map a Pauli to Z");
}

// lower-triangular parameterisation: d real diagonal entries then (re, im)
// pairs for each sub-diagonal entry, column major
ComplexMatrix unpack_l(const RealVector& x, Index d) {
  ComplexMatrix l = ComplexMatrix::Zero(d, d);
  Index pos = 0;
  for (Index j = 0; j < d; ++j) {
    l(j, j) = x(pos++);
    for (Index i = j + 1; i < d; ++i) {
      l(i, j) = Complex(x(pos), x(pos + 1));
      pos += 2;
    }
  }
  return l;
}

RealVector pack_l(const ComplexMatrix& l) {
  const Index d = l.rows();
  RealVector x(d * d);
  Index pos = 0;
  for (Index j = 0; j < d; ++j) {
    x(pos++) = l(j, j).real();
    for (Index i = j + 1; i < d; ++i) {
      x(pos) = l(i, j).real();
      x(pos + 1) = l(i, j).imag();
      pos += 2;
    }
  }
  return x;
}

struct MLEWork {
  const TomoDataset& data;
  const std::vector<ComplexMatrix>& us;
  Index d;

  double cost(const ComplexMatrix& l, ComplexMatrix* grad_w = nullptr) const {
    ComplexMatrix sigma = l * l.adjoint();
    double t = sigma.trace().real();
    ComplexMatrix rho = sigma / t;
    double c = 0;
    ComplexMatrix g;
    if (grad_w) g = ComplexMatrix::Zero(d, d);
    for (std::size_t s = 0; s < us.size(); ++s) {
      const ComplexMatrix& u = us[s];
      ComplexMatrix b = u * rho;
      ComplexVector r(d);
      for (Index k = 0; k < d; ++k) {
        Complex v = u.row(k).dot(b.row(k));  // conj(u_k) . b_k
        double res = v.real() - data.probabilities[s][k];
        c += res * res;
        r(k) = 2.0 * res;
      }
      if (grad_w) g += u.adjoint() * r.asDiagonal() * u;
    }
    if (grad_w) {
      double tg = (g * rho).trace().real();
      *grad_w = (g * l - tg * l) / t;
    }
    return c;
  }

  double cost_x(const RealVector& x, RealVector* grad = nullptr) const {
    ComplexMatrix l = unpack_l(x, d);
    if (!grad) return cost(l);
    ComplexMatrix w;
    double c = cost(l, &w);
    RealVector& gx = *grad;
    gx.resize(x.size());
    Index pos = 0;
    for (Index j = 0; j < d; ++j) {
      gx(pos++) = 2.0 * w(j, j).real();
      for (Index i = j + 1; i < d; ++i) {
        gx(pos) = 2.0 * w(i, j).real();
        gx(pos + 1) = 2.0 * w(i, j).imag();
        pos += 2;
      }
    }
    return c;
  }
};

// plain L-BFGS with Armijo backtracking
struct LBFGSOutcome {
  RealVector x;
  double cost;
  bool converged;
  int iterations;
};

LBFGSOutcome lbfgs_minimize(const MLEWork& work, RealVector x0, const MLEOptions& opts) {
  const int hist = 10;
  std::vector<RealVector> sv, yv;
  RealVector x = std::move(x0), g(x.size());
  double f = work.cost_x(x, &g);
  int it = 0;
  bool converged = false;
  for (; it < opts.max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      converged = true;
      break;
    }
    // two-loop recursion
    RealVector q = g;
    std::vector<double> alpha(sv.size());
    for (int i = int(sv.size()) - 1; i >= 0; --i) {
      double rho_i = 1.0 / yv[i].dot(sv[i]);
      alpha[i] = rho_i * sv[i].dot(q);
      q -= alpha[i] * yv[i];
    }
    if (!sv.empty()) {
      double gamma = sv.back().dot(yv.back()) / yv.back().dot(yv.back());
      q *= gamma;
    }
    for (std::size_t i = 0; i < sv.size(); ++i) {
      double rho_i = 1.0 / yv[i].dot(sv[i]);
      double beta = rho_i * yv[i].dot(q);
      q += (alpha[i] - beta) * sv[i];
    }
    RealVector dir = -q;
    double slope = g.dot(dir);
    if (slope >= 0) {  // not a descent direction; restart
      dir = -g;
      slope = g.dot(dir);
      sv.clear();
      yv.clear();
    }
    double step = 1.0;
    double f_new = 0;
    RealVector x_new;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      x_new = x + step * dir;
      f_new = work.cost_x(x_new);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    RealVector g_new(x.size());
    work.cost_x(x_new, &g_new);
    RealVector s = x_new - x, y = g_new - g;
    if (s.dot(y) > 1e-14) {
      sv.push_back(s);
      yv.push_back(y);
      if (int(sv.size()) > hist) {
        sv.erase(sv.begin());
        yv.erase(yv.begin());
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
  }
  if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) converged = true;
  return {x, f, converged, it};
}

}  // namespace

GateKind tomo_setting_gate(int digit) {
  switch (digit) {
    case 0: return GateKind::I;
    case 1: return GateKind::X2;
    case 2: return GateKind::Y2;
    case 3: return GateKind::X;
  }
  throw std::invalid_argument("tomo_setting_gate: digit outside 0..3");
}

void TomoDataset::validate() const {
  const int ns = n_settings();
  const Index d = Index(1) << n_qubits;
  if (int(probabilities.size()) != ns)
    throw std::runtime_error("TomoDataset: settings incomplete");
  for (const auto& row : probabilities) {
    if (Index(row.size()) != d) throw std::runtime_error("TomoDataset: bad outcome count");
    double s = std::accumulate(row.begin(), row.end(), 0.0);
    if (std::abs(s - 1.0) > 1e-9)
      throw std::runtime_error("TomoDataset: setting probabilities do not sum to 1");
  }
}

TomoDataset simulate_tomo(const DensityMatrix& rho, long shots, std::uint64_t seed,
                          std::optional<ReadoutModel> readout) {
  int n = 0;
  while ((Index(1) << n) < rho.dim()) ++n;
  TomoDataset data;
  data.n_qubits = n;
  data.repetitions = shots;
  const Index d = rho.dim();
  auto us = all_setting_unitaries(n);
  data.probabilities.resize(us.size());

  for (std::size_t s = 0; s < us.size(); ++s) {
    std::vector<double> p = model_probs(us[s], rho.matrix);
    for (double& v : p) v = std::max(v, 0.0);
    double norm = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= norm;

    if (readout) {
      // per-qubit confusion applied to the outcome distribution
      for (int q = 0; q < n; ++q) {
        Index bit = Index(1) << (n - 1 - q);
        std::vector<double> p2(p.size());
        for (Index k = 0; k < d; ++k) {
          Index k0 = k & ~bit, k1 = k | bit;
          if (!(k & bit))
            p2[k] = readout->fidelity0 * p[k0] + (1.0 - readout->fidelity1) * p[k1];
          else
            p2[k] = (1.0 - readout->fidelity0) * p[k0] + readout->fidelity1 * p[k1];
        }
        p = std::move(p2);
      }
    }

    if (shots > 0) {
      std::vector<double> cum(p.size());
      std::partial_sum(p.begin(), p.end(), cum.begin());
      std::vector<long> counts(p.size(), 0);
      SplitMix64 rng = substream(seed, 0x70b0, s);
      for (long i = 0; i < shots; ++i) {
        double u = rng.uniform() * cum.back();
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        counts[std::min<std::size_t>(it - cum.begin(), p.size() - 1)]++;
      }
      for (std::size_t k = 0; k < p.size(); ++k) p[k] = double(counts[k]) / double(shots);
    }
    data.probabilities[s] = std::move(p);
  }
  return data;
}

ComplexMatrix linear_inversion(const TomoDataset& data) {
  data.validate();
  const int n = data.n_qubits;
  const Index d = Index(1) << n;
  const int ns = data.n_settings();

  std::array<std::pair<int, double>, 4> obs;
  for (int digit = 0; digit < 4; ++digit) obs[digit] = measured_pauli(digit);

  int n_codes = 1 << (2 * n);
  std::vector<double> sum(n_codes, 0.0);
  std::vector<int> count(n_codes, 0);
  sum[0] = 1.0;
  count[0] = 1;

  for (int s = 0; s < ns; ++s) {
    std::vector<int> digits(n);
    int tmp = s;
    for (int q = n - 1; q >= 0; --q) {
      digits[q] = tmp % 4;
      tmp /= 4;
    }
    for (int mask = 1; mask < (1 << n); ++mask) {
      int code = 0;
      double sign = 1.0;
      for (int q = 0; q < n; ++q) {
        code *= 4;
        if (mask & (1 << (n - 1 - q))) {
          code += obs[digits[q]].first;
          sign *= obs[digits[q]].second;
        }
      }
      double v = 0;
      for (Index k = 0; k < d; ++k) {
        int parity = __builtin_popcountll(std::uint64_t(k) & std::uint64_t(mask));
        v += ((parity & 1) ? -1.0 : 1.0) * data.probabilities[s][k];
      }
      sum[code] += sign * v;
      count[code]++;
    }
  }

  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (int code = 0; code < n_codes; ++code) {
    if (count[code] == 0) continue;
    rho += (sum[code] / count[code]) * pauli_string(code, n);
  }
  return rho / double(d);
}

MLEResult mle_reconstruct(const TomoDataset& data, const MLEOptions& opts) {
  data.validate();
  const int n = data.n_qubits;
  const Index d = Index(1) << n;
  auto us = all_setting_unitaries(n);
  MLEWork work{data, us, d};

  // seed 1: maximally mixed
  RealVector x_id = pack_l(ComplexMatrix::Identity(d, d) / std::sqrt(double(d)));

  // seed 2: linear inversion clipped to the PSD cone
  ComplexMatrix li = linear_inversion(data);
  // residual of the (possibly unphysical) linear inversion itself
  double seed_residual = 0;
  for (std::size_t s = 0; s < us.size(); ++s) {
    ComplexMatrix b = us[s] * li;
    for (Index k = 0; k < d; ++k) {
      double res = us[s].row(k).dot(b.row(k)).real() - data.probabilities[s][k];
      seed_residual += res * res;
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (li + li.adjoint().eval()));
  RealVector ev = es.eigenvalues().cwiseMax(1e-12);
  ev /= ev.sum();
  ComplexMatrix l_li = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  // lower-triangularise via LLT of the clipped state (keeps the exact
  // parameterisation the optimizer walks in)
  ComplexMatrix psd = l_li * l_li.adjoint();
  Eigen::LLT<ComplexMatrix> llt(psd + 1e-14 * ComplexMatrix::Identity(d, d));
  RealVector x_li = pack_l(ComplexMatrix(llt.matrixL()));

  LBFGSOutcome best{RealVector(), 0, false, 0};
  bool first = true;
  for (const RealVector& x0 : {x_li, x_id}) {
    LBFGSOutcome out = lbfgs_minimize(work, x0, opts);
    if (first || out.cost < best.cost) {
      best = out;
      first = false;
    }
  }

  ComplexMatrix l = unpack_l(best.x, d);
  ComplexMatrix sigma = l * l.adjoint();
  MLEResult res;
  res.rho = DensityMatrix{sigma / sigma.trace().real()};
  // exact Hermiticity for downstream consumers
  res.rho.matrix = 0.5 * (res.rho.matrix + res.rho.matrix.adjoint().eval());
  res.residual = best.cost;
  res.seed_residual = seed_residual;
  res.converged = best.converged;
  res.iterations = best.iterations;
  return res;
}

std::map<std::string, double> pauli_representation(const DensityMatrix& rho) {
  int n = 0;
  while ((Index(1) << n) < rho.dim()) ++n;
  std::map<std::string, double> out;
  int n_codes = 1 << (2 * n);
  for (int code = 0; code < n_codes; ++code) {
    ComplexMatrix p = pauli_string(code, n);
    Complex c = p.cwiseProduct(rho.matrix.transpose()).sum();  // Tr(P rho)
    out[pauli_name(code, n)] = c.real();
  }
  return out;
}

GHZDiagnostics ghz_diagnostics(const DensityMatrix& rho, int n_qubits) {
  const Index d = Index(1) << n_qubits;
  if (rho.dim() != d) throw std::invalid_argument("ghz_diagnostics: dimension mismatch");
  GHZDiagnostics g;
  g.fidelity = fidelity_pure(PureState::ghz(n_qubits), rho);
  double p00 = rho.matrix(0, 0).real();
  double p11 = rho.matrix(d - 1, d - 1).real();
  double off = std::norm(rho.matrix(0, d - 1));
  if (p00 > 1e-12 && p11 > 1e-12) {
    g.offdiag_ratio = off / (p00 * p11);
    g.ratio_valid = true;
  }
  g.genuine_entanglement = g.fidelity > 0.5;
  return g;
}

}  // namespace qbench
