#include "qbench/ctrlphys.hpp"

#include <cmath>
#include <stdexcept>

#include "qbench/qstate.hpp"

namespace qbench {

namespace {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

// exp(-i alpha H) for real symmetric 2x2 H = [[a, c], [c, b]]
Mat2 expm2(double a, double b, double c, double alpha) {
  const Complex im(0, 1);
  double mu = 0.5 * (a + b);
  double dz = 0.5 * (a - b);
  double r = std::hypot(dz, c);
  Mat2 u;
  if (r < 1e-300) {
    u = std::exp(-im * (alpha * mu)) * Mat2::Identity();
    return u;
  }
  double cs = std::cos(alpha * r), sn = std::sin(alpha * r);
  Complex ph = std::exp(-im * (alpha * mu));
  u(0, 0) = ph * (cs - im * sn * (dz / r));
  u(1, 1) = ph * (cs + im * sn * (dz / r));
  u(0, 1) = ph * (-im * sn * (c / r));
  u(1, 0) = u(0, 1);
  return u;
}

// accumulated propagators over the pulse: U1 on {|01>,|10>}, U2 on {|11>,|02>}
void subspace_propagators(const CZTrajectory& traj, double dt_ns, Mat2& u1, Mat2& u2) {
  traj.validate();
  if (dt_ns <= 0 || dt_ns > traj.duration_ns)
    throw std::invalid_argument("evolve_cz: bad dt");
  const double c1 = traj.g_mhz / 2.0;
  const double c2 = traj.g_mhz * std::sqrt(2.0) / 2.0;
  long n = long(std::ceil(traj.duration_ns / dt_ns));
  double h = traj.duration_ns / double(n);
  double alpha = 2.0 * kPi * 1e-3 * h;  // MHz * ns -> rad

  u1 = Mat2::Identity();
  u2 = Mat2::Identity();
  for (long k = 0; k < n; ++k) {
    double t = (double(k) + 0.5) * h;
    double delta = traj.detuning_at(t);
    double dq = delta - traj.eta_mhz;  // qubit-qubit detuning
    // frame rotating at the untuned qubit: E01=0, E10=dq, E11=dq, E02=dq+delta
    u1 = expm2(0.0, dq, c1, alpha) * u1;
    u2 = expm2(dq, dq + delta, c2, alpha) * u2;
  }
  for (const Mat2* u : {&u1, &u2}) {
    Mat2 g = (*u).adjoint() * (*u) - Mat2::Identity();
    if (g.cwiseAbs().maxCoeff() > 1e-8)
      throw NumericalError("evolve_cz: propagator unitarity drift above 1e-8");
  }
}

Mat2 idle_propagator(const CZTrajectory& traj, double tau_ns) {
  const double c2 = traj.g_mhz * std::sqrt(2.0) / 2.0;
  double dq = traj.idle_detuning_mhz - traj.eta_mhz;
  double alpha = 2.0 * kPi * 1e-3 * tau_ns;
  return expm2(dq, dq + traj.idle_detuning_mhz, c2, alpha);
}

double dominant_period(const std::vector<double>& t, const std::vector<double>& y) {
  double mean = 0;
  for (double v : y) mean += v;
  mean /= double(y.size());
  double span = t.back() - t.front();
  double dt = t[1] - t[0];
  double fmin = 0.5 / span, fmax = 0.5 / dt;
  const int nf = 4000;
  double best_f = fmin, best_a = -1;
  for (int i = 0; i <= nf; ++i) {
    double f = fmin + (fmax - fmin) * double(i) / nf;
    double re = 0, im = 0;
    for (std::size_t k = 0; k < y.size(); ++k) {
      double ph = 2.0 * kPi * f * t[k];
      re += (y[k] - mean) * std::cos(ph);
      im += (y[k] - mean) * std::sin(ph);
    }
    double a = re * re + im * im;
    if (a > best_a) {
      best_a = a;
      best_f = f;
    }
  }
  return 1.0 / best_f;
}

RamseyFilterResult run_filter(const CZTrajectory& traj, const Mat2& u_gate,
                              double max_delay_ns, double delay_step_ns) {
  if (max_delay_ns <= 0 || delay_step_ns <= 0 || max_delay_ns < 3 * delay_step_ns)
    throw std::invalid_argument("ramsey_error_filter: bad delay grid");
  RamseyFilterResult out;
  Vec2 init;
  init << 1, 0;
  double lo = 2.0, hi = 0.0;
  for (double tau = 0; tau <= max_delay_ns + 1e-12; tau += delay_step_ns) {
    Vec2 psi = u_gate * (idle_propagator(traj, tau) * (u_gate * init));
    double p11 = std::norm(psi(0));
    out.delays_ns.push_back(tau);
    out.p11.push_back(p11);
    lo = std::min(lo, p11);
    hi = std::max(hi, p11);
  }
  out.delta_p = hi - lo;
  out.leak_estimate = out.delta_p / 4.0;
  out.period_ns = dominant_period(out.delays_ns, out.p11);
  return out;
}

}  // namespace

double CZTrajectory::detuning_at(double t_ns) const {
  double tr = ramp_fraction * duration_ns;
  switch (shape) {
    case RampShape::Square:
      return hold_detuning_mhz;
    case RampShape::RaisedCosine: {
      double edge = std::min(t_ns, duration_ns - t_ns);
      if (edge >= tr) return hold_detuning_mhz;
      double w = 0.5 * (1.0 + std::cos(kPi * edge / tr));  // 1 at edges -> 0
      return hold_detuning_mhz + (idle_detuning_mhz - hold_detuning_mhz) * w;
    }
    case RampShape::Tanh: {
      double ts = tr / 4.0;
      auto raw = [&](double t) {
        return 0.5 * (std::tanh((t - tr) / ts) - std::tanh((t - (duration_ns - tr)) / ts));
      };
      double r0 = raw(0.0), rm = raw(0.5 * duration_ns);
      double s = (raw(t_ns) - r0) / (rm - r0);
      return idle_detuning_mhz + (hold_detuning_mhz - idle_detuning_mhz) * s;
    }
  }
  throw std::invalid_argument("bad ramp shape");
}

void CZTrajectory::validate() const {
  if (!(duration_ns > 0)) throw std::invalid_argument("CZTrajectory: duration must be > 0");
  if (shape != RampShape::Square) {
    if (!(ramp_fraction > 0) || ramp_fraction > 0.5)
      throw std::invalid_argument("CZTrajectory: ramp_fraction outside (0, 0.5]");
    double d0 = detuning_at(0.0), d1 = detuning_at(duration_ns);
    if (std::abs(d0 - idle_detuning_mhz) > 1e-9 || std::abs(d1 - idle_detuning_mhz) > 1e-9)
      throw std::invalid_argument("CZTrajectory: endpoints must sit at the idle detuning");
  }
}

CZEvolution evolve_cz(const CZTrajectory& traj, double dt_ns) {
  Mat2 u1, u2;
  subspace_propagators(traj, dt_ns, u1, u2);
  CZEvolution out;
  out.phi00 = 0.0;
  out.phi01 = std::arg(u1(0, 0));
  out.phi10 = std::arg(u1(1, 1));
  out.phi11 = std::arg(u2(0, 0));
  out.leakage = std::norm(u2(1, 0));
  out.phi_cz = wrap_angle(out.phi11 + out.phi00 - out.phi01 - out.phi10);
  return out;
}

CZTrajectory tune_cz(RampShape shape, double g_mhz, double eta_mhz,
                     double idle_detuning_mhz, double duration_ns,
                     double ramp_fraction, double target_phase, double tol_rad,
                     double dt_ns) {
  CZTrajectory traj;
  traj.duration_ns = duration_ns;
  traj.g_mhz = g_mhz;
  traj.eta_mhz = eta_mhz;
  traj.idle_detuning_mhz = idle_detuning_mhz;
  traj.shape = shape;
  traj.ramp_fraction = ramp_fraction;

  auto phase_at = [&](double hold) {
    traj.hold_detuning_mhz = hold;
    double phi = evolve_cz(traj, dt_ns).phi_cz;
    if (phi < -1e-6) phi += 2.0 * kPi;  // conditional phase accrues positive
    return phi;
  };

  // coarse scan downward from the idle point to bracket the target
  const int kScan = 96;
  double hi_hold = idle_detuning_mhz * 0.98;
  double lo_hold = -0.75 * idle_detuning_mhz;
  double prev_hold = hi_hold, prev_phi = phase_at(hi_hold);
  double best_hold = hi_hold, best_gap = std::abs(prev_phi - target_phase);
  double br_lo = 0, br_hi = 0;
  bool bracketed = false;
  for (int i = 1; i <= kScan; ++i) {
    double hold = hi_hold + (lo_hold - hi_hold) * double(i) / kScan;
    double phi = phase_at(hold);
    if (std::abs(phi - target_phase) < best_gap) {
      best_gap = std::abs(phi - target_phase);
      best_hold = hold;
    }
    if (phi < prev_phi - kPi) break;  // wrapped past 2*pi; stop the scan
    if (prev_phi < target_phase && phi >= target_phase) {
      br_lo = hold;
      br_hi = prev_hold;
      bracketed = true;
      break;
    }
    prev_hold = hold;
    prev_phi = phi;
  }
  if (!bracketed) {
    traj.hold_detuning_mhz = best_hold;
    throw NumericalError("tune_cz: target phase unreachable within family; best |phi-target| = " +
                         std::to_string(best_gap) + " rad at hold " +
                         std::to_string(best_hold) + " MHz");
  }

  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (br_lo + br_hi);
    double phi = phase_at(mid);
    if (std::abs(phi - target_phase) <= tol_rad) {
      traj.hold_detuning_mhz = mid;
      return traj;
    }
    if (phi >= target_phase)
      br_lo = mid;
    else
      br_hi = mid;
  }
  traj.hold_detuning_mhz = 0.5 * (br_lo + br_hi);
  double gap = std::abs(phase_at(traj.hold_detuning_mhz) - target_phase);
  if (gap <= tol_rad) return traj;
  throw NumericalError("tune_cz: bisection stalled at |phi-target| = " + std::to_string(gap));
}

RamseyFilterResult ramsey_error_filter(const CZTrajectory& cz, double max_delay_ns,
                                       double delay_step_ns, double dt_ns) {
  Mat2 u1, u2;
  subspace_propagators(cz, dt_ns, u1, u2);
  return run_filter(cz, u2, max_delay_ns, delay_step_ns);
}

RamseyFilterResult ramsey_error_filter_injected(double leak_population,
                                                double idle_detuning_mhz,
                                                double max_delay_ns,
                                                double delay_step_ns) {
  if (leak_population < 0 || leak_population > 1)
    throw std::invalid_argument("ramsey_error_filter_injected: bad leak population");
  CZTrajectory ref;
  ref.idle_detuning_mhz = idle_detuning_mhz;
  ref.g_mhz = 0.0;  // keep the idle propagator leak-free
  ref.eta_mhz = -200.0;
  const Complex im(0, 1);
  Mat2 u;
  double s = std::sqrt(leak_population), c = std::sqrt(1.0 - leak_population);
  u << c, -im * s, -im * s, c;
  return run_filter(ref, u, max_delay_ns, delay_step_ns);
}

void StepResponse::validate() const {
  if (!(tau1_ns > 0) || !(tau2_ns > 0))
    throw std::invalid_argument("StepResponse: timescales must be > 0");
}

std::vector<double> step_phase_response(const StepResponse& sr, double amplitude_ghz,
                                        const std::vector<double>& t_grid_ns) {
  sr.validate();
  std::vector<double> out;
  out.reserve(t_grid_ns.size());
  for (double t : t_grid_ns) {
    double integral = sr.a1 * sr.tau1_ns * (1.0 - std::exp(-t / sr.tau1_ns)) +
                      sr.a2 * sr.tau2_ns * (1.0 - std::exp(-t / sr.tau2_ns));
    out.push_back(2.0 * kPi * amplitude_ghz * integral);  // GHz * ns = rad/2pi
  }
  return out;
}

std::vector<double> filter_waveform(const std::vector<double>& w, const StepResponse& sr,
                                    double dt_ns) {
  sr.validate();
  if (dt_ns <= 0 || dt_ns > 0.5 * sr.tau2_ns)
    throw std::invalid_argument("filter_waveform: sample rate does not resolve tau2");
  double al1 = std::exp(-dt_ns / sr.tau1_ns), al2 = std::exp(-dt_ns / sr.tau2_ns);
  std::vector<double> out(w.size());
  double r1 = 0, r2 = 0, prev = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    r1 = al1 * r1 + sr.a1 * (w[i] - prev);
    r2 = al2 * r2 + sr.a2 * (w[i] - prev);
    out[i] = w[i] + r1 + r2;
    prev = w[i];
  }
  return out;
}

std::vector<double> predistort(const std::vector<double>& w, const StepResponse& sr,
                               double dt_ns) {
  sr.validate();
  if (dt_ns <= 0 || dt_ns > 0.5 * sr.tau2_ns)
    throw std::invalid_argument("predistort: sample rate does not resolve tau2");
  double gain = 1.0 + sr.a1 + sr.a2;
  if (gain <= 1e-12)
    throw std::invalid_argument("predistort: 1 + a1 + a2 <= 0, filter not invertible");
  double al1 = std::exp(-dt_ns / sr.tau1_ns), al2 = std::exp(-dt_ns / sr.tau2_ns);
  std::vector<double> out(w.size());
  double r1 = 0, r2 = 0, prev = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double x = (w[i] - al1 * r1 - al2 * r2 + (sr.a1 + sr.a2) * prev) / gain;
    r1 = al1 * r1 + sr.a1 * (x - prev);
    r2 = al2 * r2 + sr.a2 * (x - prev);
    prev = x;
    out[i] = x;
  }
  return out;
}

}  // namespace qbench
