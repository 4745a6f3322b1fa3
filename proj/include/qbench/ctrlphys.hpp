#pragma once

#include <vector>

#include "qbench/linalg.hpp"

namespace qbench {

// Two-level-subspace model of the adiabatic CZ. The trajectory is the
// splitting Delta(t) between the diabatic |11> and |02> levels (MHz); it
// starts and ends at the idle splitting and dips toward the crossing at
// Delta = 0. Coupling normalization in this module: the |11>/|02> coupling
// matrix element is sqrt(2) g / 2, i.e. the avoided-crossing gap at
// resonance is sqrt(2) g. The {|01>,|10>} subspace couples with g/2 at the
// qubit-qubit detuning Delta(t) - eta.
enum class RampShape { RaisedCosine, Tanh, Square };

struct CZTrajectory {
  double duration_ns = 43;
  double g_mhz = 30;
  double eta_mhz = -200;            // nonlinearity, negative
  double idle_detuning_mhz = 600;   // Delta at the endpoints
  double hold_detuning_mhz = 0;     // Delta during the hold
  RampShape shape = RampShape::RaisedCosine;
  double ramp_fraction = 0.3;       // per side, of the total duration

  double detuning_at(double t_ns) const;
  void validate() const;
};

struct CZEvolution {
  double leakage = 0;  // final |02> population
  double phi00 = 0, phi01 = 0, phi10 = 0, phi11 = 0;
  double phi_cz = 0;   // wrap(phi11 + phi00 - phi01 - phi10)
};

// Piecewise-constant propagators (exact 2x2 exponentials) at step dt over
// the two decoupled subspaces. Throws if dt is too coarse or unitarity
// drifts beyond 1e-8.
CZEvolution evolve_cz(const CZTrajectory& traj, double dt_ns = 0.01);

// Bisection over the hold depth so the conditional phase hits the target
// (default pi) within tol. Throws with the best found trajectory description
// if the family cannot reach the target.
CZTrajectory tune_cz(RampShape shape, double g_mhz, double eta_mhz,
                     double idle_detuning_mhz, double duration_ns,
                     double ramp_fraction = 0.3, double target_phase = kPi,
                     double tol_rad = 1e-3, double dt_ns = 0.01);

struct RamseyFilterResult {
  std::vector<double> delays_ns;
  std::vector<double> p11;
  double delta_p = 0;        // peak-to-peak fringe amplitude
  double leak_estimate = 0;  // delta_p / 4
  double period_ns = 0;      // dominant fringe period
};

// |11>, two CZ pulses separated by a variable delay; the fringe amplitude in
// the returned probability measures the per-gate leakage as delta_p/4. The
// fringe oscillates at the idle |11>/|02> splitting.
RamseyFilterResult ramsey_error_filter(const CZTrajectory& cz, double max_delay_ns,
                                       double delay_step_ns, double dt_ns = 0.01);

// Same interference pipeline but with a synthetic gate of known leakage L,
// for validating the delta_p/4 estimator.
RamseyFilterResult ramsey_error_filter_injected(double leak_population,
                                                double idle_detuning_mhz,
                                                double max_delay_ns,
                                                double delay_step_ns);

// Z-line settling model: after a step, the control ripples as
// a1 exp(-t/tau1) + a2 exp(-t/tau2) (fractions of the step amplitude).
struct StepResponse {
  double a1 = 0, a2 = 0;
  double tau1_ns = 100, tau2_ns = 5;
  void validate() const;
};

// Qubit phase after a step of `amplitude_ghz` ends:
// phi(t) = 2 pi A int_0^t ripple. Analytic, evaluated on the grid.
std::vector<double> step_phase_response(const StepResponse& sr, double amplitude_ghz,
                                        const std::vector<double>& t_grid_ns);

// Apply the two-exponential settling filter to a sampled waveform
// (zero-order hold, exact per-sample recursion).
std::vector<double> filter_waveform(const std::vector<double>& w,
                                    const StepResponse& sr, double dt_ns);

// Exact inverse of filter_waveform: filter(predistort(w)) == w. Throws when
// 1 + a1 + a2 <= 0 (no instantaneous inverse).
std::vector<double> predistort(const std::vector<double>& w,
                               const StepResponse& sr, double dt_ns);

}  // namespace qbench
