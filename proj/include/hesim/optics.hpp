#pragma once

#include <Eigen/Dense>

#include "hesim/qstate.hpp"

namespace hesim::optics {

using JonesOperator = Eigen::Matrix2cd;

inline constexpr double kSpeedOfLightMPerNs = 0.299792458;

// retardance pi -> half-wave, pi/2 -> quarter-wave; fast_axis from horizontal.
struct WaveplateSpec {
  double retardance;
  double fast_axis;
};

// J(delta, theta) = R(theta) diag(1, e^{i delta}) R(-theta)
JonesOperator waveplate(const WaveplateSpec& spec);
JonesOperator half_wave_plate(double fast_axis);
JonesOperator quarter_wave_plate(double fast_axis);
JonesOperator rotation(double angle);

// Rank-1 projector onto cos(angle)|H> + sin(angle)|V>. Not unitary.
JonesOperator polarizer_projector(double angle);

bool is_unitary(const JonesOperator& op, double tol = 1e-10);

// Global-phase canonical form: first nonzero entry (row-major scan) made
// real-positive. Used before all up-to-phase comparisons.
Eigen::MatrixXcd phase_canonical(const Eigen::MatrixXcd& m);

enum class Photon { signal, idler };

// (op x I...) rho (op x I...)^dagger with op on the chosen photon's
// polarization slot of a 4-dim or 16-dim state. Unnormalized when op is a
// projector; the trace is the detection probability.
qstate::DensityMatrix apply_to_photon(const qstate::DensityMatrix& rho,
                                      const JonesOperator& op, Photon photon);

// waveplate(pi/2, q2) * waveplate(pi, h) * waveplate(pi/2, q1)
JonesOperator qhq_compensator(double q1, double h, double q2);

struct CompensationResult {
  double q1, h, q2;
  double residual;  // min over global phase of ||qhq * target - e^{ig} I||_F
};

// Finds waveplate angles whose compensator inverts `target` up to a global
// phase. Coarse 16^3 grid, Nelder-Mead, then Gauss-Newton polish; throws if
// the residual stays above 1e-6.
CompensationResult solve_compensation(const JonesOperator& target);

struct DelayLineSpec {
  double delay_ns = 647.0;
  int n_reflections = 160;
  double throughput = 0.739;
  JonesOperator pol_rotation = JonesOperator::Identity();
  double pol_dephasing_V = 1.0;
  double et_dephasing_V = 1.0;
};

struct ChannelOutput {
  qstate::DensityMatrix state;
  double survival;
};

// Signal-arm channel: applies pol_rotation to the signal polarization,
// scales signal polarization coherences by pol_dephasing_V and signal
// time-bin coherences by et_dephasing_V. Loss is reported as `survival`
// (= throughput), not folded into the state.
ChannelOutput delay_line_channel(const qstate::DensityMatrix& rho,
                                 const DelayLineSpec& spec);

// n * L / c in nanoseconds.
double delay_from_geometry(double segment_length_m, int n_reflections);

void validate(const DelayLineSpec& spec);

}  // namespace hesim::optics
