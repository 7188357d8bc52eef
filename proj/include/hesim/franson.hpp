#pragma once

#include <optional>
#include <vector>

#include "hesim/qstate.hpp"

namespace hesim::franson {

struct InterferometerSpec {
  double path_imbalance_ps = 2000.0;  // not a measured value; see README
  double contrast = 0.951;
  double phase_offset = 0.0;
  double lambda_s_nm = 780.0;
  double lambda_i_nm = 842.6;
};

struct FringePoint {
  double mirror_displacement_nm;
  double two_photon_phase_rad;
  double normalized_coincidences;
};

// Mirror displacement x adds 2x of round-trip path:
// dphi = 4 pi x (1/lambda_s + 1/lambda_i)
double two_photon_phase(double x_nm, double lambda_s_nm, double lambda_i_nm);

struct PeakWeights {
  double early, central, late;  // SL, {SS,LL}, LS path classes
};

// Relative coincidence weights (1, 2(1 + C V cos dphi), 1), normalized to
// sum 1. early/late come from the distinguishable SL/LS paths.
PeakWeights peak_weights(double delta_phi, double source_V, double contrast);

struct EtCoherence {
  double visibility;  // 2 |<SS|rho_E|LL>|
  double phase;       // arg <SS|rho_E|LL>
};

// Energy-time coherence of the reduced time-bin state of a 16-dim state.
EtCoherence et_coherence(const qstate::DensityMatrix& state);

struct PolProjection {
  double signal_angle;
  double idler_angle;
};

// Normalized central-window coincidences vs mirror displacement:
//   n(x) = (1 + V_eff cos(dphi(x) + phase_offset + coherence phase)) / 2
//   V_eff = contrast * et coherence visibility of the (projected) state
std::vector<FringePoint> fringe_scan(
    const qstate::DensityMatrix& state, const InterferometerSpec& spec,
    const std::vector<double>& displacements_nm,
    std::optional<PolProjection> pol_projection = std::nullopt);

void validate(const InterferometerSpec& spec);

}  // namespace hesim::franson
