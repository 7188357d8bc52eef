#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hesim::qstate {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Polarization basis convention used throughout:
//   H=(1,0) V=(0,1) D=(H+V)/sqrt2 A=(H-V)/sqrt2 R=(H+iV)/sqrt2 L=(H-iV)/sqrt2
// Tensor ordering: (signal, idler) for photon pairs, and
// (polarization pair, time-bin pair) for the 16-dim joint space.
enum class Pol { H, V, D, A, R, L };
enum class TimeBin { S, L };

const char* to_string(Pol p);
std::optional<Pol> pol_from_string(std::string_view s);

struct PureState {
  ComplexVector amplitudes;

  int dim() const { return static_cast<int>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
};

// Open struct: operations that return conditional (projected) states document
// when the trace is < 1. is_physical() checks the full invariant set.
struct DensityMatrix {
  ComplexMatrix matrix;
  std::vector<std::string> basis_labels;

  int dim() const { return static_cast<int>(matrix.rows()); }
  double trace_real() const { return matrix.trace().real(); }
  bool is_physical(double herm_tol = 1e-10, double trace_tol = 1e-10,
                   double eig_floor = 1e-10) const;
};

PureState ket(Pol label);
PureState ket(TimeBin label);

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// (|HH> + e^{i theta}|VV>)/sqrt2 in basis order HH,HV,VH,VV.
PureState bell_pol(double theta);
// (|SS> + e^{i phi}|LL>)/sqrt2 in basis order SS,SL,LS,LL.
PureState bell_timebin(double phi);
// bell_pol(theta) (x) bell_timebin(phi), dim 16.
PureState hyper_state(double theta, double phi);

DensityMatrix projector(const PureState& psi,
                        std::vector<std::string> basis_labels = {});

enum class Subsystem { first, second };

// Reduces over one factor of the square split (4 -> 2x2, 16 -> 4x4).
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 via eigendecomposition
// square roots. Eigenvalues in (-1e-8, 0) are clipped to 0; below that the
// input is rejected as non-physical.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

double purity(const DensityMatrix& rho);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

enum class NoiseModel { dephasing, depolarizing };

// dephasing:    V |psi><psi| + (1-V) diag(|psi><psi|)
// depolarizing: V |psi><psi| + (1-V) I/dim
DensityMatrix noisy_state(const PureState& pure, double visibility,
                          NoiseModel model);

// Canonical basis label sets.
std::vector<std::string> pol_labels();           // H V
std::vector<std::string> pol_pair_labels();      // HH HV VH VV
std::vector<std::string> timebin_pair_labels();  // SS SL LS LL
std::vector<std::string> hyper_labels();         // HHSS ... VVLL

// JSON schema: {dim, basis_labels, re: row-major, im: row-major}
nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

}  // namespace hesim::qstate
