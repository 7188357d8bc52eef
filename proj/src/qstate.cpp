#include "hesim/qstate.hpp"

#include <cmath>
#include <stdexcept>

namespace hesim::qstate {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const Complex kI{0.0, 1.0};

Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eig(
    const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  return solver;
}

// Clips tiny negative eigenvalues; rejects anything below -1e-8.
ComplexMatrix matrix_sqrt_physical(const ComplexMatrix& m, const char* what) {
  auto solver = hermitian_eig(m);
  Eigen::VectorXd ev = solver.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-8)
      throw std::invalid_argument(std::string(what) +
                                  ": non-physical input (eigenvalue " +
                                  std::to_string(ev(i)) + ")");
    if (ev(i) < 0.0) ev(i) = 0.0;
    ev(i) = std::sqrt(ev(i));
  }
  return solver.eigenvectors() * ev.asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace

const char* to_string(Pol p) {
  switch (p) {
    case Pol::H: return "H";
    case Pol::V: return "V";
    case Pol::D: return "D";
    case Pol::A: return "A";
    case Pol::R: return "R";
    case Pol::L: return "L";
  }
  return "?";
}

std::optional<Pol> pol_from_string(std::string_view s) {
  if (s == "H") return Pol::H;
  if (s == "V") return Pol::V;
  if (s == "D") return Pol::D;
  if (s == "A") return Pol::A;
  if (s == "R") return Pol::R;
  if (s == "L") return Pol::L;
  return std::nullopt;
}

bool DensityMatrix::is_physical(double herm_tol, double trace_tol,
                                double eig_floor) const {
  if (matrix.rows() != matrix.cols()) return false;
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    return false;
  if (std::abs(matrix.trace().real() - 1.0) > trace_tol ||
      std::abs(matrix.trace().imag()) > trace_tol)
    return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix);
  if (solver.info() != Eigen::Success) return false;
  return solver.eigenvalues().minCoeff() >= -eig_floor;
}

PureState ket(Pol label) {
  ComplexVector v(2);
  switch (label) {
    case Pol::H: v << 1.0, 0.0; break;
    case Pol::V: v << 0.0, 1.0; break;
    case Pol::D: v << kInvSqrt2, kInvSqrt2; break;
    case Pol::A: v << kInvSqrt2, -kInvSqrt2; break;
    case Pol::R: v << kInvSqrt2, kI * kInvSqrt2; break;
    case Pol::L: v << kInvSqrt2, -kI * kInvSqrt2; break;
  }
  return {v};
}

PureState ket(TimeBin label) {
  ComplexVector v(2);
  if (label == TimeBin::S)
    v << 1.0, 0.0;
  else
    v << 0.0, 1.0;
  return {v};
}

PureState tensor(const PureState& a, const PureState& b) {
  const int da = a.dim(), db = b.dim();
  ComplexVector out(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) out(i * db + j) = a.amplitudes(i) * b.amplitudes(j);
  return {out};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const int da = a.dim(), db = b.dim();
  ComplexMatrix out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l)
          out(i * db + k, j * db + l) = a.matrix(i, j) * b.matrix(k, l);
  std::vector<std::string> labels;
  if (a.basis_labels.size() == static_cast<size_t>(da) &&
      b.basis_labels.size() == static_cast<size_t>(db)) {
    labels.reserve(static_cast<size_t>(da) * db);
    for (const auto& la : a.basis_labels)
      for (const auto& lb : b.basis_labels) labels.push_back(la + lb);
  }
  return {out, std::move(labels)};
}

PureState bell_pol(double theta) {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = kInvSqrt2;
  v(3) = std::exp(kI * theta) * kInvSqrt2;
  return {v};
}

PureState bell_timebin(double phi) {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = kInvSqrt2;
  v(3) = std::exp(kI * phi) * kInvSqrt2;
  return {v};
}

PureState hyper_state(double theta, double phi) {
  return tensor(bell_pol(theta), bell_timebin(phi));
}

DensityMatrix projector(const PureState& psi,
                        std::vector<std::string> basis_labels) {
  ComplexMatrix m = psi.amplitudes * psi.amplitudes.adjoint();
  return {std::move(m), std::move(basis_labels)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  int d1 = 0, d2 = 0;
  switch (rho.dim()) {
    case 4: d1 = d2 = 2; break;
    case 16: d1 = d2 = 4; break;
    default:
      throw std::invalid_argument(
          "partial_trace: dimension " + std::to_string(rho.dim()) +
          " has no square subsystem split");
  }
  const int dk = keep == Subsystem::first ? d1 : d2;
  const int dt = keep == Subsystem::first ? d2 : d1;
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j)
      for (int k = 0; k < dt; ++k) {
        if (keep == Subsystem::first)
          out(i, j) += rho.matrix(i * dt + k, j * dt + k);
        else
          out(i, j) += rho.matrix(k * dk + i, k * dk + j);
      }

  std::vector<std::string> labels;
  if (rho.basis_labels.size() == static_cast<size_t>(rho.dim())) {
    // Labels are factor concatenations of equal halves when derivable.
    const size_t len = rho.basis_labels.front().size();
    if (len % 2 == 0) {
      bool ok = true;
      for (const auto& l : rho.basis_labels) ok = ok && l.size() == len;
      if (ok) {
        const size_t half = len / 2;
        for (int i = 0; i < dk; ++i) {
          const auto& src = keep == Subsystem::first
                                ? rho.basis_labels[static_cast<size_t>(i) * dt]
                                : rho.basis_labels[static_cast<size_t>(i)];
          labels.push_back(keep == Subsystem::first ? src.substr(0, half)
                                                    : src.substr(half));
        }
      }
    }
  }
  return {out, std::move(labels)};
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const ComplexMatrix sa = matrix_sqrt_physical(a.matrix, "fidelity");
  const ComplexMatrix inner = sa * b.matrix * sa;
  auto solver = hermitian_eig((inner + inner.adjoint()) * 0.5);
  double tr = 0.0;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    double ev = solver.eigenvalues()(i);
    if (ev < -1e-8)
      throw std::invalid_argument("fidelity: non-physical input");
    if (ev > 0.0) tr += std::sqrt(ev);
  }
  const double f = tr * tr;
  return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix * rho.matrix).trace().real();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  auto solver = hermitian_eig(a.matrix - b.matrix);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

DensityMatrix noisy_state(const PureState& pure, double visibility,
                          NoiseModel model) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("noisy_state: visibility out of [0,1]");
  const int d = pure.dim();
  const ComplexMatrix proj = pure.amplitudes * pure.amplitudes.adjoint();
  ComplexMatrix out;
  if (model == NoiseModel::dephasing) {
    ComplexMatrix diag = proj.diagonal().asDiagonal();
    out = visibility * proj + (1.0 - visibility) * diag;
  } else {
    out = visibility * proj +
          (1.0 - visibility) / d * ComplexMatrix::Identity(d, d);
  }
  std::vector<std::string> labels;
  if (d == 4) labels = pol_pair_labels();
  if (d == 16) labels = hyper_labels();
  return {out, std::move(labels)};
}

std::vector<std::string> pol_labels() { return {"H", "V"}; }

std::vector<std::string> pol_pair_labels() { return {"HH", "HV", "VH", "VV"}; }

std::vector<std::string> timebin_pair_labels() {
  return {"SS", "SL", "LS", "LL"};
}

std::vector<std::string> hyper_labels() {
  std::vector<std::string> out;
  for (const auto& p : pol_pair_labels())
    for (const auto& t : timebin_pair_labels()) out.push_back(p + t);
  return out;
}

nlohmann::json to_json(const DensityMatrix& rho) {
  const int d = rho.dim();
  std::vector<double> re, im;
  re.reserve(static_cast<size_t>(d) * d);
  im.reserve(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      re.push_back(rho.matrix(i, j).real());
      im.push_back(rho.matrix(i, j).imag());
    }
  return {{"dim", d},
          {"basis_labels", rho.basis_labels},
          {"re", re},
          {"im", im}};
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  const int d = j.at("dim").get<int>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (d <= 0 || re.size() != static_cast<size_t>(d) * d || im.size() != re.size())
    throw std::invalid_argument("density matrix JSON: bad dimensions");
  DensityMatrix rho;
  rho.matrix.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j2 = 0; j2 < d; ++j2)
      rho.matrix(i, j2) = Complex(re[static_cast<size_t>(i) * d + j2],
                                  im[static_cast<size_t>(i) * d + j2]);
  if (j.contains("basis_labels"))
    rho.basis_labels = j.at("basis_labels").get<std::vector<std::string>>();
  return rho;
}

}  // namespace hesim::qstate
