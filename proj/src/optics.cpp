#include "hesim/optics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace hesim::optics {

namespace {

using qstate::Complex;
using qstate::ComplexMatrix;
using qstate::DensityMatrix;

constexpr double kPi = 3.14159265358979323846;

// Embeds op on one qubit slot of a state whose total dimension factors as
// 2 x (dim/2) ... ; slot 0 = signal polarization, slot 1 = idler
// polarization for both 4-dim and 16-dim layouts.
ComplexMatrix embed_pol(const JonesOperator& op, int dim, Photon photon) {
  const ComplexMatrix eye2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix pol4(4, 4);
  // Kronecker on the polarization pair.
  const ComplexMatrix& left = photon == Photon::signal ? op : eye2;
  const ComplexMatrix& right = photon == Photon::signal ? eye2 : op;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      pol4.block(i * 2, j * 2, 2, 2) = left(i, j) * right;
  if (dim == 4) return pol4;
  ComplexMatrix full = ComplexMatrix::Zero(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      full.block(i * 4, j * 4, 4, 4) =
          pol4(i, j) * ComplexMatrix::Identity(4, 4);
  return full;
}

// Scales every element whose indices differ on one binary tensor factor.
// factor counts from the left in the (2,2,...) split of dim.
ComplexMatrix dephase_factor(const ComplexMatrix& m, int factor, double v) {
  const int dim = static_cast<int>(m.rows());
  int nfac = 0;
  for (int d = dim; d > 1; d /= 2) ++nfac;
  const int shift = nfac - 1 - factor;  // bit position of the factor index
  ComplexMatrix out = m;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (((i >> shift) & 1) != ((j >> shift) & 1)) out(i, j) *= v;
  return out;
}

double phase_residual(const JonesOperator& m) {
  // min over gamma of ||m - e^{i gamma} I||_F for unitary-normed m
  const double n2 = m.squaredNorm();
  const double t = std::abs(m.trace());
  const double r2 = n2 + 2.0 - 2.0 * t;
  return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

struct Simplex {
  std::array<std::array<double, 3>, 4> x;
  std::array<double, 4> f;
};

}  // namespace

JonesOperator waveplate(const WaveplateSpec& spec) {
  if (!(spec.retardance > 0.0 && spec.retardance < 2.0 * kPi))
    throw std::invalid_argument("waveplate: retardance out of (0, 2pi)");
  const double c = std::cos(spec.fast_axis), s = std::sin(spec.fast_axis);
  JonesOperator r;
  r << c, -s, s, c;
  JonesOperator d = JonesOperator::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::exp(Complex(0.0, spec.retardance));
  return r * d * r.transpose();
}

JonesOperator half_wave_plate(double fast_axis) {
  return waveplate({kPi, fast_axis});
}

JonesOperator quarter_wave_plate(double fast_axis) {
  return waveplate({kPi / 2.0, fast_axis});
}

JonesOperator rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  JonesOperator r;
  r << c, -s, s, c;
  return r;
}

JonesOperator polarizer_projector(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  JonesOperator p;
  p << c * c, c * s, c * s, s * s;
  return p;
}

bool is_unitary(const JonesOperator& op, double tol) {
  return (op * op.adjoint() - JonesOperator::Identity()).cwiseAbs().maxCoeff() <
         tol;
}

Eigen::MatrixXcd phase_canonical(const Eigen::MatrixXcd& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      if (std::abs(z) > 1e-12) return m * (std::conj(z) / std::abs(z));
    }
  return m;
}

DensityMatrix apply_to_photon(const DensityMatrix& rho, const JonesOperator& op,
                              Photon photon) {
  if (rho.dim() != 4 && rho.dim() != 16)
    throw std::invalid_argument("apply_to_photon: state must be 4- or 16-dim");
  const ComplexMatrix full = embed_pol(op, rho.dim(), photon);
  return {full * rho.matrix * full.adjoint(), rho.basis_labels};
}

JonesOperator qhq_compensator(double q1, double h, double q2) {
  return quarter_wave_plate(q2) * half_wave_plate(h) * quarter_wave_plate(q1);
}

CompensationResult solve_compensation(const JonesOperator& target) {
  if (!is_unitary(target, 1e-8))
    throw std::invalid_argument("solve_compensation: target not unitary");

  auto objective = [&target](const std::array<double, 3>& a) {
    return phase_residual(qhq_compensator(a[0], a[1], a[2]) * target);
  };

  // Coarse grid over [0, pi)^3 (waveplate axes are pi-periodic).
  std::array<double, 3> best{0, 0, 0};
  double best_f = objective(best);
  const int n = 16;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::array<double, 3> a{i * kPi / n, j * kPi / n, k * kPi / n};
        const double f = objective(a);
        if (f < best_f) {
          best_f = f;
          best = a;
        }
      }

  // Nelder-Mead refinement.
  Simplex sp;
  const double step = kPi / n;
  for (int v = 0; v < 4; ++v) {
    sp.x[v] = best;
    if (v > 0) sp.x[v][v - 1] += step;
    sp.f[v] = objective(sp.x[v]);
  }
  for (int iter = 0; iter < 400; ++iter) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&sp](int a, int b) { return sp.f[a] < sp.f[b]; });
    Simplex ns;
    for (int v = 0; v < 4; ++v) {
      ns.x[v] = sp.x[order[v]];
      ns.f[v] = sp.f[order[v]];
    }
    sp = ns;
    if (sp.f[3] - sp.f[0] < 1e-14) break;
    std::array<double, 3> centroid{0, 0, 0};
    for (int v = 0; v < 3; ++v)
      for (int d = 0; d < 3; ++d) centroid[d] += sp.x[v][d] / 3.0;
    auto mix = [&centroid, &sp](double t) {
      std::array<double, 3> p;
      for (int d = 0; d < 3; ++d)
        p[d] = centroid[d] + t * (sp.x[3][d] - centroid[d]);
      return p;
    };
    const auto refl = mix(-1.0);
    const double f_refl = objective(refl);
    if (f_refl < sp.f[0]) {
      const auto expd = mix(-2.0);
      const double f_expd = objective(expd);
      if (f_expd < f_refl) {
        sp.x[3] = expd;
        sp.f[3] = f_expd;
      } else {
        sp.x[3] = refl;
        sp.f[3] = f_refl;
      }
    } else if (f_refl < sp.f[2]) {
      sp.x[3] = refl;
      sp.f[3] = f_refl;
    } else {
      const auto contr = mix(0.5);
      const double f_contr = objective(contr);
      if (f_contr < sp.f[3]) {
        sp.x[3] = contr;
        sp.f[3] = f_contr;
      } else {
        for (int v = 1; v < 4; ++v) {
          for (int d = 0; d < 3; ++d)
            sp.x[v][d] = sp.x[0][d] + 0.5 * (sp.x[v][d] - sp.x[0][d]);
          sp.f[v] = objective(sp.x[v]);
        }
      }
    }
  }
  {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&sp](int a, int b) { return sp.f[a] < sp.f[b]; });
    best = sp.x[order[0]];
    best_f = sp.f[order[0]];
  }

  // Gauss-Newton polish on the phase-aligned residual vector.
  auto residual_vec = [&target](const std::array<double, 3>& a,
                                Eigen::Matrix<double, 8, 1>& r) {
    JonesOperator m = qhq_compensator(a[0], a[1], a[2]) * target;
    const Complex tr = m.trace();
    if (std::abs(tr) > 1e-12) m *= std::conj(tr) / std::abs(tr);
    const JonesOperator d = m - JonesOperator::Identity();
    for (int i = 0; i < 4; ++i) {
      r(2 * i) = d(i / 2, i % 2).real();
      r(2 * i + 1) = d(i / 2, i % 2).imag();
    }
  };
  for (int gn = 0; gn < 30; ++gn) {
    Eigen::Matrix<double, 8, 1> r0;
    residual_vec(best, r0);
    if (r0.norm() < 1e-12) break;
    Eigen::Matrix<double, 8, 3> jac;
    const double h = 1e-7;
    for (int d = 0; d < 3; ++d) {
      auto ap = best, am = best;
      ap[d] += h;
      am[d] -= h;
      Eigen::Matrix<double, 8, 1> rp, rm;
      residual_vec(ap, rp);
      residual_vec(am, rm);
      jac.col(d) = (rp - rm) / (2.0 * h);
    }
    const Eigen::Vector3d delta =
        jac.colPivHouseholderQr().solve(-r0);
    std::array<double, 3> trial = best;
    for (int d = 0; d < 3; ++d) trial[d] += delta(d);
    if (objective(trial) < objective(best))
      best = trial;
    else
      break;
  }

  best_f = objective(best);
  if (best_f >= 1e-6)
    throw std::runtime_error(
        "solve_compensation: did not converge, residual = " +
        std::to_string(best_f));
  auto wrap = [](double a) {
    a = std::fmod(a, kPi);
    return a < 0.0 ? a + kPi : a;
  };
  return {wrap(best[0]), wrap(best[1]), wrap(best[2]), best_f};
}

void validate(const DelayLineSpec& spec) {
  if (!(spec.delay_ns > 0.0))
    throw std::invalid_argument("delay line: delay_ns must be > 0");
  if (!(spec.throughput >= 0.0 && spec.throughput <= 1.0))
    throw std::invalid_argument("delay line: throughput out of [0,1]");
  if (!(spec.pol_dephasing_V >= 0.0 && spec.pol_dephasing_V <= 1.0) ||
      !(spec.et_dephasing_V >= 0.0 && spec.et_dephasing_V <= 1.0))
    throw std::invalid_argument("delay line: dephasing parameter out of [0,1]");
  if (spec.n_reflections < 0)
    throw std::invalid_argument("delay line: n_reflections must be >= 0");
  if (!is_unitary(spec.pol_rotation, 1e-8))
    throw std::invalid_argument("delay line: pol_rotation must be unitary");
}

ChannelOutput delay_line_channel(const DensityMatrix& rho,
                                 const DelayLineSpec& spec) {
  validate(spec);
  if (rho.dim() != 4 && rho.dim() != 16)
    throw std::invalid_argument("delay_line_channel: state must be 4- or 16-dim");
  DensityMatrix out = apply_to_photon(rho, spec.pol_rotation, Photon::signal);
  // Factor layout: (signal pol, idler pol[, signal bin, idler bin])
  out.matrix = dephase_factor(out.matrix, 0, spec.pol_dephasing_V);
  if (rho.dim() == 16)
    out.matrix = dephase_factor(out.matrix, 2, spec.et_dephasing_V);
  const double tr = out.matrix.trace().real();
  if (tr > 0.0) out.matrix /= tr;
  return {std::move(out), spec.throughput};
}

double delay_from_geometry(double segment_length_m, int n_reflections) {
  if (segment_length_m <= 0.0)
    throw std::invalid_argument("delay_from_geometry: length must be > 0");
  if (n_reflections < 0)
    throw std::invalid_argument("delay_from_geometry: reflections must be >= 0");
  return n_reflections * segment_length_m / kSpeedOfLightMPerNs;
}

}  // namespace hesim::optics
