#include "pacrb/crb.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pacrb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Projected Jacobian columns, flattened to real vectors of length 2N.
struct ProjectedJacobian {
  std::vector<double> x;  ///< g_theta minus its complex projection onto g
  std::vector<double> y;  ///< g_r     minus its complex projection onto g
  double norm_gt_sq = 0.0;
  double norm_gr_sq = 0.0;
};

ProjectedJacobian project_jacobian(const SteeringVector& g,
                                   const SteeringVector& g_theta,
                                   const SteeringVector& g_r) {
  if (g.size() != g_theta.size() || g.size() != g_r.size()) {
    throw std::invalid_argument("isk_terms: mismatched vector lengths");
  }
  double norm_g_sq = 0.0;
  cdouble u{0.0, 0.0};  // g^H g_theta
  cdouble v{0.0, 0.0};  // g^H g_r
  for (std::size_t n = 0; n < g.size(); ++n) {
    norm_g_sq += std::norm(g[n]);
    u += std::conj(g[n]) * g_theta[n];
    v += std::conj(g[n]) * g_r[n];
  }
  if (!(norm_g_sq > 0.0)) {
    throw std::domain_error("isk_terms: degenerate observation, ||g|| = 0");
  }
  const cdouble cu = u / norm_g_sq;
  const cdouble cv = v / norm_g_sq;

  ProjectedJacobian out;
  const std::size_t n_elems = g.size();
  out.x.resize(2 * n_elems);
  out.y.resize(2 * n_elems);
  for (std::size_t n = 0; n < n_elems; ++n) {
    const cdouble xn = g_theta[n] - cu * g[n];
    const cdouble yn = g_r[n] - cv * g[n];
    out.x[n] = xn.real();
    out.x[n + n_elems] = xn.imag();
    out.y[n] = yn.real();
    out.y[n + n_elems] = yn.imag();
    out.norm_gt_sq += std::norm(g_theta[n]);
    out.norm_gr_sq += std::norm(g_r[n]);
  }
  return out;
}

IskTerms isk_from_projection(const ProjectedJacobian& pj) {
  IskTerms t{0.0, 0.0, 0.0, 0.0};
  const std::size_t d = pj.x.size();
  for (std::size_t p = 0; p < d; ++p) {
    t.i += pj.x[p] * pj.x[p];
    t.s += pj.y[p] * pj.y[p];
    t.k += pj.x[p] * pj.y[p];
  }
  // Gram determinant by Cauchy-Binet: i*s - k^2 = sum over p < q of the
  // squared 2x2 minors. Avoids the cancellation between k^2 and i*s.
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = p + 1; q < d; ++q) {
      const double minor = pj.x[p] * pj.y[q] - pj.x[q] * pj.y[p];
      t.schur_det += minor * minor;
    }
  }
  return t;
}

bool degenerate(const IskTerms& t, double norm_gt_sq, double norm_gr_sq) {
  // Relative test with an absolute floor scaled by the Jacobian magnitudes,
  // so exact plane-wave collapse (i = s = k = 0) is still flagged.
  const double floor = 1e-24 * norm_gt_sq * norm_gr_sq;
  return t.schur_det <= kDegeneracyDelta * std::max(t.i * t.s, floor);
}

// ---------------------------------------------------------------------------
// Quad-precision 4x4 FIM oracle. Only field arithmetic is needed, so plain
// __float128 suffices without libquadmath.

struct QComplex {
  __float128 re;
  __float128 im;
};

QComplex qc(const cdouble& z) {
  return {static_cast<__float128>(z.real()), static_cast<__float128>(z.imag())};
}

QComplex qmul(const QComplex& a, const QComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

QComplex qscale(const QComplex& a, __float128 s) { return {a.re * s, a.im * s}; }

/// Re of the inner product sum_n a_n conj(b_n).
__float128 qdot_re(const std::vector<QComplex>& a,
                   const std::vector<QComplex>& b) {
  __float128 acc = 0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    acc += a[n].re * b[n].re + a[n].im * b[n].im;
  }
  return acc;
}

}  // namespace

SensingBudget::SensingBudget(double p, cdouble k, double tp, double b,
                             double n0)
    : power(p), kappa(k), pulse_time(tp), bandwidth(b), noise_psd(n0) {
  if (!(power > 0.0)) throw std::invalid_argument("SensingBudget: P must be > 0");
  if (!(pulse_time > 0.0)) {
    throw std::invalid_argument("SensingBudget: T_p must be > 0");
  }
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("SensingBudget: B must be > 0");
  }
  if (!(noise_psd > 0.0)) {
    throw std::invalid_argument("SensingBudget: N_0 must be > 0");
  }
  if (!(std::norm(kappa) > 0.0)) {
    throw std::invalid_argument("SensingBudget: kappa must be nonzero");
  }
}

IskTerms isk_terms(const SteeringVector& g, const SteeringVector& g_theta,
                   const SteeringVector& g_r) {
  return isk_from_projection(project_jacobian(g, g_theta, g_r));
}

CrbReport closed_form_crb(const TransmitterLayout& tx,
                          const ReceiverLayout& rx, const Target& target,
                          const SensingBudget& budget) {
  const ObservationModel obs = observation(tx, rx, target);
  const ObservationJacobian jac = observation_jacobian(tx, rx, target);
  const ProjectedJacobian pj = project_jacobian(obs.g, jac.g_theta, jac.g_r);
  const IskTerms t = isk_from_projection(pj);

  CrbReport rep;
  rep.i = t.i;
  rep.s = t.s;
  rep.k = t.k;
  rep.schur_det = t.schur_det;
  if (degenerate(t, pj.norm_gt_sq, pj.norm_gr_sq)) {
    rep.divergent = true;
    rep.crb_theta = kInf;
    rep.crb_r = kInf;
    return rep;
  }
  const double pre = budget.noise_variance() /
                     (2.0 * budget.time_bandwidth() * budget.rho_squared());
  rep.crb_theta = pre * t.s / t.schur_det;
  rep.crb_r = pre * t.i / t.schur_det;
  return rep;
}

CrbReport numerical_fim_crb(const TransmitterLayout& tx,
                            const ReceiverLayout& rx, const Target& target,
                            const SensingBudget& budget) {
  const ObservationModel obs = observation(tx, rx, target);
  const ObservationJacobian jac = observation_jacobian(tx, rx, target);

  const std::size_t n_elems = obs.g.size();
  const QComplex rho = qmul(qc(budget.kappa),
                            {static_cast<__float128>(
                                 std::sqrt(budget.pulse_time * budget.power)),
                             0});
  const __float128 c =
      static_cast<__float128>(std::sqrt(budget.pulse_time * budget.power));

  // Rows of dw/dz for z = [theta, r, kappa_re, kappa_im], w = rho * g.
  std::vector<QComplex> rows[4];
  for (auto& row : rows) row.resize(n_elems);
  for (std::size_t n = 0; n < n_elems; ++n) {
    rows[0][n] = qmul(rho, qc(jac.g_theta[n]));
    rows[1][n] = qmul(rho, qc(jac.g_r[n]));
    rows[2][n] = qscale(qc(obs.g[n]), c);
    const QComplex gq = qc(obs.g[n]);
    rows[3][n] = {-gq.im * c, gq.re * c};  // j * c * g_n
  }

  __float128 V[4][4];
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      V[a][b] = qdot_re(rows[a], rows[b]);
      V[b][a] = V[a][b];
    }
  }

  CrbReport rep;
  const double rho_sq = budget.rho_squared();

  // Pi22 is diagonal: Re{<c g, j c g>} = 0.
  const __float128 p22_0 = V[2][2];
  const __float128 p22_1 = V[3][3];
  if (!(static_cast<double>(p22_0) > 0.0) ||
      !(static_cast<double>(p22_1) > 0.0)) {
    rep.divergent = true;
    rep.crb_theta = kInf;
    rep.crb_r = kInf;
    return rep;
  }

  __float128 Q[2][2];
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Q[a][b] = V[a][b] - V[a][2] * V[b][2] / p22_0 - V[a][3] * V[b][3] / p22_1;
    }
  }
  const __float128 det_q = Q[0][0] * Q[1][1] - Q[0][1] * Q[1][0];

  rep.i = static_cast<double>(Q[0][0]) / rho_sq;
  rep.s = static_cast<double>(Q[1][1]) / rho_sq;
  rep.k = static_cast<double>(Q[0][1]) / rho_sq;
  rep.schur_det = static_cast<double>(det_q) / (rho_sq * rho_sq);

  // Conditioning guard on the symmetric 2x2 Q.
  const double q00 = static_cast<double>(Q[0][0]);
  const double q11 = static_cast<double>(Q[1][1]);
  const double det_d = static_cast<double>(det_q);
  bool singular = !(det_d > 0.0);
  if (!singular) {
    const double tr = q00 + q11;
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det_d, 0.0));
    const double lam_min = (tr - disc) / 2.0;
    const double lam_max = (tr + disc) / 2.0;
    singular = !(lam_min > 0.0) || lam_max / lam_min > 1e12;
  }
  if (singular) {
    rep.divergent = true;
    rep.crb_theta = kInf;
    rep.crb_r = kInf;
    return rep;
  }

  const __float128 scale =
      static_cast<__float128>(budget.noise_variance()) /
      (2 * static_cast<__float128>(budget.time_bandwidth()));
  rep.crb_theta = static_cast<double>(Q[1][1] / det_q * scale);
  rep.crb_r = static_cast<double>(Q[0][0] / det_q * scale);
  return rep;
}

}  // namespace pacrb
