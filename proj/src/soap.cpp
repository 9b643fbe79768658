#include "mlipuq/soap.hpp"

#include <algorithm>
#include <cmath>

#include "mlipuq/errors.hpp"

namespace mlipuq {

namespace {

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1],
// computed by Newton iteration on the Legendre recurrence.
void gauss_legendre(int n, Eigen::VectorXd &x, Eigen::VectorXd &w) {
  x.resize(n);
  w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// Integral of r^2 exp(-c r^2) over [0, R], closed form.
double truncated_second_moment(double c, double R) {
  const double sc = std::sqrt(c);
  return std::sqrt(M_PI) * std::erf(sc * R) / (4.0 * c * sc) -
         R * std::exp(-c * R * R) / (2.0 * c);
}

constexpr int kQuadPoints = 128;
constexpr double kCentralAtomRadius = 1e-12;

}  // namespace

void SoapConfig::validate() const {
  if (!(r_cut > 0.0) || !std::isfinite(r_cut))
    throw ContractViolation("SoapConfig: r_cut must be positive and finite");
  if (n_max < 1) throw ContractViolation("SoapConfig: n_max must be >= 1");
  if (l_max < 0) throw ContractViolation("SoapConfig: l_max must be >= 0");
  if (!(sigma_atom > 0.0) || !std::isfinite(sigma_atom))
    throw ContractViolation("SoapConfig: sigma_atom must be positive and finite");
  if (species.empty())
    throw ContractViolation("SoapConfig: species list must be non-empty");
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (species[i] < 1)
      throw ContractViolation("SoapConfig: species must be atomic numbers >= 1");
    if (i > 0 && species[i] <= species[i - 1])
      throw ContractViolation("SoapConfig: species must be strictly increasing");
  }
}

Eigen::VectorXd real_spherical_harmonics(int l_max, const Eigen::Vector3d &unit) {
  if (l_max < 0) throw ContractViolation("real_spherical_harmonics: l_max < 0");
  const double ct = unit.z();                    // cos(theta)
  const double st = std::hypot(unit.x(), unit.y()); // sin(theta) >= 0
  double cp = 1.0, sp = 0.0;                     // cos(phi), sin(phi)
  if (st > 0.0) {
    cp = unit.x() / st;
    sp = unit.y() / st;
  }

  // Associated Legendre values P_l^m(ct) without the Condon-Shortley phase,
  // stored at l*(l+1)/2 + m.
  const int np = (l_max + 1) * (l_max + 2) / 2;
  Eigen::VectorXd plm(np);
  auto P = [&plm](int l, int m) -> double & { return plm[l * (l + 1) / 2 + m]; };
  P(0, 0) = 1.0;
  for (int m = 1; m <= l_max; ++m) P(m, m) = (2.0 * m - 1.0) * st * P(m - 1, m - 1);
  for (int m = 0; m < l_max; ++m) P(m + 1, m) = (2.0 * m + 1.0) * ct * P(m, m);
  for (int m = 0; m <= l_max; ++m)
    for (int l = m + 2; l <= l_max; ++l)
      P(l, m) = ((2.0 * l - 1.0) * ct * P(l - 1, m) - (l - 1.0 + m) * P(l - 2, m)) /
                (l - m);

  // cos(m phi) and sin(m phi) by the angle-addition recurrence.
  Eigen::VectorXd cmp(l_max + 1), smp(l_max + 1);
  cmp[0] = 1.0;
  smp[0] = 0.0;
  for (int m = 1; m <= l_max; ++m) {
    cmp[m] = cmp[m - 1] * cp - smp[m - 1] * sp;
    smp[m] = smp[m - 1] * cp + cmp[m - 1] * sp;
  }

  Eigen::VectorXd y((l_max + 1) * (l_max + 1));
  for (int l = 0; l <= l_max; ++l) {
    for (int m = 0; m <= l; ++m) {
      double ratio = 1.0;  // (l-m)! / (l+m)!
      for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
      const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI) * ratio);
      const double base = norm * P(l, m);
      if (m == 0) {
        y[l * l + l] = base;
      } else {
        y[l * l + l + m] = M_SQRT2 * base * cmp[m];
        y[l * l + l - m] = M_SQRT2 * base * smp[m];
      }
    }
  }
  return y;
}

double scaled_bessel_i(int l, double x) {
  if (l < 0 || x < 0.0 || !std::isfinite(x))
    throw ContractViolation("scaled_bessel_i: requires l >= 0 and finite x >= 0");
  if (x > l + 10.0) {
    // Closed forms plus upward recurrence, stable when x clearly exceeds l.
    const double e = std::exp(-2.0 * x);
    double im1 = (1.0 - e) / (2.0 * x);                              // l = 0
    if (l == 0) return im1;
    double i0 = ((x - 1.0) + (x + 1.0) * e) / (2.0 * x * x);         // l = 1
    for (int k = 1; k < l; ++k) {
      const double next = im1 - (2.0 * k + 1.0) / x * i0;
      im1 = i0;
      i0 = next;
    }
    return i0;
  }
  // Power series with strictly positive terms; no cancellation.
  double dfact = 1.0;  // (2l+1)!!
  for (int k = 3; k <= 2 * l + 1; k += 2) dfact *= k;
  double term = 1.0 / dfact;
  double sum = term;
  const double x2 = x * x;
  for (int k = 0; k < 500; ++k) {
    term *= x2 / (2.0 * (k + 1.0) * (2.0 * l + 2.0 * k + 3.0));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return std::exp(-x) * std::pow(x, l) * sum;
}

SoapCalculator::SoapCalculator(SoapConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const int n = cfg_.n_max;

  // Primitive Gaussians exp(-alpha_k r^2) decaying to 1e-3 at radii spaced
  // linearly over (0, r_cut].
  alphas_.resize(n);
  for (int k = 0; k < n; ++k) {
    const double rk = (k + 1.0) * cfg_.r_cut / n;
    alphas_[k] = std::log(1000.0) / (rk * rk);
  }

  // Symmetric (Loewdin) orthonormalization of the primitive overlap on
  // [0, r_cut] with radial weight r^2.
  Eigen::MatrixXd overlap(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      overlap(a, b) = truncated_second_moment(alphas_[a] + alphas_[b], cfg_.r_cut);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(overlap);
  if (es.info() != Eigen::Success)
    throw NumericalError("SoapCalculator: radial overlap eigendecomposition failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-12 * ev.maxCoeff())
    throw NumericalError(
        "SoapCalculator: radial basis is numerically dependent; reduce n_max");
  lowdin_ = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
            es.eigenvectors().transpose();

  // Fixed radial quadrature on [0, r_cut]; basis values cached at the nodes.
  Eigen::VectorXd gx, gw;
  gauss_legendre(kQuadPoints, gx, gw);
  quad_r_ = 0.5 * cfg_.r_cut * (gx.array() + 1.0);
  quad_w_ = 0.5 * cfg_.r_cut * gw.array();
  basis_at_quad_.resize(n, kQuadPoints);
  for (int q = 0; q < kQuadPoints; ++q) {
    const double r2 = quad_r_[q] * quad_r_[q];
    for (int a = 0; a < n; ++a) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) v += lowdin_(a, k) * std::exp(-alphas_[k] * r2);
      basis_at_quad_(a, q) = v;
    }
  }
}

double SoapCalculator::radial_basis(int n, double r) const {
  if (n < 0 || n >= cfg_.n_max)
    throw ContractViolation("radial_basis: index out of range");
  double v = 0.0;
  for (int k = 0; k < cfg_.n_max; ++k)
    v += lowdin_(n, k) * std::exp(-alphas_[k] * r * r);
  return v;
}

double SoapCalculator::cutoff_value(double r) const {
  if (r >= cfg_.r_cut) return 0.0;
  return 0.5 * (std::cos(M_PI * r / cfg_.r_cut) + 1.0);
}

void SoapCalculator::accumulate_neighbor(const Eigen::Vector3d &rel,
                                         Eigen::MatrixXd &coeff) const {
  const double R = rel.norm();
  if (R >= cfg_.r_cut) return;
  const double sig2 = cfg_.sigma_atom * cfg_.sigma_atom;
  const int nq = static_cast<int>(quad_r_.size());

  if (R < kCentralAtomRadius) {
    // A Gaussian centered on the expansion origin has only an l = 0 part:
    // the angular integral of Y_00 contributes 2*sqrt(pi).
    Eigen::VectorXd radial(nq);
    for (int q = 0; q < nq; ++q)
      radial[q] = quad_w_[q] * quad_r_[q] * quad_r_[q] *
                  std::exp(-quad_r_[q] * quad_r_[q] / (2.0 * sig2));
    coeff.col(0) += 2.0 * std::sqrt(M_PI) * (basis_at_quad_ * radial);
    return;
  }

  const double fc = cutoff_value(R);
  const Eigen::VectorXd y = real_spherical_harmonics(cfg_.l_max, rel / R);
  // Radial profile common to all l: quadrature weight, volume element, and
  // the radial Gaussian factor written so nothing overflows.
  Eigen::VectorXd shell(nq);
  for (int q = 0; q < nq; ++q) {
    const double dr = quad_r_[q] - R;
    shell[q] = quad_w_[q] * quad_r_[q] * quad_r_[q] * std::exp(-dr * dr / (2.0 * sig2));
  }
  for (int l = 0; l <= cfg_.l_max; ++l) {
    Eigen::VectorXd radial(nq);
    for (int q = 0; q < nq; ++q)
      radial[q] = shell[q] * scaled_bessel_i(l, quad_r_[q] * R / sig2);
    const Eigen::VectorXd qnl = basis_at_quad_ * radial;  // per n
    for (int m = -l; m <= l; ++m) {
      const double ang = fc * 4.0 * M_PI * y[l * l + l + m];
      coeff.col(l * l + l + m) += ang * qnl;
    }
  }
}

std::vector<Eigen::MatrixXd> SoapCalculator::expansion_coefficients(
    const Structure &s, Eigen::Index center) const {
  s.validate();
  if (center < 0 || center >= s.n_atoms())
    throw ContractViolation("expansion_coefficients: center index out of range");
  const int n_lm = (cfg_.l_max + 1) * (cfg_.l_max + 1);
  std::vector<Eigen::MatrixXd> coeff(
      cfg_.species.size(), Eigen::MatrixXd::Zero(cfg_.n_max, n_lm));
  for (Eigen::Index j = 0; j < s.n_atoms(); ++j) {
    const auto it = std::lower_bound(cfg_.species.begin(), cfg_.species.end(),
                                     s.atomic_numbers[j]);
    if (it == cfg_.species.end() || *it != s.atomic_numbers[j])
      throw ConfigError("soap: atomic number " +
                        std::to_string(s.atomic_numbers[j]) +
                        " is not listed in SoapConfig::species");
    const auto sp = static_cast<std::size_t>(it - cfg_.species.begin());
    const Eigen::Vector3d rel = s.positions.row(j) - s.positions.row(center);
    if (rel.norm() >= cfg_.r_cut) continue;
    accumulate_neighbor(rel, coeff[sp]);
  }
  return coeff;
}

std::vector<Eigen::VectorXd> SoapCalculator::features(const Structure &s) const {
  std::vector<Eigen::VectorXd> out(static_cast<std::size_t>(s.n_atoms()));
  for (Eigen::Index i = 0; i < s.n_atoms(); ++i) {
    const auto coeff = expansion_coefficients(s, i);
    Eigen::VectorXd p(cfg_.feature_dim());
    Eigen::Index idx = 0;
    for (std::size_t s1 = 0; s1 < cfg_.species.size(); ++s1) {
      for (std::size_t s2 = s1; s2 < cfg_.species.size(); ++s2) {
        for (int n1 = 0; n1 < cfg_.n_max; ++n1) {
          for (int n2 = n1; n2 < cfg_.n_max; ++n2) {
            for (int l = 0; l <= cfg_.l_max; ++l) {
              p[idx++] = coeff[s1].row(n1).segment(l * l, 2 * l + 1).dot(
                  coeff[s2].row(n2).segment(l * l, 2 * l + 1));
            }
          }
        }
      }
    }
    if (!p.allFinite())
      throw NumericalError("soap: non-finite feature encountered");
    out[static_cast<std::size_t>(i)] = std::move(p);
  }
  return out;
}

std::vector<Eigen::VectorXd> soap_features(const Structure &s, const SoapConfig &cfg) {
  return SoapCalculator(cfg).features(s);
}

}  // namespace mlipuq
