#pragma once

#include "pdeit/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace pdeit::testing {

// Independent evaluation of g_k(z) straight from its defining Fourier
// integral (1/4pi^2) int e^{i Re(conj(z) xi)} / (|xi|^2 + 2 k xi) dA(xi).
//
// Polar midpoint rule on |xi| <= R. For angles where the radial pole
// rho = -2k e^{i phi} comes close to the integration ray, the pole is
// subtracted and integrated in closed form (principal-value handling).
// The truncated tail |xi| > R is restored from the expansion of the
// denominator in c/rho, whose angular integrals are Bessel functions;
// the large-argument asymptotic form is valid because t*|z| >= R*|z|,
// which restricts the oracle to |z| >= 0.2.
inline Complex gk_quadrature(Complex z, Complex k, double R = 200.0, int nr = 4096,
                             int nphi = 512) {
  const double r = std::abs(z);
  if (r < 0.2) throw std::domain_error("gk_quadrature requires |z| >= 0.2");
  const double x = z.real();
  const double y = z.imag();
  const double hr = R / nr;
  const double hp = 2.0 * kPi / nphi;

  Complex total = 0.0;
  for (int j = 0; j < nphi; ++j) {
    const double phi = (j + 0.5) * hp;
    const Complex c = 2.0 * k * std::polar(1.0, phi);
    const double s = x * std::cos(phi) + y * std::sin(phi);
    const Complex pole = -c;
    const bool subtract = pole.real() > 0.0 && pole.real() < R && std::abs(pole.imag()) < 1.0;

    // e^{i rho s} advanced by recurrence, one multiply per radial node
    const Complex step = std::polar(1.0, hr * s);
    Complex f = std::polar(1.0, 0.5 * hr * s);
    Complex acc = 0.0;
    if (subtract) {
      const Complex np = std::exp(kI * pole * s);
      for (int i = 0; i < nr; ++i) {
        const double rho = (i + 0.5) * hr;
        acc += (f - np) / (rho + c);
        f *= step;
      }
      total += acc * hr + np * (std::log(R + c) - std::log(c));
    } else {
      for (int i = 0; i < nr; ++i) {
        const double rho = (i + 0.5) * hr;
        acc += f / (rho + c);
        f *= step;
      }
      total += acc * hr;
    }
  }
  Complex result = total * hp / (4.0 * kPi * kPi);

  // tail: (1/2pi) sum_n (-2k)^n i^n e^{i n arg z} int_R^R2 J_n(t r)/t^{n+1} dt
  const double R2 = 1e4;
  const double ht = 0.02;
  const int nt = static_cast<int>((R2 - R) / ht);
  const double theta = std::arg(z);
  for (int n = 0; n <= 2; ++n) {
    const double mu = 4.0 * n * n;
    double integral = 0.0;
    for (int i = 0; i < nt; ++i) {
      const double t = R + (i + 0.5) * ht;
      const double arg = t * r;
      const double omega = arg - 0.5 * n * kPi - 0.25 * kPi;
      const double p = 1.0 - (mu - 1.0) * (mu - 9.0) / (2.0 * 64.0 * arg * arg);
      const double q = (mu - 1.0) / (8.0 * arg);
      const double jn = std::sqrt(2.0 / (kPi * arg)) * (std::cos(omega) * p - std::sin(omega) * q);
      integral += jn / std::pow(t, n + 1);
    }
    integral *= ht;
    result += std::pow(-2.0 * k, n) * std::pow(kI, n) * std::polar(1.0, n * theta) * integral /
              (2.0 * kPi);
  }
  return result;
}

}  // namespace pdeit::testing
