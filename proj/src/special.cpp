#include "sparsewave/special.hpp"

#include <cmath>
#include <vector>

namespace spw {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void legendre_row(int degree_max, int order, double ct, double st, double* out) {
  if (order < 0 || degree_max < order) throw InvalidInput("legendre_row: bad degree/order");
  double p = 0.28209479177387814;  // sqrt(1/(4 pi))
  for (int m = 1; m <= order; ++m) p *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st;
  out[order] = p;
  if (degree_max == order) return;
  out[order + 1] = std::sqrt(2.0 * order + 3.0) * ct * p;
  for (int d = order + 2; d <= degree_max; ++d) {
    double a = std::sqrt((2.0 * d - 1.0) * (2.0 * d + 1.0) /
                         (double(d - order) * double(d + order)));
    double b = std::sqrt((2.0 * d + 1.0) * (d + order - 1.0) * (d - order - 1.0) /
                         (double(d - order) * double(d + order) * (2.0 * d - 3.0)));
    out[d] = a * ct * out[d - 1] - b * out[d - 2];
  }
}

cplx sph_harmonic(int degree, int order, double cos_theta, double phi) {
  int ao = std::abs(order);
  if (ao > degree) throw InvalidInput("sph_harmonic: |order| > degree");
  double st = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  std::vector<double> row(degree + 1);
  legendre_row(degree, ao, cos_theta, st, row.data());
  cplx y = row[degree] * std::exp(I * (double(ao) * phi));
  if (order < 0) y = (ao % 2 ? -1.0 : 1.0) * std::conj(y);
  return y;
}

cplx sph_harmonic(int degree, int order, const Vec3& u) {
  double phi = std::atan2(u.y, u.x);
  return sph_harmonic(degree, order, u.z, phi);
}

double real_sph_harmonic(int degree, int order, const Vec3& u) {
  if (order == 0) return sph_harmonic(degree, 0, u).real();
  int ao = std::abs(order);
  cplx y = sph_harmonic(degree, ao, u);
  double sign = (ao % 2 ? -1.0 : 1.0);
  double s2 = std::sqrt(2.0);
  return order > 0 ? s2 * sign * y.real() : s2 * sign * y.imag();
}

// Polynomial parts of the spherical Hankel functions:
//   h1_n(z) = (-i)^{n+1} e^{iz}/z * Splus(z),  Splus = sum c_s (i/(2z))^s,
//   c_s = (n+s)! / (s! (n-s)!).
static cplx hankel_sum(int n, cplx inv2z_times_i) {
  cplx sum = 1.0, term = 1.0;
  double c = 1.0;
  for (int s = 0; s < n; ++s) {
    c = c * double(n + s + 1) * double(n - s) / double(s + 1);
    term *= inv2z_times_i;
    sum += c * term;
  }
  return sum;
}

static cplx ipow(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// Downward (Miller) recurrence on the scaled row, normalized against the
// scaled j_0 or j_1, whichever is larger.
static cplx scaled_miller(int n, cplx z) {
  int start = n + 20 + int(std::ceil(std::sqrt(40.0 * n))) + int(std::abs(z));
  cplx fp = 0.0, fc = 1e-280;
  cplx keep_n = 0.0, keep0 = 0.0, keep1 = 0.0;
  for (int m = start; m >= 0; --m) {
    cplx fm = (2.0 * m + 3.0) / z * fc - fp;
    fp = fc;
    fc = fm;
    if (m == n) keep_n = fc;
    if (m == 1) keep1 = fc;
    if (m == 0) keep0 = fc;
    if (std::abs(fc.real()) > 1e250 || std::abs(fc.imag()) > 1e250) {
      fp *= 1e-250;
      fc *= 1e-250;
      keep_n *= 1e-250;
      keep1 *= 1e-250;
      keep0 *= 1e-250;
    }
  }
  cplx e2 = std::exp(2.0 * I * z);
  cplx j0s = (e2 - 1.0) / (2.0 * I * z);                             // e^{iz} j_0
  cplx j1s = -I * (e2 * (1.0 / z - I) - (1.0 / z + I)) / (2.0 * z);  // e^{iz} j_1
  // normalize against the larger of the two to dodge zeros of j_0
  if (std::abs(j0s) >= std::abs(j1s)) return keep_n * (j0s / keep0);
  return keep_n * (j1s / keep1);
}

cplx scaled_sph_bessel_j(int n, cplx z) {
  if (n < 0) throw InvalidInput("scaled_sph_bessel_j: negative index");
  double az = std::abs(z);
  if (az < 1e-6) {
    // series head; exp(iz) factor is 1 + O(z)
    double df = 1;
    for (int i = 1; i <= 2 * n + 1; i += 2) df *= i;
    cplx zn = std::pow(z, n);
    return zn / df * (1.0 - z * z / (2.0 * (2.0 * n + 3.0))) * std::exp(I * z);
  }
  if (az >= std::max(2.0, double(n) * (n + 1.0))) {
    cplx i2z = I / (2.0 * z);
    cplx sp = hankel_sum(n, i2z);
    cplx sm = hankel_sum(n, -i2z);
    return (ipow(-(n + 1)) * std::exp(2.0 * I * z) * sp + ipow(n + 1) * sm) / (2.0 * z);
  }
  return scaled_miller(n, z);
}

cplx sph_bessel_j(int n, cplx z) {
  if (std::abs(z.imag()) > 700.0)
    throw InvalidInput("sph_bessel_j: |Im z| too large, use the scaled form");
  return scaled_sph_bessel_j(n, z) * std::exp(-I * z);
}

void sph_bessel_j_array(int nmax, cplx z, cplx* out) {
  if (std::abs(z.imag()) > 700.0)
    throw InvalidInput("sph_bessel_j_array: |Im z| too large");
  double az = std::abs(z);
  if (az < 1e-6) {
    for (int m = 0; m <= nmax; ++m) out[m] = sph_bessel_j(m, z);
    return;
  }
  if (az > double(nmax) + 2.0) {
    // upward recurrence is stable above the turning point
    out[0] = std::sin(z) / z;
    if (nmax >= 1) out[1] = std::sin(z) / (z * z) - std::cos(z) / z;
    for (int m = 2; m <= nmax; ++m) out[m] = (2.0 * m - 1.0) / z * out[m - 1] - out[m - 2];
    return;
  }
  cplx e = std::exp(-I * z);
  for (int m = 0; m <= nmax; ++m) out[m] = scaled_sph_bessel_j(m, z) * e;
}

RiccatiHankel riccati_hankel_scaled(int n, cplx z) {
  if (n < 0) throw InvalidInput("riccati_hankel_scaled: negative index");
  cplx i2z = I / (2.0 * z);
  cplx sp_n = hankel_sum(n, i2z);
  RiccatiHankel r;
  r.value = ipow(-(n + 1)) * sp_n;
  if (n == 0) {
    r.derivative = 1.0;  // d/dz (-i e^{iz}) scaled by e^{-iz}
  } else {
    cplx sp_nm1 = hankel_sum(n - 1, i2z);
    // zeta_n' = z h_{n-1} - n h_n
    r.derivative = ipow(-n) * sp_nm1 - double(n) * ipow(-(n + 1)) * sp_n / z;
  }
  return r;
}

}  // namespace spw
