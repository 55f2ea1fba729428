#pragma once
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ips {

using cplx = std::complex<double>;

inline bool is_pow2(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 Cooley-Tukey, n a power of two. sign=-1 forward, +1 inverse
// (inverse left unnormalized; callers divide by n).
inline void fft_pow2(std::vector<cplx>& a, int sign) {
  size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft_pow2 needs a power-of-two length");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double pi = 3.14159265358979323846;
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * pi / double(len);
    cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Direct O(n^2) DFT for lengths that are not powers of two.
inline std::vector<cplx> dft_direct(const std::vector<cplx>& a, int sign) {
  size_t n = a.size();
  std::vector<cplx> out(n);
  const double pi = 3.14159265358979323846;
  for (size_t k = 0; k < n; ++k) {
    cplx s(0.0, 0.0);
    for (size_t j = 0; j < n; ++j) {
      double ang = sign * 2.0 * pi * double(k * j % n) / double(n);
      s += a[j] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = s;
  }
  return out;
}

inline std::vector<cplx> fft(std::vector<cplx> a, int sign) {
  if (is_pow2(a.size())) {
    fft_pow2(a, sign);
    return a;
  }
  return dft_direct(a, sign);
}

// Circular cross-correlation r[d] = (1/n) * sum_x f[x] g[x+d mod n].
// O(n log n) for power-of-two n, O(n^2) fallback otherwise.
inline std::vector<double> circular_cross_correlation(const std::vector<double>& f,
                                                      const std::vector<double>& g) {
  size_t n = f.size();
  if (g.size() != n || n == 0) throw std::invalid_argument("cross-correlation length mismatch");
  std::vector<cplx> F(n), G(n);
  for (size_t i = 0; i < n; ++i) { F[i] = f[i]; G[i] = g[i]; }
  F = fft(std::move(F), -1);
  G = fft(std::move(G), -1);
  std::vector<cplx> H(n);
  for (size_t k = 0; k < n; ++k) H[k] = std::conj(F[k]) * G[k];
  H = fft(std::move(H), +1);
  std::vector<double> r(n);
  for (size_t d = 0; d < n; ++d) r[d] = H[d].real() / double(n) / double(n);
  return r;
}

}  // namespace ips
