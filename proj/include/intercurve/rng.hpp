#pragma once

// Deterministic random streams. std::*_distribution is implementation-defined,
// so uniform/gaussian draws are generated by hand from mt19937_64 bits to keep
// reports reproducible across standard libraries.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

namespace intercurve {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Substream key: independent stream `index` derived from a base seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Marsaglia polar method; cache holds the second deviate.
  double gaussian() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cache_ = v * f;
    has_cache_ = true;
    return u * f;
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = gaussian();
    return x;
  }

  Eigen::MatrixXd gaussian_matrix(int rows, int cols) {
    Eigen::MatrixXd x(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) x(i, j) = gaussian();
    return x;
  }

  // Unit vector, uniform on the sphere.
  Eigen::VectorXd unit_vector(int n) {
    Eigen::VectorXd v;
    double norm = 0.0;
    do {
      v = gaussian_vector(n);
      norm = v.norm();
    } while (norm < 1e-12);
    return v / norm;
  }

 private:
  std::mt19937_64 engine_;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign
// of R's diagonal fixed.
inline Eigen::MatrixXd haar_orthogonal(int n, Rng& rng) {
  const Eigen::MatrixXd a = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace intercurve
