#pragma once

// Orthonormal type-II 2-D DCT of lip patches and weighted coefficient
// gathering.

#include <cmath>
#include <span>
#include <vector>

#include "lipread/corpus.hpp"
#include "lipread/error.hpp"

namespace lipread {

// W x H coefficients, row-major (index = v * width + u), index 0 is DC.
struct DctMatrix {
  int width = 0;
  int height = 0;
  std::vector<double> coeffs;

  std::size_t size() const { return coeffs.size(); }
  double at(int u, int v) const { return coeffs[static_cast<std::size_t>(v) * width + u]; }
};

namespace dct_detail {

// basis[k * n + x] = alpha(k) cos(pi (2x + 1) k / 2n)
inline std::vector<double> basis(int n) {
  constexpr double kPi = 3.14159265358979323846;
  std::vector<double> b(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    double alpha = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int x = 0; x < n; ++x) b[static_cast<std::size_t>(k) * n + x] = alpha * std::cos(kPi * (2 * x + 1) * k / (2.0 * n));
  }
  return b;
}

}  // namespace dct_detail

// Separable: transform rows, then columns.
inline DctMatrix dct2(std::span<const double> pixels, int width, int height) {
  if (width < 1 || height < 1 || pixels.empty()) throw ValidationError("dct2: empty image");
  if (pixels.size() != static_cast<std::size_t>(width) * height)
    throw ValidationError("dct2: pixel count does not match width x height");
  const auto bw = dct_detail::basis(width);
  const auto bh = dct_detail::basis(height);
  std::vector<double> rows(pixels.size());
  for (int y = 0; y < height; ++y)
    for (int u = 0; u < width; ++u) {
      double acc = 0;
      for (int x = 0; x < width; ++x) acc += bw[static_cast<std::size_t>(u) * width + x] * pixels[static_cast<std::size_t>(y) * width + x];
      rows[static_cast<std::size_t>(y) * width + u] = acc;
    }
  DctMatrix out{width, height, std::vector<double>(pixels.size())};
  for (int v = 0; v < height; ++v)
    for (int u = 0; u < width; ++u) {
      double acc = 0;
      for (int y = 0; y < height; ++y) acc += bh[static_cast<std::size_t>(v) * height + y] * rows[static_cast<std::size_t>(y) * width + u];
      out.coeffs[static_cast<std::size_t>(v) * width + u] = acc;
    }
  return out;
}

inline DctMatrix dct2(const GrayImage& img) {
  if (img.empty()) throw ValidationError("dct2: empty image");
  std::vector<double> px(img.pixels.begin(), img.pixels.end());
  return dct2(px, img.width, img.height);
}

inline std::vector<double> idct2(const DctMatrix& m) {
  const auto bw = dct_detail::basis(m.width);
  const auto bh = dct_detail::basis(m.height);
  std::vector<double> cols(m.coeffs.size());
  for (int y = 0; y < m.height; ++y)
    for (int u = 0; u < m.width; ++u) {
      double acc = 0;
      for (int v = 0; v < m.height; ++v) acc += bh[static_cast<std::size_t>(v) * m.height + y] * m.at(u, v);
      cols[static_cast<std::size_t>(y) * m.width + u] = acc;
    }
  std::vector<double> out(m.coeffs.size());
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      double acc = 0;
      for (int u = 0; u < m.width; ++u) acc += bw[static_cast<std::size_t>(u) * m.width + x] * cols[static_cast<std::size_t>(y) * m.width + u];
      out[static_cast<std::size_t>(y) * m.width + x] = acc;
    }
  return out;
}

// out[j] = coeffs[idx[j]] * weights[j]
inline std::vector<double> select_coefficients(const DctMatrix& m, std::span<const std::size_t> idx,
                                               std::span<const double> weights) {
  if (idx.size() != weights.size()) throw ValidationError("select_coefficients: index/weight length mismatch");
  std::vector<double> out(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= m.coeffs.size())
      throw ValidationError("select_coefficients: index " + std::to_string(idx[j]) + " out of range");
    out[j] = m.coeffs[idx[j]] * weights[j];
  }
  return out;
}

}  // namespace lipread
