#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lipread/transform.hpp"

using namespace lipread;

namespace {

// Direct double-sum definition of the orthonormal DCT-II.
std::vector<double> brute_dct(const std::vector<double>& f, int W, int H) {
  const double pi = std::acos(-1.0);
  std::vector<double> out(f.size());
  for (int v = 0; v < H; ++v)
    for (int u = 0; u < W; ++u) {
      double s = 0;
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
          s += f[y * W + x] * std::cos(pi * (2 * x + 1) * u / (2.0 * W)) * std::cos(pi * (2 * y + 1) * v / (2.0 * H));
      double au = u == 0 ? std::sqrt(1.0 / W) : std::sqrt(2.0 / W);
      double av = v == 0 ? std::sqrt(1.0 / H) : std::sqrt(2.0 / H);
      out[v * W + u] = au * av * s;
    }
  return out;
}

std::vector<double> random_image(std::mt19937& rng, int W, int H) {
  std::uniform_real_distribution<double> px(0.0, 255.0);
  std::vector<double> f(static_cast<std::size_t>(W) * H);
  for (auto& v : f) v = px(rng);
  return f;
}

}  // namespace

TEST(Dct2, ConstantImageHasOnlyDc) {
  GrayImage img(8, 8, 3);
  auto m = dct2(img);
  EXPECT_NEAR(m.coeffs[0], 8 * 3.0, 1e-12);
  for (std::size_t k = 1; k < m.size(); ++k) EXPECT_NEAR(m.coeffs[k], 0.0, 1e-12);
}

TEST(Dct2, MatchesBruteForce) {
  std::mt19937 rng(5);
  for (auto [W, H] : {std::pair{8, 8}, std::pair{16, 12}, std::pair{5, 3}, std::pair{1, 7}}) {
    auto f = random_image(rng, W, H);
    auto m = dct2(f, W, H);
    auto ref = brute_dct(f, W, H);
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(m.coeffs[k], ref[k], 1e-10);
  }
}

TEST(Dct2, ParsevalLinearityInverse) {
  std::mt19937 rng(8);
  const int W = 12, H = 9;
  auto f = random_image(rng, W, H);
  auto g = random_image(rng, W, H);
  auto mf = dct2(f, W, H);
  double e_px = 0, e_co = 0;
  for (double v : f) e_px += v * v;
  for (double v : mf.coeffs) e_co += v * v;
  EXPECT_NEAR(e_co, e_px, 1e-8 * e_px);

  const double a = 1.7, b = -0.4;
  std::vector<double> mix(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) mix[k] = a * f[k] + b * g[k];
  auto mm = dct2(mix, W, H);
  auto mg = dct2(g, W, H);
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(mm.coeffs[k], a * mf.coeffs[k] + b * mg.coeffs[k], 1e-10);

  auto back = idct2(mf);
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(back[k], f[k], 1e-8);
}

TEST(Dct2, RejectsEmptyInput) {
  EXPECT_THROW(dct2(GrayImage{}), ValidationError);
  std::vector<double> none;
  EXPECT_THROW(dct2(none, 0, 0), ValidationError);
  std::vector<double> three(3);
  EXPECT_THROW(dct2(three, 2, 2), ValidationError);
}

TEST(SelectCoefficients, WeightsAndGather) {
  std::mt19937 rng(1);
  auto m = dct2(random_image(rng, 8, 8), 8, 8);
  std::vector<std::size_t> idx{3, 0, 17};
  auto plain = select_coefficients(m, idx, std::vector<double>{1, 1, 1});
  EXPECT_EQ(plain, (std::vector<double>{m.coeffs[3], m.coeffs[0], m.coeffs[17]}));
  auto zero = select_coefficients(m, idx, std::vector<double>{0, 0, 0});
  for (double v : zero) EXPECT_EQ(v, 0.0);
}

TEST(SelectCoefficients, DcOfUnitImageTimesTwo) {
  auto m = dct2(GrayImage(8, 8, 1));
  std::vector<std::size_t> idx{0};
  auto out = select_coefficients(m, idx, std::vector<double>{2.0});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0], 16.0, 1e-12);
}

TEST(SelectCoefficients, Errors) {
  auto m = dct2(GrayImage(8, 8, 1));
  std::vector<std::size_t> bad{64};
  EXPECT_THROW(select_coefficients(m, bad, std::vector<double>{1.0}), ValidationError);
  std::vector<std::size_t> two{0, 1};
  EXPECT_THROW(select_coefficients(m, two, std::vector<double>{1.0}), ValidationError);
}
