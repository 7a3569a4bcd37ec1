#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "regstab/error.hpp"
#include "regstab/numerics.hpp"
#include "support.hpp"

using namespace regstab;
using namespace regstab::numerics;
namespace t = regstab::testing;

namespace {

DataMatrix single_column(std::vector<double> values, const std::string& name = "x") {
  Matrix m(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
  return DataMatrix(std::move(m), {name});
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no regstab::Error thrown";
  return ErrorKind::Io;
}

Matrix random_columns(std::mt19937_64& gen, std::size_t n, std::size_t p) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.1, 1000.0);
  Matrix m(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    const double s = scale(gen);
    const double shift = scale(gen);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = shift + s * normal(gen);
  }
  return m;
}

}  // namespace

TEST(DataMatrix, RejectsBadShapesAndValues) {
  EXPECT_EQ(kind_of([] { DataMatrix(Matrix(1, 2), {"a", "b"}); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { DataMatrix(Matrix(3, 2), {"a", "a"}); }), ErrorKind::DimensionMismatch);
  Matrix m(3, 1);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(kind_of([&] { DataMatrix(m, {"a"}); }), ErrorKind::NonFinite);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(kind_of([&] { DataMatrix(m, {"a"}); }), ErrorKind::NonFinite);
}

TEST(Standardize, SimpleColumn) {
  const auto s = standardize(single_column({1, 2, 3}));
  EXPECT_DOUBLE_EQ(s.z.values()(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(s.z.values()(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(s.z.values()(2, 0), 1.0);
  EXPECT_DOUBLE_EQ(s.stats.means[0], 2.0);
  EXPECT_DOUBLE_EQ(s.stats.sample_variances[0], 1.0);
}

TEST(Standardize, ConstantColumnIsZeroVariance) {
  try {
    standardize(single_column({5, 5, 5}, "flat"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVariance);
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
  }
}

TEST(Standardize, SudanPrecipitationMatchesHandRecomputation) {
  // Frozen from an exact-fraction evaluation: mean 1029/4, variance 1495/14.
  const std::vector<double> expected = {-1.766063400082332,  1.233825115126013,  0.7499721288020862,
                                        1.0402839205964423,  0.07257794794858899, -0.4112750383753376,
                                        -0.7015868301696936, -0.21773384384576697};
  const auto s = standardize(single_column({t::kSudanLap.begin(), t::kSudanLap.end()}, "LAP"));
  EXPECT_DOUBLE_EQ(s.stats.means[0], 1029.0 / 4.0);
  EXPECT_NEAR(s.stats.sample_variances[0], 1495.0 / 14.0, 1e-12);
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(s.z.values()(i, 0), expected[i], 1e-12) << i;
}

TEST(Standardize, PropertyUnitMomentsOnRandomData) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + gen() % 40;
    const std::size_t p = 1 + gen() % 8;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back("c" + std::to_string(j));
    const auto s = standardize(DataMatrix(random_columns(gen, n, p), names));
    for (std::size_t j = 0; j < p; ++j) {
      const auto [mean, var] = t::naive_mean_var(s.z.values().column(j));
      EXPECT_LT(std::abs(mean), 1e-12);
      EXPECT_LT(std::abs(var - 1.0), 1e-9);
    }
  }
}

TEST(Correlation, IdenticalAndOppositeColumns) {
  Matrix same{{1, 1}, {2, 2}, {4, 4}};
  const Matrix r1 = correlation_matrix(DataMatrix(same, {"a", "b"}));
  EXPECT_EQ(r1, (Matrix{{1, 1}, {1, 1}}));
  Matrix opposite{{1, -1}, {2, -2}, {4, -4}};
  const Matrix r2 = correlation_matrix(DataMatrix(opposite, {"a", "b"}));
  EXPECT_EQ(r2, (Matrix{{1, -1}, {-1, 1}}));
}

TEST(Correlation, TablesFixtureAgainstDoubleLoopOracle) {
  // 24 country-years x (year, LAP, AAT, FO, AMS, PSR, RS) from the three state tables.
  const double rows[24][7] = {
      {2010, 239, 25, 2.765, 2.85, 17, -0.0825},   {2011, 270, 26, 2.770, 2.83, 16, -0.08},
      {2012, 265, 24, 2.768, 2.78, 13, -0.0830},   {2013, 268, 25, 2.76, 2.75, 16, -0.0835},
      {2014, 258, 24, 3.6, 2.89, 17, -0.0973},     {2015, 253, 24, 2.765, 2.82, 18, -0.0875},
      {2016, 250, 28, 2.765, 2.86, 12, -0.102},    {2017, 255, 27, 2.765, 2.81, 13, -0.127},
      {2010, 1370, 24.3, 0.83, 0.090, 29, -0.0354}, {2011, 1440, 24.6, 0.85, 0.093, 30, -0.037},
      {2012, 1440, 23.5, 0.86, 0.091, 27, -0.0362}, {2013, 1440, 23.7, 0.85, 0.082, 29, -0.0378},
      {2014, 1440, 23.8, 0.84, 0.087, 28, -0.036},  {2015, 1440, 24.4, 0.82, 0.088, 28, -0.0388},
      {2016, 1440, 24.8, 0.85, 0.080, 27, -0.040},  {2017, 1440, 24.6, 0.86, 0.076, 27, -0.042},
      {2010, 1530, 25, 0.76, 0.093, 36, -0.056},    {2011, 1530, 27, 0.35, 0.088, 37, -0.057},
      {2012, 1570, 26, 1.56, 0.103, 35, -0.043},    {2013, 1530, 26, 1.33, 0.087, 33, -0.044},
      {2014, 1630, 27, 1.32, 0.076, 35, -0.042},    {2015, 1630, 26, 0.85, 0.089, 35, -0.039},
      {2016, 1630, 25, 0.88, 0.086, 39, -0.032},    {2017, 1630, 27, 1.34, 0.085, 32, -0.030},
  };
  Matrix x(24, 7);
  for (std::size_t i = 0; i < 24; ++i)
    for (std::size_t j = 0; j < 7; ++j) x(i, j) = rows[i][j];
  const DataMatrix data(x, {"year", "LAP", "AAT", "FO", "AMS", "PSR", "RS"});
  const Matrix r = correlation_matrix(standardize(data).z);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(r(i, i), 1.0);
    for (std::size_t j = 0; j < 7; ++j) {
      EXPECT_EQ(r(i, j), r(j, i));
      EXPECT_NEAR(r(i, j), t::naive_correlation(x, i, j), 1e-12) << i << "," << j;
    }
  }
  // Positive semidefinite up to round-off.
  const auto eig = symmetric_eigen(r);
  EXPECT_GE(eig.eigenvalues.back(), -1e-10);
}

TEST(Correlation, PropertyBoundedAndPsdOnRandomData) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + gen() % 30;
    const std::size_t p = 1 + gen() % 9;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back("c" + std::to_string(j));
    const Matrix r = correlation_matrix(standardize(DataMatrix(random_columns(gen, n, p), names)).z);
    for (std::size_t i = 0; i < p; ++i) {
      EXPECT_LT(std::abs(r(i, i) - 1.0), 1e-12);
      for (std::size_t j = 0; j < p; ++j) EXPECT_LE(std::abs(r(i, j)), 1.0 + 1e-12);
    }
    EXPECT_GE(symmetric_eigen(r).eigenvalues.back(), -1e-10);
  }
}

TEST(SymmetricEigen, Identity) {
  const auto e = symmetric_eigen(Matrix::identity(3));
  EXPECT_EQ(e.eigenvalues, (Vector{1, 1, 1}));
  EXPECT_EQ(e.eigenvectors, Matrix::identity(3));
}

TEST(SymmetricEigen, TwoByTwoAnalytic) {
  const auto e = symmetric_eigen(Matrix{{1, 0.5}, {0.5, 1}});
  EXPECT_NEAR(e.eigenvalues[0], 1.5, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 0.5, 1e-14);
  const double h = std::sqrt(0.5);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 0)), h, 1e-14);
  EXPECT_NEAR(e.eigenvectors(0, 0), e.eigenvectors(1, 0), 1e-14);
}

TEST(SymmetricEigen, TiesKeepColumnOrderAndSignConvention) {
  const auto e = symmetric_eigen(Matrix{{2, 0, 0}, {0, 3, 0}, {0, 0, 2}});
  EXPECT_EQ(e.eigenvalues, (Vector{3, 2, 2}));
  EXPECT_EQ(e.eigenvectors(1, 0), 1.0);
  EXPECT_EQ(e.eigenvectors(0, 1), 1.0);  // column 0 before column 2
  EXPECT_EQ(e.eigenvectors(2, 2), 1.0);

  const auto neg = symmetric_eigen(Matrix{{1, -0.9}, {-0.9, 1}});
  for (std::size_t c = 0; c < 2; ++c) {
    const double a = neg.eigenvectors(0, c), b = neg.eigenvectors(1, c);
    EXPECT_GT(std::abs(a) >= std::abs(b) ? a : b, 0.0);
  }
}

TEST(SymmetricEigen, RandomReconstructionAndInvariants) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + gen() % 10;
    const Matrix r = t::random_symmetric(gen, n, 3.0);
    const auto e = symmetric_eigen(r);
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = e.eigenvalues[i];
    const Matrix back = t::naive_matmul(t::naive_matmul(e.eigenvectors, d), e.eigenvectors.transposed());
    double trace = 0, sum = 0, worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      trace += r(i, i);
      sum += e.eigenvalues[i];
      for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(back(i, j) - r(i, j)));
    }
    EXPECT_LT(worst, 1e-8);
    EXPECT_NEAR(sum, trace, 1e-8);
    for (std::size_t i = 0; i + 1 < n; ++i) EXPECT_GE(e.eigenvalues[i], e.eigenvalues[i + 1]);

    const Matrix vtv = t::naive_matmul(e.eigenvectors.transposed(), e.eigenvectors);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(vtv(i, j), i == j ? 1.0 : 0.0, 1e-8);
      Vector v = e.eigenvectors.column(i);
      const Vector rv = r * v;
      double res = 0;
      for (std::size_t k = 0; k < n; ++k) res += std::pow(rv[k] - e.eigenvalues[i] * v[k], 2);
      EXPECT_LT(std::sqrt(res), 1e-8);
    }
  }
}

TEST(SymmetricEigen, Errors) {
  EXPECT_EQ(kind_of([] { symmetric_eigen(Matrix{{1, 0.5}, {0.4, 1}}); }), ErrorKind::NotSymmetric);
  EXPECT_EQ(kind_of([] { symmetric_eigen(Matrix(2, 3)); }), ErrorKind::DimensionMismatch);
  std::mt19937_64 gen(3);
  const Matrix r = t::random_symmetric(gen, 6);
  EXPECT_EQ(kind_of([&] { symmetric_eigen(r, 0); }), ErrorKind::NoConvergence);
}

TEST(Pearson, PublishedCorrelationsFromStateTables) {
  const std::vector<double> years(t::kYears.begin(), t::kYears.end());
  EXPECT_NEAR(pearson(years, t::kSudanRs), -0.8265, 5e-4);
  EXPECT_NEAR(pearson(years, t::kHaitiRs), -0.8689, 5e-4);
  EXPECT_NEAR(pearson(years, t::kSomaliaRs), 0.9547, 5e-4);
}

TEST(Pearson, SelfCorrelationAndErrors) {
  const std::vector<double> x = {3, 1, 4, 1, 5, 9, 2, 6};
  EXPECT_EQ(pearson(x, x), 1.0);
  const std::vector<double> flat = {2, 2, 2};
  const std::vector<double> y3 = {1, 2, 3};
  EXPECT_EQ(kind_of([&] { pearson(flat, y3); }), ErrorKind::ZeroVariance);
  EXPECT_EQ(kind_of([&] { pearson(y3, flat); }), ErrorKind::ZeroVariance);
  EXPECT_EQ(kind_of([&] { pearson(x, y3); }), ErrorKind::LengthMismatch);
}

TEST(Pearson, PropertySymmetricAndAffineInvariant) {
  std::mt19937_64 gen(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> coef(-50.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 30;
    std::vector<double> x(n), y(n), ax(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = normal(gen);
      y[i] = 0.3 * x[i] + normal(gen);
    }
    double a = coef(gen);
    if (std::abs(a) < 1e-3) a = 1.0;
    const double b = coef(gen);
    for (std::size_t i = 0; i < n; ++i) ax[i] = a * x[i] + b;
    const double r = pearson(x, y);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    EXPECT_NEAR(pearson(y, x), r, 1e-12);
    EXPECT_NEAR(pearson(ax, y), (a > 0 ? 1.0 : -1.0) * r, 1e-12);
  }
}
