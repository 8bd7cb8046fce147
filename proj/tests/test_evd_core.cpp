#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hrext/evd_core.hpp"

using namespace hrext;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Big = boost::multiprecision::cpp_dec_float_50;

Big big_phi(const Big& z) { return boost::multiprecision::erfc(-z / boost::multiprecision::sqrt(Big(2))) / 2; }

// H_lambda at 50 digits, evaluated from the two-term exponent directly.
double big_hr_cdf(double lambda, double x, double y) {
  const Big l(lambda), bx(x), by(y);
  const Big v = big_phi(l + (bx - by) / (2 * l)) * boost::multiprecision::exp(-by) +
                big_phi(l + (by - bx) / (2 * l)) * boost::multiprecision::exp(-bx);
  return static_cast<double>(boost::multiprecision::exp(-v));
}

std::vector<double> test_grid() {
  std::vector<double> g;
  for (int i = 0; i < 9; ++i) g.push_back(-2.0 + 0.75 * i);
  return g;
}

}  // namespace

TEST_CASE("std_normal_cdf") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(kInf) == 1.0);
  CHECK(std_normal_cdf(-kInf) == 0.0);
  CHECK(std_normal_cdf(1.0) == doctest::Approx(0.841344746068542948585232545632).epsilon(1e-15));
  // lower tail keeps relative accuracy
  CHECK(std_normal_cdf(-30.0) == doctest::Approx(4.906713927148187e-198).epsilon(1e-12));
  double prev = 0.0;
  for (double z = -10.0; z <= 10.0; z += 0.01) {
    CHECK(std_normal_cdf(z) >= prev);
    prev = std_normal_cdf(z);
  }
}

TEST_CASE("gumbel_cdf") {
  CHECK(gumbel_cdf(0.0) == doctest::Approx(0.3678794411714423).epsilon(1e-16));
  CHECK(gumbel_cdf(kInf) == 1.0);
  CHECK(gumbel_cdf(-kInf) == 0.0);
  CHECK(gumbel_cdf(-std::log(std::log(2.0))) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gumbel_quantile(gumbel_cdf(1.3)) == doctest::Approx(1.3).epsilon(1e-13));
}

TEST_CASE("HrParam validation and branches") {
  CHECK_THROWS_AS(HrParam(-1.0), DomainError);
  CHECK_THROWS_AS(HrParam(std::nan("")), DomainError);
  CHECK(HrParam(0.0).branch() == HrParam::Branch::Comonotone);
  CHECK(HrParam(1e-12).branch() == HrParam::Branch::Comonotone);
  CHECK(HrParam(2e-12).branch() == HrParam::Branch::Finite);
  CHECK(HrParam(1e12).branch() == HrParam::Branch::Independent);
  CHECK(HrParam::infinity().is_infinite());
}

TEST_CASE("hr_cdf examples") {
  CHECK(hr_cdf(HrParam(0.0), 0.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(hr_cdf(HrParam::infinity(), 0.0, 0.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(hr_cdf(HrParam(1.0), 0.0, 0.0) == doctest::Approx(0.185873398148184399864634497876).epsilon(1e-14));
  CHECK(hr_exponent(HrParam::infinity(), 0.0, 0.0) == 2.0);
  CHECK(hr_exponent(HrParam(0.0), 0.0, 0.0) == 1.0);
  CHECK(hr_exponent(HrParam(1.0), 1.0, 2.0) == doctest::Approx(0.436881713346430642112828653588).epsilon(1e-14));
}

TEST_CASE("hr_cdf against the 50-digit evaluation") {
  std::mt19937_64 gen(20261015);
  std::uniform_real_distribution<double> lam(0.05, 5.0), pt(-3.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double l = lam(gen), x = pt(gen), y = pt(gen);
    const double want = big_hr_cdf(l, x, y);
    CHECK(std::abs(hr_cdf(HrParam(l), x, y) - want) <= 1e-12 * want);
  }
}

TEST_CASE("hr_copula") {
  CHECK(hr_copula(HrParam::infinity(), 0.3, 0.7) == doctest::Approx(0.21).epsilon(1e-14));
  CHECK(hr_copula(HrParam(0.0), 0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(hr_copula(HrParam(1.0), 0.5, 0.5) == doctest::Approx(0.311501390390194137745576181234).epsilon(1e-14));
  for (double u : {0.0, 0.2, 0.9, 1.0}) {
    CHECK(hr_copula(HrParam(1.5), u, 1.0) == u);
    CHECK(hr_copula(HrParam(1.5), 1.0, u) == u);
    CHECK(hr_copula(HrParam(1.5), u, 0.0) == 0.0);
  }
}

TEST_CASE("CDF invariants on a grid") {
  const auto g = test_grid();
  for (double l : {0.0, 0.1, 0.5, 1.0, 3.0, kInf}) {
    const HrParam p(l);
    for (double x : g) {
      CHECK(std::abs(hr_cdf(p, x, kInf) - gumbel_cdf(x)) <= 1e-12);
      CHECK(std::abs(hr_cdf(p, kInf, x) - gumbel_cdf(x)) <= 1e-12);
      for (double y : g) {
        const double h = hr_cdf(p, x, y);
        CHECK(h >= gumbel_cdf(x) * gumbel_cdf(y) - 1e-12);
        CHECK(h <= std::min(gumbel_cdf(x), gumbel_cdf(y)) + 1e-12);
        CHECK(h == hr_cdf(p, y, x));
        const double v = hr_exponent(p, x, y);
        CHECK(v >= std::max(std::exp(-x), std::exp(-y)) * (1 - 1e-15));
        CHECK(v <= (std::exp(-x) + std::exp(-y)) * (1 + 1e-15));
        for (double t : {2.0, 3.0, 10.0})
          CHECK(std::abs(std::pow(hr_cdf(p, x + std::log(t), y + std::log(t)), t) - h) <= 1e-10);
      }
    }
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        const double mass = hr_cdf(p, g[i + 1], g[j + 1]) - hr_cdf(p, g[i], g[j + 1]) -
                            hr_cdf(p, g[i + 1], g[j]) + hr_cdf(p, g[i], g[j]);
        CHECK(mass >= -1e-12);
      }
  }
}

TEST_CASE("branch continuity") {
  const auto g = test_grid();
  for (double x : g)
    for (double y : g) {
      CHECK(std::abs(hr_cdf(HrParam(1e6), x, y) - hr_cdf(HrParam::infinity(), x, y)) <= 1e-6);
      CHECK(std::abs(hr_cdf(HrParam(1e-6), x, y) - hr_cdf(HrParam(0.0), x, y)) <= 1e-4);
    }
}

TEST_CASE("hr_cdf_dx matches central differences") {
  const double h = 1e-6;
  for (double l : {0.3, 1.0, 2.5})
    for (double x : {-1.0, 0.0, 0.7, 2.0})
      for (double y : {-0.5, 0.4, 3.0}) {
        const HrParam p(l);
        const double fd = (hr_cdf(p, x + h, y) - hr_cdf(p, x - h, y)) / (2 * h);
        CHECK(hr_cdf_dx(p, x, y) == doctest::Approx(fd).epsilon(1e-6));
        // the conditional CDF is the derivative normalized by its y = +inf value
        CHECK(hr_conditional_cdf(p, y, x) == doctest::Approx(hr_cdf_dx(p, x, y) / hr_cdf_dx(p, x, kInf)).epsilon(1e-12));
      }
}

TEST_CASE("hr_sample edge branches") {
  const auto co = hr_sample(HrParam(0.0), 3, 11);
  for (int i = 0; i < 3; ++i) CHECK(co(i, 0) == co(i, 1));
  const auto ind = hr_sample(HrParam::infinity(), 100000, 12);
  const Eigen::ArrayXd a = (-ind.col(0).array()).exp(), b = (-ind.col(1).array()).exp();
  const double ma = a.mean(), mb = b.mean();
  const double corr = ((a - ma) * (b - mb)).mean() /
                      std::sqrt((a - ma).square().mean() * (b - mb).square().mean());
  CHECK(std::abs(corr) <= 0.01);
  CHECK_THROWS_AS(hr_sample(HrParam(1.0), 0, 1), DomainError);
}

TEST_CASE("hr_sample follows H_lambda") {
  const std::int64_t n = 100000;
  const double band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
  const auto s = hr_sample(HrParam(1.0), n, 2026);
  for (double x : {-1.0, 0.0, 1.0, 2.0, 3.0})
    for (double y : {-1.0, 0.0, 1.0, 2.0, 3.0}) {
      const double emp = ((s.col(0).array() <= x) && (s.col(1).array() <= y)).cast<double>().mean();
      CHECK(std::abs(emp - hr_cdf(HrParam(1.0), x, y)) <= band);
    }
  CHECK(hr_sample(HrParam(1.0), 50, 9) == hr_sample(HrParam(1.0), 50, 9));
}
