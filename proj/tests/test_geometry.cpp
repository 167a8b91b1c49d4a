#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lnlab/errors.hpp"
#include "lnlab/geometry.hpp"

using namespace lnlab;

TEST_CASE("radial spectrum of the hyperbolic ball is 1/2") {
  for (double r : {0.0, 0.1, 0.5, 0.9, 0.999}) {
    const auto e = radial_schouten_spectrum(0.5 * (1 - r * r), -r, -1.0, r, 4);
    CHECK(e.radial == doctest::Approx(0.5));
    CHECK(e.tangential == doctest::Approx(0.5));
  }
}

TEST_CASE("radial spectrum of the exterior barrier is 2/R^2") {
  for (double R : {0.5, 1.0, 2.0}) {
    for (double s : {1.01, 1.5, 3.0}) {
      const double r = R * std::sqrt(s);
      const double v = (r * r - R * R) / (R * R);
      const auto e = radial_schouten_spectrum(v, 2 * r / (R * R), 2 / (R * R), r, 3);
      CHECK(e.radial == doctest::Approx(2 / (R * R)).epsilon(1e-12));
      CHECK(e.tangential == doctest::Approx(2 / (R * R)).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant conformal factor is flat") {
  const auto e = radial_schouten_spectrum(3.0, 0.0, 0.0, 0.7, 5);
  CHECK(e.radial == 0.0);
  CHECK(e.tangential == 0.0);
  CHECK_THROWS_AS(radial_schouten_spectrum(0.0, 1.0, 0.0, 0.5, 3), InvalidProfile);
  CHECK_THROWS_AS(radial_schouten_spectrum(1.0, 1.0, 0.0, 0.5, 2), InvalidArgument);
}

TEST_CASE("half-space spectra") {
  const auto x = halfspace_schouten_spectrum(1.3, 1.0, 0.0, 4);
  for (int i = 0; i < 4; ++i) CHECK(x[i] == doctest::Approx(0.5));
  const auto c = halfspace_schouten_spectrum(2.0, 0.0, 0.0, 3);
  for (int i = 0; i < 3; ++i) CHECK(c[i] == 0.0);
  const auto ex = halfspace_schouten_spectrum(1.0, 1.0, 1.0, 3);
  CHECK(ex == Spectrum{-0.5, 0.5, 0.5});
}

TEST_CASE("hyperbolic ball field on 1000 cells") {
  const auto p = RadialProfile::sample(Ball{1.0}, 1000,
                                       [](double r) { return 0.5 * (1 - r * r); });
  const auto f = spectrum_field(p, 3);
  const double h = p.spacing();
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(std::abs(f.radial[i] - 0.5) <= h * h);
    CHECK(std::abs(f.tangential[i] - 0.5) <= h * h);
  }
}

TEST_CASE("constant profile gives a zero field") {
  const auto p = RadialProfile::sample(Annulus{1.0, 2.0}, 50,
                                       [](double) { return 0.7; });
  const auto f = spectrum_field(p, 4);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(std::abs(f.radial[i]) < 1e-12);
    CHECK(std::abs(f.tangential[i]) < 1e-12);
  }
}

TEST_CASE("barrier field on an annulus") {
  const double R = 1.0, delta = 0.01, m = 1.0;
  const auto p = RadialProfile::sample(
      Annulus{R * std::sqrt(1 + delta), R * std::sqrt(1 + m)}, 400,
      [R](double r) { return (r * r - R * R) / (R * R); });
  const auto f = spectrum_field(p, 3);
  const double h = p.spacing();
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(std::abs(f.radial[i] - 2.0) <= 10 * h * h);
    CHECK(std::abs(f.tangential[i] - 2.0) <= 10 * h * h);
  }
}

TEST_CASE("field converges at second order for a non-polynomial profile") {
  // u = cos(r) + 0.2 on [0.3, 1.2]; exact derivatives are available
  const auto u = [](double r) { return std::cos(r) + 0.2; };
  auto error = [&](int cells) {
    const auto p = RadialProfile::sample(Annulus{0.3, 1.2}, cells, u);
    const auto f = spectrum_field(p, 4);
    double err = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double r = p.radius(i);
      const auto e = radial_schouten_spectrum(u(r), -std::sin(r), -std::cos(r), r, 4);
      err = std::max({err, std::abs(f.radial[i] - e.radial),
                      std::abs(f.tangential[i] - e.tangential)});
    }
    return err;
  };
  const double e1 = error(200), e2 = error(400), e3 = error(800);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("center rule on a ball is second order") {
  const auto u = [](double r) { return std::exp(-r * r) + 0.1; };
  auto error = [&](int cells) {
    const auto p = RadialProfile::sample(Ball{1.0}, cells, u);
    const auto f = spectrum_field(p, 3);
    // at r = 0 both eigenvalues equal -u u''(0) = 2 (1.1)
    return std::abs(f.radial[0] - 2.2) + std::abs(f.tangential[0] - 2.2);
  };
  CHECK(error(100) / error(200) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Ricci from Schouten") {
  // hyperbolic: Ric = -(n-1) g
  for (int n = 3; n <= 6; ++n) {
    const auto a = ricci_spectrum_from_schouten(Spectrum::ones(n).scaled(0.5), n);
    for (int i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(n - 1.0));
  }
  const auto z = ricci_spectrum_from_schouten(Spectrum{0.0, 0.0, 0.0}, 3);
  CHECK(z == Spectrum{0.0, 0.0, 0.0});
  CHECK(ricci_spectrum_from_schouten({1, 0, 0, 0}, 4) == Spectrum{3, 1, 1, 1});
  CHECK_THROWS_AS(ricci_spectrum_from_schouten({1, 0, 0}, 4), InvalidArgument);
}

TEST_CASE("rescaled metric bound") {
  for (double N : {0.5, 2.0, 10.0}) {
    const auto b = rescaled_metric_spectrum_bound(N, 1.5, 1.0, 1.0, 0.0, 0.0);
    CHECK(b.chi2 == 1.0);
    CHECK(b.chi1 == doctest::Approx(-1 + 2 * std::exp(-N * 1.5)));
  }
  const auto b = rescaled_metric_spectrum_bound(5.0, 1.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(b.chi2 == doctest::Approx(1 - 2 / (25 * std::exp(10.0)) -
                                  2 / (5 * std::exp(5.0)))
                      .epsilon(1e-14));
  double prev2 = 0.0, prev1 = 1.0;
  for (double N = 4.0; N <= 64.0; N *= 2) {
    const auto t = rescaled_metric_spectrum_bound(N, 1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(t.chi2 >= prev2);
    CHECK(t.chi1 <= prev1);
    prev2 = t.chi2;
    prev1 = t.chi1;
  }
  CHECK(prev2 == doctest::Approx(1.0));
  CHECK(prev1 == doctest::Approx(-1.0));
  CHECK_THROWS_AS(rescaled_metric_spectrum_bound(1.0, 1.0, 0.0, 1, 0, 0),
                  CriticalPoint);
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(RadialProfile(Ball{1.0}, {1.0, 1.0, 1.0}), InvalidProfile);
  CHECK_THROWS_AS(RadialProfile(Ball{1.0}, {1.0, 0.0, 1.0, 0.0}), InvalidProfile);
  CHECK_THROWS_AS(RadialProfile(Ball{1.0}, {1.0, -1.0, 1.0, 0.0}), InvalidProfile);
  CHECK_NOTHROW(RadialProfile(Ball{1.0}, {1.0, 0.8, 0.4, 0.0}));
  CHECK_NOTHROW(RadialProfile(Annulus{1.0, 2.0}, {0.0, 0.8, 0.4, 0.0}));
  CHECK_THROWS_AS(RadialProfile(Annulus{2.0, 1.0}, {1, 1, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(RadialProfile(Ball{-1.0}, {1, 1, 1, 1}), InvalidArgument);
}

TEST_CASE("spectrum csv") {
  const auto p = RadialProfile::sample(Ball{1.0}, 4,
                                       [](double r) { return 0.5 * (1 - r * r); });
  std::ostringstream os;
  write_spectrum_csv(os, p, spectrum_field(p, 3));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,u,radial_eig,tangential_eig");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
  CHECK(os.str().find("0.46875") != std::string::npos);
}
