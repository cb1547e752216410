#include "pdeit/scattering.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <stdexcept>

#include "doctest.h"
#include "pdeit/fem.hpp"
#include "pdeit/ls.hpp"
#include "support/helpers.hpp"
#include "support/pipeline.hpp"

using namespace pdeit;
using pdeit::testing::make_pipes;
using pdeit::testing::Pipes;
using pdeit::testing::s_at;
using pdeit::testing::sweep;
using pdeit::testing::t_at;

namespace {

const Pipes& bump_pipes() {
  static Pipes p = make_pipes(phantom_c2(), 64, 1.0, 5);
  return p;
}

const Pipes& faint_pipes() {
  static Pipes p = make_pipes(phantom_c2(0.01, Complex(0.3, 0.3), 0.4), 64, 1.0, 5);
  return p;
}

const Pipes& mirror_pipes() {
  static Pipes p = make_pipes(phantom_c2(2.0, Complex(0.3, 0.0), 0.4), 64, 1.0, 5);
  return p;
}

const Pipes& jump_pipes() {
  static Pipes p = make_pipes(phantom_discontinuous(), 64, 1.0, 5);
  return p;
}

const Pipes& jump_quarter_pipes() {
  static Pipes p = make_pipes(phantom_discontinuous(), 64, 0.25, 5);
  return p;
}

const Pipes& flat_pipes() {
  static Pipes p = make_pipes(phantom_homogeneous(), 64, 1.0, 4);
  return p;
}

}  // namespace

TEST_CASE("frequency lists cover the punctured truncation disc in row-major order") {
  auto ks = scattering_frequencies(1.0, 0.5);
  CHECK(ks.size() == 12);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(std::abs(ks[i]) >= 0.1);
    CHECK(std::abs(ks[i]) <= 1.0 + 1e-12);
    if (i > 0) {
      const bool later_row = ks[i].imag() > ks[i - 1].imag() + 1e-12;
      const bool same_row = std::abs(ks[i].imag() - ks[i - 1].imag()) <= 1e-12;
      CHECK((later_row || (same_row && ks[i].real() > ks[i - 1].real())));
    }
  }
  CHECK(scattering_frequencies(0.1, 0.1).size() == 4);
}

TEST_CASE("frequency grid construction validates radius and spacing") {
  CHECK_THROWS_AS(make_scattering_grid(ScatteringKind::T, 1.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(make_scattering_grid(ScatteringKind::T, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_scattering_grid(ScatteringKind::T, 1.0, -0.5), std::invalid_argument);

  auto g = make_scattering_grid(ScatteringKind::S12, 1.0, 0.5);
  CHECK(g.kind == ScatteringKind::S12);
  CHECK(g.n() == 5);
  CHECK(std::abs(g.point(0, 0) - Complex(-1.0, -1.0)) <= 1e-15);
  CHECK(std::abs(g.point(4, 4) - Complex(1.0, 1.0)) <= 1e-15);
  CHECK(std::abs(g.point(2, 2)) <= 1e-15);
  CHECK(!g.in_disc(0, 0));
  CHECK(g.in_disc(2, 0));
  CHECK(g.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a homogeneous field produces exactly zero frequency data") {
  const auto& p = flat_pipes();
  CHECK(p.delta.matrix.cwiseAbs().maxCoeff() == 0.0);

  auto psi = sweep(TraceKind::Psi, p.delta, p.basis, 1.0, 0.5);
  auto t = scattering_t(p.delta, p.basis, psi, 1.0, 0.5);
  CHECK(t.values.cwiseAbs().maxCoeff() == 0.0);

  auto u1 = sweep(TraceKind::U1, p.delta, p.basis, 1.0, 0.5);
  auto u2 = sweep(TraceKind::U2, p.delta, p.basis, 1.0, 0.5);
  auto [s12, s21] = scattering_S(p.delta, p.basis, u1, u2, 1.0, 0.5);
  CHECK(s12.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s21.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero-frequency fill is exact for quadratic data and rejects thin annuli") {
  auto g = make_scattering_grid(ScatteringKind::T, 1.0, 0.125);
  const Complex c0(0.3, -0.2), cx(1.1, 0.4), cy(-0.7, 0.9);
  const Complex cxx(0.5, -0.1), cxy(-0.3, 0.6), cyy(0.2, 0.8);
  auto quadratic = [&](Complex k) {
    const double x = k.real(), y = k.imag();
    return c0 + cx * x + cy * y + cxx * x * x + cxy * x * y + cyy * y * y;
  };
  const int n = g.n();
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const Complex k = g.point(row, col);
      if (g.in_disc(row, col) && std::abs(k) >= 0.1) g.values(row, col) = quadratic(k);
    }
  }

  auto filled = interpolate_to_zero(g);
  CHECK(std::abs(filled.values(n / 2, n / 2) - c0) <= 1e-10);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (std::abs(g.point(row, col)) >= 0.1) {
        CHECK(filled.values(row, col) == g.values(row, col));
      }
    }
  }

  auto zeros = make_scattering_grid(ScatteringKind::T, 1.0, 0.125);
  CHECK(interpolate_to_zero(zeros).values.cwiseAbs().maxCoeff() == 0.0);

  auto thin = make_scattering_grid(ScatteringKind::T, 0.1, 0.1);
  CHECK_THROWS_AS(interpolate_to_zero(thin), std::invalid_argument);
}

TEST_CASE("the faint-bump transform matches its linearization") {
  const auto& p = faint_pipes();
  auto pg = schrodinger_potential(phantom_c2(0.01, Complex(0.3, 0.3), 0.4));
  struct Probe {
    Complex k;
    double tol;
  };
  for (const Probe& probe : {Probe{Complex(0.5, 0.0), 0.25}, Probe{Complex(1.0, 0.0), 0.10},
                             Probe{Complex(1.0, 1.0), 0.10}}) {
    const Complex got = t_at(p.delta, p.basis, probe.k);
    const Complex lin = pdeit::testing::born_t(pg, probe.k);
    CHECK(std::abs(lin) > 0.0);
    CHECK(std::abs(got - lin) <= probe.tol * std::abs(lin));
  }
}

TEST_CASE("the boundary transform agrees with the volume-equation identity") {
  const auto& p = bump_pipes();
  auto pg = schrodinger_potential(phantom_c2());
  for (const Complex k : {Complex(0.5, 0.0), Complex(1.0, 0.0)}) {
    auto sol = lippmann_schwinger(pg, k);
    const Complex want = pdeit::testing::volume_t(pg, sol, k);
    const Complex got = t_at(p.delta, p.basis, k);
    CHECK(std::abs(want) > 1e-3);
    CHECK(std::abs(got - want) <= 0.05 * std::abs(want));
  }
}

TEST_CASE("the numerical transform grows sharply past the reliable frequency band") {
  const auto& p = bump_pipes();
  GmresOptions loose;
  loose.tol = 1e-8;
  const double low = std::abs(t_at(p.delta, p.basis, Complex(3.0, 0.0), loose));
  const double high = std::abs(t_at(p.delta, p.basis, Complex(12.0, 0.0), loose));
  CHECK(low > 0.0);
  CHECK(high >= 10.0 * low);
}

TEST_CASE("conjugate frequency pairs mirror the transform of a mirror phantom") {
  const auto& p = mirror_pipes();
  auto psi = sweep(TraceKind::Psi, p.delta, p.basis, 1.0, 0.5);
  auto t = scattering_t(p.delta, p.basis, psi, 1.0, 0.5);

  const int n = t.n();
  double defect = 0.0;
  double scale = 0.0;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (!t.in_disc(row, col) || std::abs(t.point(row, col)) < 0.1) continue;
      scale = std::max(scale, std::abs(t.values(row, col)));
      const Complex mirrored = t.values(row, n - 1 - col);
      defect = std::max(defect, std::abs(t.values(row, col) - std::conj(mirrored)));
    }
  }
  CHECK(scale >= 0.1);
  CHECK(defect <= 1e-4);

  const Complex plus = t_at(p.delta, p.basis, Complex(0.75, 0.0));
  const Complex minus = t_at(p.delta, p.basis, Complex(-0.75, 0.0));
  CHECK(std::abs(minus - std::conj(plus)) <= 1e-9);
}

TEST_CASE("off-diagonal data at mirrored frequencies are conjugate pairs") {
  const auto& p = bump_pipes();
  for (const Complex k : {Complex(0.5, 0.0), Complex(1.0, 0.5)}) {
    const auto at_k = s_at(p.delta, p.basis, k);
    const auto at_kbar = s_at(p.delta, p.basis, std::conj(k));
    CHECK(std::abs(at_k.first) > 1e-4);
    CHECK(std::abs(at_k.second - std::conj(at_kbar.first)) <= 1e-12);
    CHECK(std::abs(at_k.first - std::conj(at_kbar.second)) <= 1e-12);
  }
}

TEST_CASE("restricting the arc visibly changes the off-diagonal data") {
  const auto& full = jump_pipes();
  const auto& quarter = jump_quarter_pipes();

  auto run = [](const Pipes& p) {
    auto u1 = sweep(TraceKind::U1, p.delta, p.basis, 2.0, 0.5);
    auto u2 = sweep(TraceKind::U2, p.delta, p.basis, 2.0, 0.5);
    return scattering_S(p.delta, p.basis, u1, u2, 2.0, 0.5);
  };
  const auto [f12, f21] = run(full);
  const auto [q12, q21] = run(quarter);

  CHECK(f21.values.norm() >= 0.01);
  const double gap = (f21.values - q21.values).norm() / f21.values.norm();
  CHECK(gap >= 0.10);
}

TEST_CASE("transform assembly demands a matching trace bundle") {
  const auto& p = flat_pipes();
  auto psi = sweep(TraceKind::Psi, p.delta, p.basis, 1.0, 0.5);

  TraceSet cut = psi;
  cut.ks.pop_back();
  cut.residuals.pop_back();
  cut.traces.conservativeResize(Eigen::NoChange, cut.traces.cols() - 1);
  CHECK_THROWS_AS(scattering_t(p.delta, p.basis, cut, 1.0, 0.5), std::invalid_argument);

  auto u1 = sweep(TraceKind::U1, p.delta, p.basis, 1.0, 0.5);
  CHECK_THROWS_AS(scattering_t(p.delta, p.basis, u1, 1.0, 0.5), std::invalid_argument);

  TraceSet wrong_arc = psi;
  wrong_arc.fraction = 0.5;
  CHECK_THROWS_AS(scattering_t(p.delta, p.basis, wrong_arc, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("frequency grid files round trip exactly") {
  auto g = make_scattering_grid(ScatteringKind::S21, 1.0, 0.5);
  g.sigma_tag = "unit";
  g.fraction = 0.75;
  const int n = g.n();
  const VectorXcd noise = pdeit::testing::random_complex_vector(n * n, 91u);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (g.in_disc(row, col)) g.values(row, col) = noise[row * n + col];
    }
  }

  const auto file = std::filesystem::temp_directory_path() / "pdeit_scattering_rt.txt";
  save_scattering_grid(file, g);
  auto back = load_scattering_grid(file);
  std::filesystem::remove(file);

  CHECK(back.kind == g.kind);
  CHECK(back.R == g.R);
  CHECK(back.dk == g.dk);
  CHECK(back.sigma_tag == g.sigma_tag);
  CHECK(back.fraction == g.fraction);
  CHECK((back.values - g.values).cwiseAbs().maxCoeff() <= 1e-14);
}
