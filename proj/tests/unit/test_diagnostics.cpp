#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "radial_oracle.hpp"
#include "zk3d/diagnostics.hpp"
#include "zk3d/error.hpp"
#include "zk3d/etd.hpp"
#include "zk3d/ground_state.hpp"
#include "zk3d/spectral.hpp"

using namespace zk3d;
using std::numbers::pi;

namespace {

const Grid& grid3() {
  static const Grid g = make_grid({64, 64, 64}, {3, 3, 3});
  return g;
}

const RealField& q3() {
  static const RealField q = solve_ground_state(grid3(), {}).q;
  return q;
}

const zk3d::testing::RadialProfile& oracle() {
  static const auto r = zk3d::testing::radial_ground_state();
  return r;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

RealField bump(const Grid& g, const Vec3& at, double width) {
  return RealField::sample(g, [=](double x, double y, double z) {
    const double dx = x - at[0], dy = y - at[1], dz = z - at[2];
    return std::exp(-(dx * dx + dy * dy + dz * dz) / (width * width));
  });
}

}  // namespace

TEST_CASE("mass") {
  CHECK(mass(RealField(grid3())) == 0.0);
  const double m = mass(q3());
  CHECK(rel(mass(2.5 * q3()), 6.25 * m) < 1e-12);
  CHECK(rel(m, oracle().mass) < 1e-6);
}

TEST_CASE("energy") {
  CHECK(energy(RealField(grid3())) == 0.0);

  const Grid g = make_grid({16, 24, 20}, {1.0, 1.5, 2.0});
  const double kappa = 1.3;
  const RealField c = RealField::sample(g, [=](double, double, double) { return kappa; });
  const double expected = -kappa * kappa * kappa / 3.0 * std::pow(2.0 * pi, 3) * 1.0 * 1.5 * 2.0;
  CHECK(rel(energy(c), expected) < 1e-13);

  // A single mode has no cubic contribution: E = (1/2)(a/l_y)^2 V / 2.
  const double a = 0.7;
  const RealField s = RealField::sample(g, [=](double, double y, double) { return a * std::sin(2.0 * y / 1.5); });
  const double grad = 0.5 * std::pow(2.0 * a / 1.5, 2) * g.box_volume() / 2.0;
  CHECK(rel(energy(s), grad) < 1e-13);

  CHECK(rel(energy(q3()), oracle().energy) < 1e-5);
}

TEST_CASE("energy gradient term against finite differences") {
  const Grid g = make_grid({96, 96, 96}, {2, 2, 2});
  const RealField u = bump(g, {0.3, -0.2, 0.1}, 1.4);
  // Sixth-order central differences of u on the same nodes.
  const double h = g.spacing(Axis::x);
  auto wrap = [](long i, std::size_t n) { return static_cast<std::size_t>((i + static_cast<long>(n)) % static_cast<long>(n)); };
  double grad = 0.0, cubic = 0.0;
  for (std::size_t m = 0; m < g.nz(); ++m)
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i) {
        auto d = [&](int ax) {
          auto at = [&](long s) {
            const long ii = static_cast<long>(i) + (ax == 0 ? s : 0);
            const long jj = static_cast<long>(j) + (ax == 1 ? s : 0);
            const long mm = static_cast<long>(m) + (ax == 2 ? s : 0);
            return u.at(wrap(ii, g.nx()), wrap(jj, g.ny()), wrap(mm, g.nz()));
          };
          return (45.0 * (at(1) - at(-1)) - 9.0 * (at(2) - at(-2)) + (at(3) - at(-3))) / (60.0 * h);
        };
        const double gx = d(0), gy = d(1), gz = d(2);
        grad += gx * gx + gy * gy + gz * gz;
        const double v = u.at(i, j, m);
        cubic += v * v * v;
      }
  const double fd = g.cell_volume() * (0.5 * grad - cubic / 3.0);
  CHECK(rel(energy(u), fd) < 1e-5);
}

TEST_CASE("drift") {
  CHECK(drift(3.0, 3.0) == 0.0);
  CHECK(drift(1.01 * 7.0, 7.0) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(drift(-1.01, -1.0) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK_THROWS_AS(drift(1.0, 0.0), UndefinedDriftError);
  const auto d = drift(std::vector<double>{2.0, 2.0, 2.2, 1.8});
  REQUIRE(d.size() == 4);
  CHECK(d[0] == 0.0);
  CHECK(d[2] == doctest::Approx(0.1));
  CHECK(d[3] == doctest::Approx(0.1));
  CHECK(drift(std::vector<double>{}).empty());
  CHECK_THROWS_AS(drift(std::vector<double>{0.0, 1.0}), UndefinedDriftError);
}

TEST_CASE("fit_soliton self-fit and constructed input") {
  const SolitonFit self = fit_soliton(q3(), q3());
  CHECK(self.c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(self.center[0] == 0.0);
  CHECK(self.center[1] == 0.0);
  CHECK(self.center[2] == 0.0);
  CHECK(self.relative_residual < 1e-10);

  // Shift by a whole number of nodes along x.
  const double dx = grid3().spacing(Axis::x);
  const double shift = 5.0 * dx;
  const RealField u = translate(dilate(q3(), 2.0), Vec3{shift, 0.0, 0.0});
  const SolitonFit f = fit_soliton(u, q3());
  CHECK(std::abs(f.c - 2.0) < 1e-12);
  CHECK(std::abs(f.center[0] - shift) < dx);
  CHECK(std::abs(f.center[1]) < dx);
  CHECK(std::abs(f.center[2]) < dx);
  CHECK(f.relative_residual < 1e-8);
  CHECK(f.residual_inf >= 0.0);
  CHECK(f.residual_l2 >= 0.0);

  CHECK_THROWS_AS(fit_soliton(RealField(grid3()), q3()), ParameterError);
}

TEST_CASE("fit_soliton is scale-consistent") {
  const Grid g = make_grid({64, 64, 64}, {4, 4, 4});
  const RealField q = solve_ground_state(g, {}).q;
  for (double c : {0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(c);
    const SolitonFit f = fit_soliton(dilate(q, c), q);
    CHECK(std::abs(f.c - c) < 1e-6 * c);
    CHECK(f.relative_residual < 1e-12);
  }
}

TEST_CASE("interpolated peak of a trigonometric sum") {
  // cos(x - a) + cos(y - b) + cos(z - d) peaks at (a, b, d) with value 3.
  const Grid g = make_grid({16, 16, 16}, {1, 1, 1});
  const Vec3 at{0.31, -0.17, 0.05};
  const RealField u = RealField::sample(g, [&](double x, double y, double z) {
    return std::cos(x - at[0]) + std::cos(y - at[1]) + std::cos(z - at[2]);
  });
  const Peak p = interpolated_peak(u);
  CHECK(p.value == doctest::Approx(3.0).epsilon(1e-12));
  for (int a = 0; a < 3; ++a) CHECK(std::abs(p.location[a] - at[a]) < 1e-10);
  CHECK(p.value >= max_abs(u));
  CHECK_THROWS_AS(interpolated_peak(RealField(g)), ParameterError);
}

TEST_CASE("interpolated peak falls back to the node on a flat field") {
  const Grid g = make_grid({8, 8, 8}, {1, 1, 1});
  RealField u(g);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = 2.0;
  const Peak p = interpolated_peak(u);
  CHECK(p.value == 2.0);
  const Vec3 node = node_coordinates(g, argmax_index(u));
  for (int a = 0; a < 3; ++a) CHECK(p.location[a] == node[a]);
}

TEST_CASE("interpolated fit recovers an off-node soliton") {
  const double dx = grid3().spacing(Axis::x);
  const Vec3 shift{0.4 * dx, -0.25 * dx, 0.1 * dx};
  const RealField u = translate(dilate(q3(), 2.0), shift);
  const SolitonFit f = fit_soliton(u, q3(), PeakMode::interpolated);
  // Limited by how well the grid resolves Q_2, not by the peak search.
  CHECK(std::abs(f.c - 2.0) < 2e-5);
  for (int a = 0; a < 3; ++a) CHECK(std::abs(f.center[a] - shift[a]) < 1e-6);
  CHECK(f.relative_residual < 1e-5);
  const SolitonFit coarse = fit_soliton(u, q3());
  CHECK(coarse.relative_residual > 100.0 * f.relative_residual);

  const RealField two = u + translate(dilate(q3(), 1.5), Vec3{-30.3 * dx, 0.0, 0.0});
  const TwoSolitonFit f2 = fit_two_solitons(two, q3(), 3.0, PeakMode::interpolated);
  // The tails overlap, so the two peaks shift slightly.
  CHECK(std::abs(f2.first.c - 2.0) < 1e-3);
  CHECK(std::abs(f2.second.c - 1.5) < 1e-3);
  CHECK(std::abs(f2.second.center[0] + 30.3 * dx) < 1e-2);
}

TEST_CASE("argmax ties resolve to the lowest flat index") {
  const Grid g = make_grid({16, 16, 16}, {1, 1, 1});
  RealField u(g);
  u.at(3, 9, 4) = 2.0;
  u.at(12, 2, 4) = 2.0;
  u.at(1, 1, 11) = 2.0;
  CHECK(argmax_index(u) == g.flat(12, 2, 4));
  const SolitonFit a = fit_soliton(u, bump(g, {}, 0.5));
  const SolitonFit b = fit_soliton(u, bump(g, {}, 0.5));
  CHECK(a.center[0] == b.center[0]);
  CHECK(a.residual_l2 == b.residual_l2);
}

TEST_CASE("two-soliton fit") {
  const Grid g = make_grid({64, 64, 64}, {4, 4, 4});
  const RealField q = solve_ground_state(g, {}).q;
  const double dx = g.spacing(Axis::x);
  const double a = -16.0 * dx;
  const RealField u = q + soliton_model(q, 2.0, Vec3{a, 0.0, 0.0});
  const TwoSolitonFit f = fit_two_solitons(u, q, 3.0);
  CHECK(f.first.c == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(f.first.center[0] == doctest::Approx(a));
  CHECK(f.second.c == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(f.second.center[0] == doctest::Approx(0.0));
  CHECK(f.relative_residual < 1e-2);
}

TEST_CASE("cone_norms") {
  const Grid g = make_grid({32, 32, 32}, {2, 2, 2});
  const RealField u = bump(g, {0.4, 0.1, -0.3}, 1.5);

  SUBCASE("half-space at t = 0") {
    const ConeNorms cn = cone_norms(u, 0.0, ConeParams{0.0, 0.0, ConeFrame::soliton}, Vec3{});
    double inside = 0.0, outside = 0.0;
    for (std::size_t m = 0; m < g.nz(); ++m)
      for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
          const double v = u.at(i, j, m);
          (g.node(Axis::x, i) > 0.0 ? inside : outside) += v * v;
        }
    CHECK(cn.inside == doctest::Approx(std::sqrt(inside * g.cell_volume())).epsilon(1e-14));
    CHECK(cn.outside == doctest::Approx(std::sqrt(outside * g.cell_volume())).epsilon(1e-14));
  }

  SUBCASE("field supported at x > 0") {
    RealField v = u;
    for (std::size_t m = 0; m < g.nz(); ++m)
      for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
          if (!(g.node(Axis::x, i) > 0.0)) v.at(i, j, m) = 0.0;
    const ConeNorms cn = cone_norms(v, 0.0, ConeParams{0.0, 0.0, ConeFrame::lab}, Vec3{});
    CHECK(cn.outside == 0.0);
    CHECK(cn.inside > 0.0);
  }

  SUBCASE("Pythagorean split") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double total = mass(u);
    for (int trial = 0; trial < 20; ++trial) {
      const double delta = 0.9 * uni(rng);
      const ConeParams p{delta, (pi / 3.0 - delta) * uni(rng), trial % 2 ? ConeFrame::lab : ConeFrame::soliton};
      const Vec3 center{4.0 * uni(rng) - 2.0, 4.0 * uni(rng) - 2.0, 0.0};
      const ConeNorms cn = cone_norms(u, 3.0 * uni(rng), p, center);
      CHECK(cn.inside >= 0.0);
      CHECK(cn.outside >= 0.0);
      CHECK(rel(cn.inside * cn.inside + cn.outside * cn.outside, total) < 1e-12);
    }
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(cone_norms(u, 0.0, ConeParams{0.1, pi / 3.0 - 0.05, ConeFrame::soliton}, Vec3{}),
                    ParameterError);
    CHECK_THROWS_AS(cone_norms(u, 0.0, ConeParams{-0.1, 0.0, ConeFrame::soliton}, Vec3{}), ParameterError);
    CHECK_THROWS_AS(cone_norms(u, 0.0, ConeParams{1.0, 0.0, ConeFrame::soliton}, Vec3{}), ParameterError);
    CHECK_NOTHROW(cone_norms(u, 0.0, ConeParams{0.05, pi / 3.0 - 0.05, ConeFrame::soliton}, Vec3{}));
  }
}

TEST_CASE("radiation front angle on synthetic wedges") {
  const Grid g = make_grid({128, 128, 16}, {6, 6, 1});
  for (double deg : {20.0, 30.0, 45.0}) {
    CAPTURE(deg);
    const double t = std::tan(deg * pi / 180.0);
    const RealField u = RealField::sample(g, [=](double x, double y, double) {
      return (x <= 0.0 && std::abs(y) <= -t * x) ? 1.0 : 0.0;
    });
    CHECK(std::abs(radiation_front_angle(u, 0.5) - deg * pi / 180.0) < 2.0 * pi / 180.0);
    CHECK(std::abs(radiation_front_angle(u, FrontAngleOptions{}) - deg * pi / 180.0) < 2.0 * pi / 180.0);
  }
}

TEST_CASE("radiation front angle ignores the soliton body") {
  const Grid g = make_grid({128, 128, 16}, {6, 6, 1});
  const double t = std::tan(pi / 6.0);
  const RealField body = RealField::sample(g, [](double x, double y, double z) {
    return 4.0 * std::exp(-(x * x + y * y + z * z));
  });
  // Weak oscillating radiation filling a 30 degree wedge behind the body.
  const RealField rad = RealField::sample(g, [=](double x, double y, double) {
    return (x < -2.0 && std::abs(y) <= -t * x) ? 0.05 * std::cos(3.0 * x) : 0.0;
  });
  CHECK(std::abs(radiation_front_angle(body + rad, FrontAngleOptions{}) - pi / 6.0) < 2.0 * pi / 180.0);

  CHECK_THROWS_AS(radiation_front_angle(body, FrontAngleOptions{}), NoRadiationError);
  CHECK_THROWS_AS(radiation_front_angle(body, 0.05 * 4.0), NoRadiationError);
}

TEST_CASE("radiation front angle on a pure soliton") {
  CHECK_THROWS_AS(radiation_front_angle(q3(), FrontAngleOptions{}), NoRadiationError);
  CHECK_THROWS_AS(radiation_front_angle(q3(), 0.05 * max_abs(q3())), NoRadiationError);
}

TEST_CASE("radiation front angle needs trailing radiation") {
  const Grid g = make_grid({32, 32, 16}, {2, 2, 1});
  RealField u(g);
  u.at(5, 16, 8) = 1.0;
  CHECK_THROWS_AS(radiation_front_angle(u, 0.5), NoRadiationError);
  CHECK_THROWS_AS(radiation_front_angle(RealField(g), FrontAngleOptions{}), NoRadiationError);
}

TEST_CASE("xline integrals") {
  const Grid g = make_grid({32, 24, 16}, {1.5, 1.0, 2.0});
  const RealField odd = RealField::sample(g, [](double x, double y, double z) {
    return std::sin(x / 1.5) * std::exp(-y * y - 0.5 * z * z);
  });
  for (double v : xline_integrals(odd)) CHECK(std::abs(v) < 1e-14);

  const RealField c = RealField::sample(g, [](double, double, double) { return 0.8; });
  for (double v : xline_integrals(c)) CHECK(v == doctest::Approx(2.0 * pi * 1.5 * 0.8).epsilon(1e-14));

  // Equals 2 pi l_x times the xi_x = 0 coefficient plane.
  const RealField u = bump(g, {0.2, -0.1, 0.3}, 1.0);
  const SpectralField uh = forward_transform(u);
  const RealField plane = inverse_transform(uh);  // same field, now via the spectrum
  const auto lines = xline_integrals(u);
  REQUIRE(lines.size() == g.ny() * g.nz());
  SpectralField zero_plane(g);
  for (std::size_t kz = 0; kz < g.nz(); ++kz)
    for (std::size_t ky = 0; ky < g.ny(); ++ky) zero_plane.at(0, ky, kz) = uh.at(0, ky, kz);
  const RealField mean_x = inverse_transform(zero_plane);
  for (std::size_t m = 0; m < g.nz(); ++m)
    for (std::size_t j = 0; j < g.ny(); ++j)
      CHECK(lines[j + g.ny() * m] == doctest::Approx(2.0 * pi * 1.5 * mean_x.at(0, j, m)).epsilon(1e-12));
  CHECK(max_abs(plane - u) < 1e-14);
}

TEST_CASE("xline integrals are conserved by evolution") {
  const Grid g = make_grid({32, 32, 32}, {2, 2, 2});
  const RealField u0 = 3.0 * bump(g, {0.3, 0.2, -0.1}, 1.2);
  EvolutionConfig cfg;
  cfg.t_end = 0.1;
  cfg.n_steps = 50;
  cfg.v_x = 0.7;
  const auto before = xline_integrals(u0);
  const auto after = xline_integrals(evolve(u0, cfg, {}).final_field);
  double scale = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < before.size(); ++k) {
    scale = std::max(scale, std::abs(before[k]));
    worst = std::max(worst, std::abs(after[k] - before[k]));
  }
  CHECK(worst <= 1e-13 * scale);
}

TEST_CASE("spectral decay report") {
  const Grid g = make_grid({32, 32, 32}, {2, 2, 2});
  const RealField mode = RealField::sample(g, [](double x, double y, double) { return std::cos(3.0 * x / 2.0 + y); });
  const SpectralDecay single = spectral_decay_report(forward_transform(mode));
  REQUIRE(single.shell_max.size() == 17);
  CHECK(single.shell_max[3] == doctest::Approx(0.5).epsilon(1e-13));
  for (std::size_t s = 4; s < single.shell_max.size(); ++s) CHECK(single.shell_max[s] < 1e-15);
  CHECK(single.outer() < 1e-15);

  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  RealField noise(g);
  for (auto& v : noise.values()) v = nd(rng);
  const SpectralDecay flat = spectral_decay_report(forward_transform(noise));
  CHECK(flat.outer() > 0.1 * flat.shell_max[1]);
  CHECK(flat.outer_band(3) >= flat.outer());

  const Grid fine = make_grid({128, 128, 128}, {3, 3, 3});
  const RealField q = solve_ground_state(fine, {}).q;
  CHECK(spectral_decay_report(forward_transform(q)).outer() < 1e-10);
}

TEST_CASE("sampler measures drift from its first sample") {
  const Grid g = make_grid({16, 16, 16}, {1, 1, 1});
  const RealField u = bump(g, {}, 1.0);
  const RealField v = 1.1 * u;
  SamplerOptions opts;
  opts.cone = ConeParams{0.05, 0.2, ConeFrame::soliton};
  Sampler s = make_sampler(opts);
  const DiagnosticsRecord r0 = s(0.0, u, forward_transform(u));
  const DiagnosticsRecord r1 = s(0.5, v, forward_transform(v));
  CHECK(r0.mass_drift == 0.0);
  CHECK(r0.energy_drift == 0.0);
  CHECK(r1.mass_drift == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(r1.energy_drift == doctest::Approx(drift(energy(v), energy(u))).epsilon(1e-12));
  CHECK(r1.linf == doctest::Approx(1.1 * max_abs(u)));
  CHECK(r1.has_cone);
  CHECK(rel(r1.cone_inside * r1.cone_inside + r1.cone_outside * r1.cone_outside, mass(v)) < 1e-12);
}
