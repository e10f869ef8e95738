#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "uavloc/crlb.hpp"
#include "uavloc/tdoa.hpp"

using namespace uavloc;

namespace {

SensorNetwork square_net() {
  SensorNetwork net;
  net.sensors = {{0, 0, 10}, {1000, 0, 12}, {1000, 1000, 8}, {0, 1000, 15}};
  net.reference_index = 0;
  return net;
}

SensorNetwork random_net(std::mt19937_64& rng, std::size_t n = 4) {
  std::uniform_real_distribution<double> u(-900.0, 900.0);
  std::uniform_real_distribution<double> h(0.0, 40.0);
  SensorNetwork net;
  for (std::size_t i = 0; i < n; ++i) {
    net.sensors.push_back({u(rng), u(rng), h(rng)});
  }
  net.reference_index = 0;
  return net;
}

Position random_query(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-700.0, 700.0);
  std::uniform_real_distribution<double> h(40.0, 150.0);
  return {u(rng), u(rng), h(rng)};
}

}  // namespace

TEST_CASE("jacobian row for opposing unit vectors") {
  SensorNetwork net;
  net.sensors = {{1, 0, 0}, {-1, 0, 0}};
  net.reference_index = 0;
  const Eigen::MatrixXd jac = jacobian(net, {0, 0, 0});
  REQUIRE(jac.rows() == 1);
  CHECK(jac(0, 0) == doctest::Approx(-2.0));
  CHECK(jac(0, 1) == doctest::Approx(0.0));
  CHECK(jac(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("jacobian rows have norm at most 2") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const SensorNetwork net = random_net(rng);
    const Eigen::MatrixXd jac = jacobian(net, random_query(rng));
    for (Eigen::Index r = 0; r < jac.rows(); ++r) {
      CHECK(jac.row(r).norm() <= 2.0 + 1e-12);
    }
  }
}

TEST_CASE("jacobian matches central finite differences of the mean vector") {
  std::mt19937_64 rng(13);
  const double h = 1e-3;
  for (int t = 0; t < 120; ++t) {
    const SensorNetwork net = random_net(rng);
    const Position x = random_query(rng);
    const Eigen::MatrixXd jac = jacobian(net, x);

    Eigen::MatrixXd fd(jac.rows(), 3);
    for (int axis = 0; axis < 3; ++axis) {
      Position lo = x, hi = x;
      (axis == 0 ? hi.x : axis == 1 ? hi.y : hi.z) += h;
      (axis == 0 ? lo.x : axis == 1 ? lo.y : lo.z) -= h;
      fd.col(axis) = (mean_vector(net, hi) - mean_vector(net, lo)) / (2.0 * h);
    }
    CHECK((jac - fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("jacobian row on the perpendicular bisector is axial") {
  SensorNetwork net;
  net.sensors = {{-300, 0, 0}, {300, 0, 0}};
  net.reference_index = 0;
  // x equidistant from both sensors: the off-axis components cancel
  const Eigen::MatrixXd jac = jacobian(net, {0, 150, 80});
  REQUIRE(jac.rows() == 1);
  CHECK(std::abs(jac(0, 1)) < 1e-12);
  CHECK(std::abs(jac(0, 2)) < 1e-12);
  CHECK(std::abs(jac(0, 0)) > 0.1);
}

TEST_CASE("coplanar geometry is singular in z") {
  SensorNetwork net;
  net.sensors = {{0, 0, 50}, {1000, 0, 50}, {1000, 1000, 50}, {0, 1000, 50}};
  net.reference_index = 0;
  RadioConfig cfg;
  const Eigen::Matrix3d f = fim(net, {300, 400, 50}, cfg);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(f);
  CHECK(es.eigenvalues()(0) < 1e-12 * es.eigenvalues()(2));
}

TEST_CASE("symmetric square at the elevated centroid: diagonal FIM, no z info") {
  SensorNetwork net;
  net.sensors = {{500, 500, 0}, {-500, 500, 0}, {-500, -500, 0}, {500, -500, 0}};
  net.reference_index = 0;
  RadioConfig cfg;
  // every sensor is equidistant from the apex, so range differences carry no
  // information about z: the FIM is diagonal with a zero z entry
  const Eigen::Matrix3d f = fim(net, {0, 0, 120}, cfg);
  const double scale = f.diagonal().cwiseAbs().maxCoeff();
  REQUIRE(scale > 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(std::abs(f(i, j)) <= 1e-9 * scale);
    }
  }
  CHECK(f(0, 0) == doctest::Approx(f(1, 1)).epsilon(1e-9));
  CHECK(std::abs(f(2, 2)) <= 1e-9 * scale);
  try {
    crlb(net, {0, 0, 120}, cfg);
    FAIL("expected GeometryDegenerateError");
  } catch (const GeometryDegenerateError& e) {
    CHECK(std::abs(e.deficient_direction(2)) == doctest::Approx(1.0));
  }
}

TEST_CASE("fim equals the explicit sum-over-pairs quadratic form") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 30; ++t) {
    const SensorNetwork net = random_net(rng, 5);
    const Position x = random_query(rng);
    RadioConfig cfg;
    const Eigen::Matrix3d f = fim(net, x, cfg);

    const Eigen::MatrixXd jac = jacobian(net, x);
    const Eigen::MatrixXd qinv =
        covariance_matrix(range_sigmas(net, x, cfg), net.reference_index)
            .inverse();
    Eigen::Matrix3d naive = Eigen::Matrix3d::Zero();
    for (Eigen::Index a = 0; a < jac.rows(); ++a) {
      for (Eigen::Index b = 0; b < jac.rows(); ++b) {
        naive += qinv(a, b) * jac.row(a).transpose() * jac.row(b);
      }
    }
    CHECK((f - naive).cwiseAbs().maxCoeff() <
          1e-9 * naive.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("fim symmetry and positive semidefiniteness on random geometries") {
  std::mt19937_64 rng(37);
  RadioConfig cfg;
  for (int t = 0; t < 200; ++t) {
    const SensorNetwork net = random_net(rng);
    const Eigen::Matrix3d f = fim(net, random_query(rng), cfg);
    CHECK((f - f.transpose()).cwiseAbs().maxCoeff() <=
          1e-12 * f.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(f);
    CHECK(es.eigenvalues()(0) >= -1e-9 * es.eigenvalues()(2));
  }
}

TEST_CASE("collinear sensors raise a geometry-degenerate error") {
  SensorNetwork net;
  net.sensors = {{0, 0, 10}, {300, 0, 10}, {600, 0, 10}, {900, 0, 10}};
  net.reference_index = 0;
  RadioConfig cfg;
  CHECK_THROWS_AS(crlb(net, {100, 0, 80}, cfg), GeometryDegenerateError);
  try {
    crlb(net, {100, 0, 80}, cfg);
  } catch (const GeometryDegenerateError& e) {
    CHECK(std::string(e.what()).find("geometry-degenerate") != std::string::npos);
    CHECK(e.deficient_direction.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("scaling all sigmas by a scales the CRLB trace by a^2") {
  const SensorNetwork net = square_net();
  const Position x{200, 300, 70};
  RadioConfig cfg;
  const double base = crlb(net, x, cfg).crlb_trace_m2;
  for (double a : {2.0, 5.0, 0.5}) {
    // sigma scales as 1/sqrt(Pt); dropping Pt by 20*log10(a) dB scales sigma by a
    RadioConfig scaled = cfg;
    scaled.tx_power_dbm = cfg.tx_power_dbm - 20.0 * std::log10(a);
    CHECK(crlb(net, x, scaled).crlb_trace_m2 ==
          doctest::Approx(a * a * base).epsilon(1e-9));
  }
}

TEST_CASE("CRLB trace is invariant under rigid motions") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  const SensorNetwork net = square_net();
  const Position x{200, 300, 70};
  RadioConfig cfg;
  const double base = crlb(net, x, cfg).crlb_trace_m2;

  for (int t = 0; t < 25; ++t) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = g(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(m);
    Eigen::Matrix3d rot = qr.householderQ();
    if (rot.determinant() < 0.0) rot.col(0) *= -1.0;
    const Eigen::Vector3d tr(shift(rng), shift(rng), shift(rng));

    auto map = [&](const Position& p) {
      const Eigen::Vector3d v = rot * Eigen::Vector3d(p.x, p.y, p.z) + tr;
      return Position{v(0), v(1), v(2)};
    };
    SensorNetwork moved = net;
    for (Position& s : moved.sensors) s = map(s);
    CHECK(crlb(moved, map(x), cfg).crlb_trace_m2 ==
          doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("CRLB trace does not depend on the reference sensor") {
  std::mt19937_64 rng(47);
  RadioConfig cfg;
  for (int t = 0; t < 30; ++t) {
    SensorNetwork net = random_net(rng, 5);
    const Position x = random_query(rng);
    net.reference_index = 0;
    double base;
    try {
      base = crlb(net, x, cfg).crlb_trace_m2;
    } catch (const GeometryDegenerateError&) {
      continue;
    }
    for (std::size_t r = 1; r < net.size(); ++r) {
      net.reference_index = r;
      CHECK(crlb(net, x, cfg).crlb_trace_m2 ==
            doctest::Approx(base).epsilon(1e-9));
    }
  }
}

TEST_CASE("RMSE bound decreases with bandwidth") {
  const SensorNetwork net = square_net();
  const Position x{200, 300, 70};
  double prev = std::numeric_limits<double>::infinity();
  for (double b : {1.25e6, 2.5e6, 5e6}) {
    RadioConfig cfg;
    cfg.bandwidth_hz = b;
    cfg.effective_bandwidth_hz = b;
    const double bound = crlb(net, x, cfg).rmse_bound_m;
    CHECK(bound < prev);
    prev = bound;
  }
}

TEST_CASE("one-point grid equals a direct evaluation") {
  const SensorNetwork net = square_net();
  RadioConfig cfg;
  const GridRegion region{{200, 300, 70}, {200, 300, 70}};
  const CrlbGrid g = crlb_grid(net, cfg, region, 10.0);
  REQUIRE(g.rmse_bound_m.size() == 1);
  CHECK(g.rmse_bound_m[0] ==
        doctest::Approx(crlb(net, {200, 300, 70}, cfg).rmse_bound_m));
}

TEST_CASE("grid bound at 5 MHz is below 1.25 MHz everywhere nondegenerate") {
  const SensorNetwork net = square_net();
  RadioConfig lo, hi;
  lo.bandwidth_hz = lo.effective_bandwidth_hz = 1.25e6;
  hi.bandwidth_hz = hi.effective_bandwidth_hz = 5e6;
  const GridRegion region{{-400, -400, 40}, {400, 400, 40}};
  const CrlbGrid glo = crlb_grid(net, lo, region, 100.0);
  const CrlbGrid ghi = crlb_grid(net, hi, region, 100.0);
  REQUIRE(glo.rmse_bound_m.size() == ghi.rmse_bound_m.size());
  REQUIRE(glo.rmse_bound_m.size() == 81);
  for (std::size_t i = 0; i < glo.rmse_bound_m.size(); ++i) {
    if (std::isfinite(glo.rmse_bound_m[i]) && std::isfinite(ghi.rmse_bound_m[i])) {
      CHECK(ghi.rmse_bound_m[i] < glo.rmse_bound_m[i]);
    }
  }
}

TEST_CASE("degenerate grid cells are marked, not fatal") {
  SensorNetwork net;
  net.sensors = {{0, 0, 50}, {1000, 0, 50}, {1000, 1000, 50}, {0, 1000, 50}};
  net.reference_index = 0;
  RadioConfig cfg;
  // query plane equal to the sensor plane: every cell is z-degenerate
  const GridRegion region{{100, 100, 50}, {300, 300, 50}};
  const CrlbGrid g = crlb_grid(net, cfg, region, 100.0);
  for (double v : g.rmse_bound_m) {
    CHECK(std::isinf(v));
  }
}
