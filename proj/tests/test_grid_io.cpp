#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "nilfrac/errors.hpp"
#include "nilfrac/fields.hpp"
#include "nilfrac/grid.hpp"
#include "nilfrac/io.hpp"

using namespace nilfrac;

TEST(Grid, SpacingAndOriginPerMode) {
  const GridSpec box{3, 15, 4.0, GridMode::kHeisenberg};
  EXPECT_DOUBLE_EQ(box.spacing(), 8.0 / 14.0);
  EXPECT_EQ(box.node_count(), 3375);
  EXPECT_EQ(node_point(box, origin_node(box)), kIdentity);
  const GridSpec torus{1, 64, M_PI, GridMode::kEuclideanTorus};
  EXPECT_DOUBLE_EQ(torus.spacing(), 2 * M_PI / 64);
  EXPECT_DOUBLE_EQ(torus.coordinate(torus.origin_index()), 0.0);
}

TEST(Grid, ValidationRejectsBadSpecs) {
  EXPECT_THROW((GridSpec{3, 14, 4.0, GridMode::kHeisenberg}.validate()), ConfigError);
  EXPECT_THROW((GridSpec{2, 15, 4.0, GridMode::kHeisenberg}.validate()), ConfigError);
  EXPECT_THROW((GridSpec{1, 63, 1.0, GridMode::kEuclideanTorus}.validate()), ConfigError);
  EXPECT_THROW((GridSpec{1, 15, -1.0, GridMode::kEuclideanBox}.validate()), ConfigError);
  EXPECT_NO_THROW((GridSpec{2, 16, 1.0, GridMode::kEuclideanTorus}.validate()));
  EXPECT_THROW(parse_grid_mode("hyperbolic"), ConfigError);
  EXPECT_EQ(parse_grid_mode(to_string(GridMode::kEuclideanTorus)), GridMode::kEuclideanTorus);
}

TEST(Grid, RavelUnravelRoundTripWithLastAxisFastest) {
  const GridSpec spec{3, 5, 1.0, GridMode::kEuclideanBox};
  for (int i = 0; i < spec.node_count(); ++i) EXPECT_EQ(ravel(spec, unravel(spec, i)), i);
  EXPECT_EQ(ravel(spec, {0, 0, 1}), 1);
  EXPECT_EQ(ravel(spec, {1, 0, 0}), 25);
}

TEST(Grid, DeltaHasUnitIntegralAndNormsUseHaarWeights) {
  const GridSpec spec{2, 9, 2.0, GridMode::kEuclideanBox};
  const auto d = GridFunction::delta(spec, origin_node(spec));
  EXPECT_NEAR(integral(d), 1.0, 1e-14);
  EXPECT_NEAR(lp_norm(d, 1), 1.0, 1e-14);
  EXPECT_NEAR(lp_norm(d, 2), 1.0 / spec.spacing(), 1e-12);
  EXPECT_DOUBLE_EQ(lp_norm(d, INFINITY), 1.0 / spec.cell_volume());
  EXPECT_THROW(lp_norm(d, 3.0), ConfigError);
  EXPECT_NEAR(inner(d, d), lp_norm(d, 2) * lp_norm(d, 2), 1e-10);
}

TEST(Grid, InteriorMask) {
  const GridSpec box{1, 7, 1.0, GridMode::kEuclideanBox};
  EXPECT_FALSE(is_interior(box, 0));
  EXPECT_TRUE(is_interior(box, 1));
  EXPECT_FALSE(is_interior(box, 1, 2));
  const GridSpec torus{1, 8, 1.0, GridMode::kEuclideanTorus};
  EXPECT_TRUE(is_interior(torus, 0));
}

TEST(Io, Gf1RoundTripsBitwise) {
  const GridSpec spec{3, 5, 0.1 + 0.2, GridMode::kHeisenberg};
  const auto f = random_normal(spec, 9);
  const auto bytes = encode_gf1(f);
  EXPECT_EQ(bytes.rfind("GF1 3 5 ", 0), 0u);
  const auto g = decode_gf1(bytes);
  EXPECT_EQ(g.spec, f.spec);
  EXPECT_EQ(g.values, f.values);

  const auto dir = std::filesystem::temp_directory_path() / "nilfrac_gf1_test";
  std::filesystem::create_directories(dir);
  write_gf1(dir / "f.gf1", f);
  EXPECT_EQ(read_gf1(dir / "f.gf1").values, f.values);
  std::filesystem::remove_all(dir);
}

TEST(Io, Gf1RejectsTruncatedData) {
  const GridSpec spec{1, 8, 1.0, GridMode::kEuclideanTorus};
  auto bytes = encode_gf1(GridFunction(spec));
  bytes.pop_back();
  EXPECT_THROW(decode_gf1(bytes), Error);
  EXPECT_THROW(decode_gf1("GF2 1 8 1 euclidean_torus\n"), Error);
}

TEST(Io, AtomicWriteReplacesContents) {
  const auto path = std::filesystem::temp_directory_path() / "nilfrac_atomic.txt";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  std::filesystem::remove(path);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}
