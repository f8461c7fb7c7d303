#include <cmath>

#include "doctest.h"
#include "worlds.hpp"

#include "pirogue/ascii_grid.hpp"
#include "pirogue/env_grid.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/species.hpp"
#include "pirogue/synthetic_env.hpp"

using namespace pirogue;
using pirogue::testing::data_dir;

namespace {
SimClock month_clock(int month) {
  SimClock c;
  c.month = month;
  return c;
}
}  // namespace

TEST_SUITE("env_grid") {
  TEST_CASE("a +3 offset adds exactly 3 to every queried SST") {
    const auto g0 = load_environment(data_dir() / "desk" / "env", 0.0);
    const auto g3 = load_environment(data_dir() / "desk" / "env", 3.0);
    for (int m = 1; m <= 12; ++m)
      for (const CellId id : g0.sea_cells()) {
        const double raw = g0.raw_sst(g0.layer_index(month_clock(m)), id);
        REQUIRE(sst_at(g3, id, month_clock(m)) == raw + 3.0);
        REQUIRE(sst_at(g0, id, month_clock(m)) == raw);
      }
  }

  TEST_CASE("loading twice gives identical grids") {
    const auto a = load_environment(data_dir() / "desk" / "env", 0.0);
    const auto b = load_environment(data_dir() / "desk" / "env", 0.0);
    REQUIRE(a.cell_count() == b.cell_count());
    CHECK(a.sea_cells() == b.sea_cells());
    for (std::size_t l = 0; l < a.layer_count(); ++l)
      for (const CellId id : a.sea_cells()) REQUIRE(a.raw_sst(l, id) == b.raw_sst(l, id));
  }

  TEST_CASE("offset is additive on a single cell") {
    const auto g = testing::flat_grid(2, 2, 50.0, 25.0).with_delta_sst(1.5);
    CHECK(sst_at(g, Cell{1, 1}, SimClock{}) == 26.5);
  }

  TEST_CASE("months select their own layer") {
    GridGeometry geo;
    geo.nrows = 1;
    geo.ncols = 1;
    const auto g = testing::make_grid(geo, [](int, int) { return 10.0; }, [](int m, int, int) { return 20.0 + m; });
    CHECK(sst_at(g, CellId{0}, month_clock(1)) == 21.0);
    CHECK(sst_at(g, CellId{0}, month_clock(7)) == 27.0);
  }

  TEST_CASE("land cells have no SST") {
    GridGeometry geo;
    geo.nrows = 1;
    geo.ncols = 2;
    const auto g = testing::make_grid(geo, [](int, int c) { return c == 0 ? 10.0 : NAN; }, [](int, int, int) { return 20.0; });
    CHECK(g.is_sea(0));
    CHECK_FALSE(g.is_sea(1));
    CHECK_THROWS_AS(sst_at(g, CellId{1}, SimClock{}), InvariantError);
  }

  TEST_CASE("mismatched raster shapes are rejected naming both files") {
    const auto dir = testing::scratch_dir("env_mismatch");
    AsciiGrid bathy{4, 3, -18.0, 14.0, 0.09, -9999.0, std::vector<double>(12, 50.0)};
    write_ascii_grid(dir / "bathy.asc", bathy);
    AsciiGrid sst{5, 3, -18.0, 14.0, 0.09, -9999.0, std::vector<double>(15, 25.0)};
    for (int m = 1; m <= 12; ++m) {
      char name[32];
      std::snprintf(name, sizeof name, "sst_clim_%02d.asc", m);
      write_ascii_grid(dir / name, m == 1 ? sst : AsciiGrid{4, 3, -18.0, 14.0, 0.09, -9999.0, std::vector<double>(12, 25.0)});
    }
    try {
      load_environment(dir, 0.0);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find("bathy.asc") != std::string::npos);
      CHECK(what.find("sst_clim_01.asc") != std::string::npos);
    }
  }

  TEST_CASE("missing directory is a validation error") {
    CHECK_THROWS_AS(load_environment(data_dir() / "no_such_env", 0.0), ValidationError);
  }

  TEST_CASE("write then load round-trips the synthetic grid") {
    const auto dir = testing::scratch_dir("env_roundtrip");
    const auto g = make_synthetic_environment(SyntheticPreset::desk);
    write_environment(dir, g);
    const auto back = load_environment(dir, 0.0);
    CHECK(back.nrows() == g.nrows());
    CHECK(back.ncols() == g.ncols());
    CHECK(back.sea_cells() == g.sea_cells());
    for (const CellId id : g.sea_cells()) {
      // Files hold depth to 0.1 m and SST to 0.001 degC.
      CHECK(std::abs(back.depth(id) - g.depth(id)) <= 0.05 + 1e-9);
      CHECK(std::abs(back.raw_sst(6, id) - g.raw_sst(6, id)) <= 0.0005 + 1e-9);
    }
  }

  TEST_CASE("a Senegal shelf cell cycles seasonally inside 18-30 degC") {
    const auto g = load_environment(data_dir() / "fullscale" / "env", 0.0);
    const auto cell = g.cell_at({14.92, -17.30});
    REQUIRE(cell);
    REQUIRE(g.is_sea(*cell));
    double lo = 1e9, hi = -1e9;
    for (int m = 1; m <= 12; ++m) {
      const double t = sst_at(g, *cell, month_clock(m));
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    CHECK(lo >= 18.0);
    CHECK(hi <= 30.0);
    CHECK(hi - lo > 2.0);
  }

  TEST_CASE("synthetic SST decreases northward in every column and month") {
    for (const auto preset : {SyntheticPreset::desk, SyntheticPreset::fullscale}) {
      const auto g = make_synthetic_environment(preset);
      for (int m = 1; m <= 12; ++m)
        for (int c = 0; c < g.ncols(); ++c) {
          double prev = INFINITY;
          for (int r = 0; r < g.nrows(); ++r) {
            const CellId id = g.id({r, c});
            if (!g.is_sea(id)) continue;
            const double t = sst_at(g, id, month_clock(m));
            REQUIRE(t < prev);
            prev = t;
          }
        }
    }
  }
}

TEST_SUITE("habitat") {
  TEST_CASE("warm shallow cell is Guinean demersal habitat") {
    const auto g = testing::flat_grid(1, 1, 50.0, 26.0);
    const auto species = default_species();
    CHECK(habitat_mask(g, species[0].envelope(), SimClock{}).contains(0));
  }

  TEST_CASE("17 degC excludes every default species") {
    const auto g = testing::flat_grid(1, 1, 50.0, 17.0);
    for (const auto& sp : default_species()) CHECK(habitat_mask(g, sp.envelope(), SimClock{}).empty());
  }

  TEST_CASE("depth window is closed at both ends") {
    GridGeometry geo;
    geo.nrows = 1;
    geo.ncols = 4;
    const double depths[] = {0.5, 100.0, 100.5, 300.0};
    const auto g = testing::make_grid(geo, [&](int, int c) { return depths[c]; }, [](int, int, int) { return 20.0; });
    const auto mask = habitat_mask(g, {18.0, 25.0, 0.0, 100.0}, SimClock{});
    CHECK(mask.cells == std::vector<CellId>{0, 1});
  }

  TEST_CASE("an offset on the grid equals the opposite shift of the envelope") {
    const auto g0 = load_environment(data_dir() / "desk" / "env", 0.0);
    for (const double d : {-2.0, -0.7, 0.3, 1.5, 3.0}) {
      const auto gd = g0.with_delta_sst(d);
      for (const auto& sp : default_species())
        for (int m = 1; m <= 12; ++m) {
          auto shifted = sp.envelope();
          shifted.t_min -= d;
          shifted.t_max -= d;
          const auto a = habitat_mask(gd, sp.envelope(), month_clock(m));
          const auto b = habitat_mask(g0, shifted, month_clock(m));
          REQUIRE(a.inside == b.inside);
        }
    }
  }

  TEST_CASE("Guinean and Saharan masks overlap only where SST is 24-25 degC") {
    const auto g = load_environment(data_dir() / "fullscale" / "env", 0.0);
    const auto species = default_species();
    for (int m = 1; m <= 12; ++m) {
      const auto guinean = habitat_mask(g, species[0].envelope(), month_clock(m));
      const auto saharan = habitat_mask(g, species[1].envelope(), month_clock(m));
      for (const CellId id : guinean.cells)
        if (saharan.contains(id)) {
          const double t = sst_at(g, id, month_clock(m));
          REQUIRE(t >= 24.0);
          REQUIRE(t <= 25.0);
        }
    }
  }

  TEST_CASE("warming never moves a habitat centroid south on a north-cold gradient") {
    // Exhaustive scan on a synthetic gradient: SST falls 1 degC per row northward.
    GridGeometry geo;
    geo.nrows = 40;
    geo.ncols = 6;
    geo.origin_lat = 10.0;
    const auto g0 = testing::make_grid(geo, [](int, int) { return 50.0; },
                                       [](int m, int r, int c) { return 32.0 - 0.5 * r - 0.01 * c + 0.3 * (m % 5); });
    const auto g3 = g0.with_delta_sst(3.0);
    for (const auto& sp : default_species())
      for (int m = 1; m <= 12; ++m) {
        const auto ref = habitat_mask(g0, sp.envelope(), month_clock(m));
        const auto warm = habitat_mask(g3, sp.envelope(), month_clock(m));
        if (ref.empty() || warm.empty()) continue;
        double ref_lat = 0.0, warm_lat = 0.0;
        for (const CellId id : ref.cells) ref_lat += g0.center(id).lat;
        for (const CellId id : warm.cells) warm_lat += g0.center(id).lat;
        ref_lat /= static_cast<double>(ref.size());
        warm_lat /= static_cast<double>(warm.size());
        CHECK(*mask_centroid_lat(g3, warm) == doctest::Approx(warm_lat));
        CHECK(warm_lat >= ref_lat);
      }
  }
}
