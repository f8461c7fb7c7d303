#include <cmath>
#include <fstream>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "worlds.hpp"

#include "pirogue/errors.hpp"
#include "pirogue/ports.hpp"

using namespace pirogue;

namespace {

LandingSite site(double capacity) {
  LandingSite s;
  s.name = "s";
  s.capacity = capacity;
  return s;
}

}  // namespace

TEST_SUITE("ports") {
  TEST_CASE("Dakar saturates after 300 + 500 t") {
    auto sites = default_sites();
    auto& dakar = sites[static_cast<std::size_t>(*find_site(sites, "Dakar"))];
    CHECK(dakar.capacity == 750.0);
    record_landing(dakar, 300);
    CHECK_FALSE(is_saturated(dakar));
    record_landing(dakar, 500);
    CHECK(dakar.landed_today == 800.0);
    CHECK(is_saturated(dakar));
  }

  TEST_CASE("saturation threshold is reached at capacity") {
    auto s = site(450);
    s.landed_today = 449.9;
    CHECK_FALSE(is_saturated(s));
    s.landed_today = 450;
    CHECK(is_saturated(s));
    auto two = site(100);
    record_landing(two, 40);
    record_landing(two, 59);
    CHECK_FALSE(is_saturated(two));
  }

  TEST_CASE("capacity 0 is always saturated") {
    auto s = site(0);
    CHECK(is_saturated(s));
    reset_daily(std::span(&s, 1));
    CHECK(is_saturated(s));
  }

  TEST_CASE("negative landing is an invariant breach") {
    auto s = site(10);
    CHECK_THROWS_AS(record_landing(s, -1.0), InvariantError);
  }

  TEST_CASE("daily reset archives and clears") {
    auto sites = default_sites();
    for (auto& s : sites) s.landed_today = s.capacity + 1;
    reset_daily(sites);
    for (const auto& s : sites) {
      CHECK(s.landed_today == 0.0);
      CHECK_FALSE(is_saturated(s));
      REQUIRE(s.daily_landings.size() == 1);
      CHECK(s.daily_landings[0] == s.capacity + 1);
    }
  }

  TEST_CASE("default registry") {
    const auto sites = default_sites();
    REQUIRE(sites.size() == 15);
    CHECK(sites.front().name == "Nouadhibou");
    CHECK(sites.front().capacity == 15400.0);
    CHECK(sites[static_cast<std::size_t>(*find_site(sites, "Kayar"))].capacity == 450.0);
    CHECK_FALSE(find_site(sites, "Atlantis").has_value());
    CHECK(site_countries(sites) ==
          std::vector<std::string>{"Mauritania", "Senegal", "Gambia", "Guinee Bissau", "Guinea"});
    std::set<std::string> names;
    for (const auto& s : sites) names.insert(s.name);
    CHECK(names.size() == 15);
  }

  TEST_CASE("Kayar to Dakar distance matches an independent oracle") {
    const auto sites = default_sites();
    const auto& k = sites[static_cast<std::size_t>(*find_site(sites, "Kayar"))];
    const auto& d = sites[static_cast<std::size_t>(*find_site(sites, "Dakar"))];
    const double expected = oracle::chord_distance_km(k.position.lat, k.position.lon, d.position.lat, d.position.lon);
    CHECK(distance_km(k.position, d.position) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(42.6).epsilon(0.02));
  }

  TEST_CASE("homogeneous capacities spread the total") {
    const auto base = default_sites();
    double total = 0.0;
    for (const auto& s : base) total += s.capacity;
    const auto h = homogeneous_sites();
    const auto h01 = homogeneous_sites(0.1);
    for (std::size_t i = 0; i < h.size(); ++i) {
      CHECK(h[i].capacity == doctest::Approx(total / 15));
      CHECK(h01[i].capacity == doctest::Approx(total / 150));
      CHECK(h[i].name == base[i].name);
    }
  }

  TEST_CASE("sites file round trip and validation") {
    const auto dir = testing::scratch_dir("ports_io");
    write_sites(dir / "s.csv", default_sites());
    const auto back = load_sites(dir / "s.csv");
    REQUIRE(back.size() == 15);
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].name == default_sites()[i].name);
      CHECK(back[i].position == default_sites()[i].position);
      CHECK(back[i].capacity == default_sites()[i].capacity);
    }
    std::ofstream(dir / "bad.csv") << "name,lat,lon,country,capacity_tons_per_day\nX,14,-17,Senegal,-5\n";
    CHECK_THROWS_AS(load_sites(dir / "bad.csv"), ValidationError);
    std::ofstream(dir / "dup.csv") << "name,lat,lon,country,capacity_tons_per_day\nX,14,-17,S,5\nX,15,-17,S,5\n";
    CHECK_THROWS_AS(load_sites(dir / "dup.csv"), ValidationError);
    std::ofstream(dir / "hdr.csv") << "name,lat,lon,capacity\nX,14,-17,5\n";
    CHECK_THROWS_AS(load_sites(dir / "hdr.csv"), ValidationError);
  }
}
