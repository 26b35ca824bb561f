#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "testing.hpp"

#include <cmath>
#include <random>

#include "ringsim/effects.hpp"

using namespace ringsim;
using namespace ringsim::effects;

namespace {

const Conditions ref{};  // 1 bar, 293 K

}  // namespace

TEST_CASE("built-in table carries the nine reference media") {
  const auto& table = CoefficientTable::builtin();
  REQUIRE(table.records().size() == 9);

  CHECK(table.lookup("vacuum").eta_melb == 2.7e-32);
  REQUIRE(table.lookup("vacuum").eta_meda.has_value());
  CHECK(*table.lookup("vacuum").eta_meda == -6.7e-32);
  CHECK(table.lookup("vacuum").is_vacuum());

  CHECK(table.lookup("He").eta_melb == 1.6e-24);
  CHECK(table.lookup("H").eta_melb == 3.4e-23);
  CHECK(table.lookup("Ne").eta_melb == 4.2e-24);
  CHECK(table.lookup("Ar").eta_melb == 3.6e-23);
  CHECK(table.lookup("Kr").eta_melb == 7.8e-23);
  CHECK(table.lookup("H2").eta_melb == 4.8e-23);
  CHECK(table.lookup("N2").eta_melb == 9.0e-23);
  CHECK(table.lookup("CO").eta_melb == 1.4e-22);

  for (const char* gas : {"He", "H", "Ne", "Ar", "Kr", "H2", "N2", "CO"}) {
    const auto& r = table.lookup(gas);
    CHECK_FALSE(r.eta_meda.has_value());
    CHECK(*r.ref_pressure_pa == 1.0e5);
    CHECK(*r.ref_temperature_k == 293.0);
    CHECK(r.ref_wavelength_m == 632.8e-9);
  }
}

TEST_CASE("lookup misses list the known media") {
  try {
    lookup_coefficient("xenon");
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("xenon") != std::string::npos);
    CHECK(msg.find("N2") != std::string::npos);
    CHECK(msg.find("vacuum") != std::string::npos);
  }
}

TEST_CASE("insert replaces by medium name") {
  CoefficientTable table;
  table.insert({"X", 1.0, {}, {}, {}, 1e-6});
  table.insert({"X", 2.0, {}, {}, {}, 1e-6});
  CHECK(table.records().size() == 1);
  CHECK(table.lookup("X").eta_melb == 2.0);
}

TEST_CASE("density scaling follows the ideal-gas law") {
  const auto& n2 = lookup_coefficient("N2");

  SUBCASE("reference conditions are the identity") {
    CHECK(scale_coefficient(n2, ref).eta_melb == 9.0e-23);
  }
  SUBCASE("half pressure halves the coefficient") {
    const auto scaled = scale_coefficient(n2, {0.5e5, 293.0});
    CHECK(scaled.eta_melb == rel(4.5e-23, 1e-12));
  }
  SUBCASE("temperature enters inversely") {
    const auto scaled = scale_coefficient(n2, {1.0e5, 586.0});
    CHECK(scaled.eta_melb == rel(4.5e-23, 1e-12));
  }
  SUBCASE("linearity in pressure, inverse linearity in temperature") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> press(1e3, 5e5);
    std::uniform_real_distribution<double> temp(100.0, 600.0);
    for (int i = 0; i < 50; ++i) {
      const Conditions c{press(rng), temp(rng)};
      const double expected =
          9.0e-23 * (c.pressure_pa / 1e5) * (293.0 / c.temperature_k);
      CHECK(scale_coefficient(n2, c).eta_melb == rel(expected, 1e-12));
    }
  }
  SUBCASE("rescaling composes") {
    const Conditions c1{2.0e5, 250.0};
    const Conditions c2{0.3e5, 400.0};
    const auto direct = scale_coefficient(n2, c2);
    const auto chained = scale_coefficient(scale_coefficient(n2, c1), c2);
    CHECK(chained.eta_melb == rel(direct.eta_melb, 1e-12));
  }
}

TEST_CASE("vacuum never rescales") {
  const auto& vac = lookup_coefficient("vacuum");
  const auto scaled = scale_coefficient(vac, {3.0e5, 77.0});
  CHECK(scaled.eta_melb == vac.eta_melb);
  CHECK(*scaled.eta_meda == *vac.eta_meda);
}

TEST_CASE("conditions are validated") {
  const auto& n2 = lookup_coefficient("N2");
  CHECK_THROWS_AS(scale_coefficient(n2, {-1.0, 293.0}), std::invalid_argument);
  CHECK_THROWS_AS(scale_coefficient(n2, {1e5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(scale_coefficient(n2, {1e5, -10.0}), std::invalid_argument);
}

TEST_CASE("crossed-field birefringence values") {
  SUBCASE("unit fields reproduce the coefficient") {
    CHECK(delta_n_melb("N2", 1.0, 1.0, ref) == 9.0e-23);
  }
  SUBCASE("bench fields give the working-point anisotropy") {
    const double dn = delta_n_melb("N2", 0.85, 3.5e5, ref);
    CHECK(dn == rel(2.7e-17, 0.03));
    CHECK(dn == rel(2.67750e-17, 1e-12));
  }
  SUBCASE("either field off means no effect") {
    CHECK(delta_n_melb("N2", 0.0, 3.5e5, ref) == 0.0);
    CHECK(delta_n_melb("N2", 0.85, 0.0, ref) == 0.0);
  }
  SUBCASE("bilinear in the field magnitudes") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> mag(-3.0, 3.0);
    const double base = delta_n_melb("Kr", 1.0, 1.0, ref);
    for (int i = 0; i < 50; ++i) {
      const double a = mag(rng);
      const double b = mag(rng);
      const double expected = a * b * base;
      if (expected == 0.0) continue;
      CHECK(delta_n_melb("Kr", a, b, ref) == rel(expected, 1e-13));
    }
  }
  SUBCASE("non-finite fields are rejected") {
    CHECK_THROWS_AS(delta_n_melb("N2", std::nan(""), 1.0, ref),
                    std::invalid_argument);
  }
}

TEST_CASE("directional anisotropy values") {
  SUBCASE("vacuum carries its own negative coefficient") {
    const double dn = delta_n_meda("vacuum", 15.0, 2.0e7, ref);
    CHECK(dn == rel(-2.01e-23, 1e-12));
  }
  SUBCASE("field reversal flips the sign exactly") {
    const double plus = delta_n_meda("vacuum", 15.0, 2.0e7, ref);
    CHECK(delta_n_meda("vacuum", -15.0, 2.0e7, ref) == -plus);
    CHECK(delta_n_meda("vacuum", 15.0, -2.0e7, ref) == -plus);
    CHECK(delta_n_meda("vacuum", -15.0, -2.0e7, ref) == plus);
  }
  SUBCASE("gases fall back to the supplied ratio") {
    const double dn = delta_n_meda("N2", 0.85, 3.5e5, ref, 1.0);
    CHECK(dn == rel(2.7e-17, 0.03));
    CHECK(delta_n_meda("N2", 0.85, 3.5e5, ref, -0.5) == rel(-0.5 * dn, 1e-12));
  }
  SUBCASE("gases without a ratio are an error") {
    try {
      delta_n_meda("N2", 1.0, 1.0, ref);
      FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("meda_ratio") != std::string::npos);
    }
  }
  SUBCASE("density scaling applies to the directional effect too") {
    const double base = delta_n_meda("vacuum", 1.0, 1.0, ref);
    CHECK(delta_n_meda("vacuum", 1.0, 1.0, {0.5e5, 293.0}) == base);
    CHECK(delta_n_meda("N2", 1.0, 1.0, {0.5e5, 293.0}, 1.0) ==
          rel(4.5e-23, 1e-12));
  }
}

TEST_CASE("Jones birefringence mirrors the crossed-field value") {
  const auto j = jones_from_melb(2.7e-17);
  CHECK(j.delta_n == 2.7e-17);
  CHECK(j.plus_axis_rad == rel(M_PI / 4, 1e-15));
  CHECK(j.minus_axis_rad == rel(-M_PI / 4, 1e-15));

  const auto neg = jones_from_melb(-1.0e-20);
  CHECK(neg.delta_n == -1.0e-20);
}

TEST_CASE("tensor helpers") {
  const SymTensor2 t{2.0, 0.5, -1.0};
  CHECK(t.along({1.0, 0.0}) == 2.0);
  CHECK(t.along({0.0, 1.0}) == -1.0);
  CHECK(t.max_abs() == 2.0);

  // Rotating the generating fields by +90 deg swaps the diagonal and flips
  // the cross term; twice returns the original.
  const SymTensor2 r = t.rotated_quarter_turn();
  CHECK(r.xx == -1.0);
  CHECK(r.yy == 2.0);
  CHECK(r.xy == -0.5);
  const SymTensor2 rr = r.rotated_quarter_turn();
  CHECK(rr.xx == t.xx);
  CHECK(rr.xy == t.xy);
  CHECK(rr.yy == t.yy);
}

TEST_CASE("equivalence construction on the idealized response") {
  const auto report = verify_equivalence_construction(BilinearResponse::melb(1.0));
  CHECK(report.passed);
  CHECK(report.melb_delta_n == rel(1.0, 1e-12));
  CHECK(report.jones_delta_n == rel(1.0, 1e-12));
  CHECK(report.relative_error <= 1e-12);
  CHECK(report.axis_error_rad <= 1e-12);

  const auto negative = verify_equivalence_construction(BilinearResponse::melb(-0.3));
  CHECK(negative.passed);
  CHECK(negative.jones_delta_n == rel(-0.3, 1e-12));
}

TEST_CASE("equivalence construction survives an isotropic admixture") {
  // An extra bilinear isotropic part shifts both indices equally; the
  // construction must cancel it and still recover the crossed-field value.
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> mag(0.1, 1.0);
  std::uniform_real_distribution<double> iso(-1.0, 1.0);
  std::bernoulli_distribution flip(0.5);
  for (int i = 0; i < 100; ++i) {
    const double eta = (flip(rng) ? -1.0 : 1.0) * mag(rng);
    const double c = iso(rng);
    const auto ideal = BilinearResponse::melb(eta);
    BilinearResponse mixed([ideal, c](const Vec2& e, const Vec2& b) {
      SymTensor2 t = ideal(e, b);
      const double common = c * (e.x * b.y - e.y * b.x);
      t.xx += common;
      t.yy += common;
      return t;
    });
    const auto report = verify_equivalence_construction(mixed);
    CHECK(report.passed);
    CHECK(report.jones_delta_n == rel(eta, 1e-9));
  }
}

TEST_CASE("equivalence construction rejects a non-bilinear response") {
  BilinearResponse quadratic([](const Vec2& e, const Vec2& b) {
    const auto t = BilinearResponse::melb(1.0)(e, b);
    const double ee = e.x * e.x + e.y * e.y;
    return SymTensor2{t.xx + ee, t.xy, t.yy - ee * b.x};
  });
  CHECK_THROWS_AS(verify_equivalence_construction(quadratic),
                  std::invalid_argument);
}

TEST_CASE("equivalence construction rejects a field-aligned parallel response") {
  // A response that already produces birefringence along the common field
  // direction in the parallel configuration breaks the argument's premise.
  BilinearResponse aligned([](const Vec2& e, const Vec2& b) {
    SymTensor2 t;
    t.xx = e.x * b.x;
    t.yy = e.y * b.y;
    t.xy = 0.5 * (e.x * b.y + e.y * b.x);
    return t;
  });
  CHECK_THROWS_AS(verify_equivalence_construction(aligned),
                  std::invalid_argument);
}

TEST_CASE("zero response passes trivially") {
  BilinearResponse zero([](const Vec2&, const Vec2&) { return SymTensor2{}; });
  const auto report = verify_equivalence_construction(zero);
  CHECK(report.passed);
  CHECK(report.melb_delta_n == 0.0);
  CHECK(report.jones_delta_n == 0.0);
}

TEST_CASE("empty response function is rejected") {
  CHECK_THROWS_AS(BilinearResponse(nullptr), std::invalid_argument);
}
