#include "support.hpp"
#include "telesim/environment.hpp"

using namespace telesim;

TEST_CASE("kind names round trip and aliases parse") {
  for (auto k : {EnvironmentKind::perfect, EnvironmentKind::dissipative,
                 EnvironmentKind::noisy, EnvironmentKind::dephasing})
    CHECK(environment_from_string(to_string(k)) == k);
  CHECK(environment_from_string("p") == EnvironmentKind::perfect);
  CHECK(environment_from_string("di") == EnvironmentKind::dissipative);
  CHECK(environment_from_string("no") == EnvironmentKind::noisy);
  CHECK(environment_from_string("de") == EnvironmentKind::dephasing);
  CHECK_THROWS_AS(environment_from_string("thermal"), std::invalid_argument);
  CHECK_THROWS_AS(environment_from_string(""), std::invalid_argument);
}

TEST_CASE("collapse operators have the expected structure") {
  CHECK(collapse_ops_1q(EnvironmentKind::perfect).empty());

  const auto di = collapse_ops_1q(EnvironmentKind::dissipative);
  REQUIRE(di.size() == 1);
  CHECK(max_abs_diff(di[0], sigma_minus()) == 0.0);
  CHECK(di[0](1, 0) == cplx{1.0});
  CHECK(std::abs(di[0](0, 0)) + std::abs(di[0](0, 1)) + std::abs(di[0](1, 1)) == 0.0);

  const auto no = collapse_ops_1q(EnvironmentKind::noisy);
  REQUIRE(no.size() == 2);
  CHECK(max_abs_diff(no[0], sigma_minus()) == 0.0);
  CHECK(max_abs_diff(no[1], sigma_plus()) == 0.0);

  const auto de = collapse_ops_1q(EnvironmentKind::dephasing);
  REQUIRE(de.size() == 1);
  CHECK(de[0](0, 0) == cplx{1.0});
  CHECK(std::abs(de[0](0, 1)) + std::abs(de[0](1, 0)) + std::abs(de[0](1, 1)) == 0.0);
}

TEST_CASE("pair operators act on one qubit each") {
  const auto id = Matrix<2>::identity();
  for (auto kind : {EnvironmentKind::dissipative, EnvironmentKind::noisy,
                    EnvironmentKind::dephasing}) {
    const auto ops1 = collapse_ops_1q(kind);
    const auto ops2 = collapse_ops_2q(kind);
    REQUIRE(ops2.size() == 2 * ops1.size());
    for (std::size_t i = 0; i < ops1.size(); ++i) {
      CHECK(max_abs_diff(ops2[i], kron(ops1[i], id)) == 0.0);
      CHECK(max_abs_diff(ops2[i + ops1.size()], kron(id, ops1[i])) == 0.0);
    }
  }
}

TEST_CASE("closed channel states match independently computed entries") {
  const auto di = channel_state_closed(EnvironmentKind::dissipative, 0.1, 2.0);
  CHECK_THAT(di.rho(0, 0).real(), Catch::Matchers::WithinAbs(0.33516002301781972, 1e-12));
  CHECK_THAT(di.rho(1, 1).real(), Catch::Matchers::WithinAbs(0.074205353521171108, 1e-12));
  CHECK_THAT(di.rho(2, 2).real(), Catch::Matchers::WithinAbs(0.074205353521171108, 1e-12));
  CHECK_THAT(di.rho(3, 3).real(), Catch::Matchers::WithinAbs(0.51642926993983784, 1e-12));
  CHECK_THAT(di.rho(0, 3).real(), Catch::Matchers::WithinAbs(0.40936537653899080, 1e-12));

  const auto no = channel_state_closed(EnvironmentKind::noisy, 0.2, 1.5);
  CHECK_THAT(no.rho(0, 0).real(), Catch::Matchers::WithinAbs(0.32529855297805144, 1e-12));
  CHECK_THAT(no.rho(1, 1).real(), Catch::Matchers::WithinAbs(0.17470144702194851, 1e-12));
  CHECK_THAT(no.rho(3, 3).real(), Catch::Matchers::WithinAbs(0.32529855297805133, 1e-12));
  CHECK_THAT(no.rho(0, 3).real(), Catch::Matchers::WithinAbs(0.27440581804701314, 1e-12));

  const auto de = channel_state_closed(EnvironmentKind::dephasing, 0.15, 3.0);
  CHECK_THAT(de.rho(0, 0).real(), Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(de.rho(3, 3).real(), Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(de.rho(1, 1).real(), Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK_THAT(de.rho(0, 3).real(), Catch::Matchers::WithinAbs(0.31881407581088839, 1e-12));
}

TEST_CASE("channel reduces to the shared pair when undisturbed") {
  const auto bell = bell_projector(0);
  CHECK(max_abs_diff(channel_state_closed(EnvironmentKind::perfect, 0.3, 5.0).rho, bell) == 0.0);
  for (auto kind : {EnvironmentKind::dissipative, EnvironmentKind::noisy,
                    EnvironmentKind::dephasing}) {
    CHECK(max_abs_diff(channel_state_closed(kind, 0.3, 0.0).rho, bell) < 1e-15);
    CHECK(max_abs_diff(channel_state_closed(kind, 0.0, 4.0).rho, bell) < 1e-15);
    CHECK(max_abs_diff(channel_state_numeric(kind, 0.3, 0.0).rho, bell) == 0.0);
  }
}

TEST_CASE("closed and integrated channel states agree") {
  for (auto kind : {EnvironmentKind::dissipative, EnvironmentKind::noisy,
                    EnvironmentKind::dephasing}) {
    for (double t0 : {0.5, 2.0}) {
      const auto a = channel_state_closed(kind, 0.1, t0);
      const auto b = channel_state_numeric(kind, 0.1, t0);
      CHECK(max_abs_diff(a.rho, b.rho) < 1e-8);
    }
  }
}

TEST_CASE("channel states are physical and X shaped") {
  for (auto kind : {EnvironmentKind::perfect, EnvironmentKind::dissipative,
                    EnvironmentKind::noisy, EnvironmentKind::dephasing}) {
    const auto ch = channel_state_closed(kind, 0.25, 1.7);
    const auto d = density_diagnostics(ch.rho);
    CHECK(d.trace_defect < 1e-14);
    CHECK(d.herm_defect == 0.0);
    CHECK(d.min_eigenvalue > -1e-12);
    constexpr int off_x[4][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
    for (const auto& [i, j] : off_x) {
      CHECK(std::abs(ch.rho(i, j)) == 0.0);
      CHECK(std::abs(ch.rho(j, i)) == 0.0);
    }
  }
}

TEST_CASE("concurrence follows the decay laws") {
  const double g = 0.3;
  for (double t0 : {0.0, 0.4, 1.1, 2.5}) {
    const auto di = channel_state_closed(EnvironmentKind::dissipative, g, t0);
    CHECK_THAT(concurrence(di.rho),
               Catch::Matchers::WithinAbs(std::exp(-2.0 * g * t0), 1e-12));
    const auto de = channel_state_closed(EnvironmentKind::dephasing, g, t0);
    CHECK_THAT(concurrence(de.rho),
               Catch::Matchers::WithinAbs(std::exp(-g * t0), 1e-12));
    const auto no = channel_state_closed(EnvironmentKind::noisy, g, t0);
    const double e2 = std::exp(-2.0 * g * t0);
    const double want = std::max(0.0, e2 - 0.5 * (1.0 - e2 * e2));
    CHECK_THAT(concurrence(no.rho), Catch::Matchers::WithinAbs(want, 1e-12));
  }
}

TEST_CASE("bell pairs are maximally entangled") {
  for (int m = 0; m < 4; ++m)
    CHECK_THAT(concurrence(bell_projector(m)), Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("concurrence rejects states that are not X shaped") {
  auto rho = bell_projector(0);
  rho(0, 1) = 1e-6;
  rho(1, 0) = 1e-6;
  CHECK_THROWS_AS(concurrence(rho), std::invalid_argument);
  CHECK_NOTHROW(concurrence(rho, 1e-5));
}

TEST_CASE("entanglement dies suddenly only in the noisy channel") {
  const double g = 0.5;
  const auto td = esd_time(EnvironmentKind::noisy, g);
  REQUIRE(td.has_value());
  CHECK_THAT(*td, Catch::Matchers::WithinAbs(std::log(1.0 + std::sqrt(2.0)) / (2.0 * g), 1e-15));

  const auto just_before = channel_state_closed(EnvironmentKind::noisy, g, *td * 0.99);
  const auto just_after = channel_state_closed(EnvironmentKind::noisy, g, *td * 1.01);
  CHECK(concurrence(just_before.rho) > 0.0);
  CHECK(concurrence(just_after.rho) == 0.0);

  CHECK_FALSE(esd_time(EnvironmentKind::perfect, g).has_value());
  CHECK_FALSE(esd_time(EnvironmentKind::dissipative, g).has_value());
  CHECK_FALSE(esd_time(EnvironmentKind::dephasing, g).has_value());
  CHECK_THROWS_AS(esd_time(EnvironmentKind::noisy, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(esd_time(EnvironmentKind::noisy, -1.0), std::invalid_argument);
}

TEST_CASE("sudden death time matches a direct root search") {
  const double g = 0.35;
  double lo = 0.0, hi = 10.0 / g;
  REQUIRE(concurrence(channel_state_closed(EnvironmentKind::noisy, g, hi).rho) == 0.0);
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double c = concurrence(channel_state_closed(EnvironmentKind::noisy, g, mid).rho);
    (c > 0.0 ? lo : hi) = mid;
  }
  CHECK_THAT(0.5 * (lo + hi),
             Catch::Matchers::WithinAbs(*esd_time(EnvironmentKind::noisy, g), 1e-10));
}

TEST_CASE("channel argument validation") {
  CHECK_THROWS_AS(channel_state_closed(EnvironmentKind::dissipative, -0.1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(channel_state_closed(EnvironmentKind::dissipative, 0.1, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(channel_state_numeric(EnvironmentKind::noisy, -0.1, 1.0),
                  std::invalid_argument);
}
