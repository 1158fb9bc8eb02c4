#include "support.hpp"
#include "telesim/closedform.hpp"

using namespace telesim;
using Catch::Matchers::WithinAbs;

TEST_CASE("smooth pair matches library functions on both branches") {
  const auto grow = hyp_pair(4.0, 0.3);
  CHECK_THAT(grow.c, WithinAbs(std::cosh(0.6), 1e-15));
  CHECK_THAT(grow.s, WithinAbs(std::sinh(0.6) / 2.0, 1e-15));

  const auto osc = hyp_pair(-9.0, 0.5);
  CHECK_THAT(osc.c, WithinAbs(std::cos(1.5), 1e-15));
  CHECK_THAT(osc.s, WithinAbs(std::sin(1.5) / 3.0, 1e-15));

  const auto flat = hyp_pair(0.0, 0.8);
  CHECK(flat.c == 1.0);
  CHECK(flat.s == 0.8);

  CHECK_THROWS_AS(hyp_pair(std::numeric_limits<double>::quiet_NaN(), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(hyp_pair(1.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("smooth pair is continuous across the series window") {
  // the series takes over below |w2 t^2| = 1e-8; both sides must agree
  for (double sign : {1.0, -1.0}) {
    const auto inside = hyp_pair(sign * 0.999e-8, 1.0);
    const auto outside = hyp_pair(sign * 1.001e-8, 1.0);
    CHECK_THAT(inside.c, WithinAbs(outside.c, 5e-11));
    CHECK_THAT(inside.s, WithinAbs(outside.s, 5e-11));
  }
}

TEST_CASE("damped pair equals damping times the plain pair") {
  const auto direct = detail::decayed_hyp_pair(0.25, 3.0, 1.5);
  const auto plain = hyp_pair(0.25, 3.0);
  const double e = std::exp(-1.5 * 3.0);
  CHECK_THAT(direct.c, WithinAbs(e * plain.c, 1e-15));
  CHECK_THAT(direct.s, WithinAbs(e * plain.s, 1e-15));

  const auto osc = detail::decayed_hyp_pair(-4.0, 2.0, 0.7);
  const auto posc = hyp_pair(-4.0, 2.0);
  const double eo = std::exp(-0.7 * 2.0);
  CHECK_THAT(osc.c, WithinAbs(eo * posc.c, 1e-15));
  CHECK_THAT(osc.s, WithinAbs(eo * posc.s, 1e-15));
}

TEST_CASE("damped pair stays finite where the plain pair overflows") {
  // growth rate sqrt(w2) never exceeds the damping d in any use, so the
  // combined evaluation must avoid forming the overflowing factors
  const auto far = detail::decayed_hyp_pair(0.25, 2000.0, 1.5);
  CHECK(std::isfinite(far.c));
  CHECK(std::isfinite(far.s));
  CHECK(far.c >= 0.0);
  CHECK(far.c < 1e-300);

  const auto edge = detail::decayed_hyp_pair(2.25, 5.0, 1.5);
  CHECK_THAT(edge.c, WithinAbs(0.5 * (1.0 + std::exp(-15.0)), 1e-15));
  CHECK_THAT(edge.s, WithinAbs(0.5 * (1.0 - std::exp(-15.0)) / 1.5, 1e-15));
}

TEST_CASE("recovery coefficients match independently computed values") {
  const auto fast = recovery_params(0.1, 5.0, 0.7);
  CHECK_THAT(fast.alpha1, WithinAbs(5.9683006776818155e-02, 1e-13));
  CHECK_THAT(fast.alpha2, WithinAbs(9.2792249444645136e-01, 1e-13));
  CHECK_THAT(fast.alpha3, WithinAbs(9.4659450474853057e-01, 1e-13));
  CHECK_THAT(fast.beta1, WithinAbs(7.9993346536393006e-02, 1e-13));
  CHECK_THAT(fast.beta2, WithinAbs(8.8936043314767066e-01, 1e-13));
  CHECK_THAT(fast.mu1, WithinAbs(3.9025176512745952e-02, 1e-13));
  CHECK_THAT(fast.mu2, WithinAbs(9.4205422175903442e-01, 1e-13));

  const auto slow = recovery_params(0.3, 0.05, 2.0);
  CHECK_THAT(slow.alpha1, WithinAbs(5.4763839286079774e-01, 1e-13));
  CHECK_THAT(slow.alpha2, WithinAbs(1.6785670214163328e-03, 1e-13));
  CHECK_THAT(slow.alpha3, WithinAbs(1.8645184508468593e-03, 1e-13));
  CHECK_THAT(slow.beta1, WithinAbs(6.4966873007778858e-01, 1e-13));
  CHECK_THAT(slow.beta2, WithinAbs(1.1333938890548123e-03, 1e-13));
  CHECK_THAT(slow.mu1, WithinAbs(9.9773417152203447e-01, 1e-13));
  CHECK_THAT(slow.mu2, WithinAbs(2.0502746822831375e-03, 1e-13));

  const auto mid = recovery_params(0.2, 0.05, 1.0);
  CHECK_THAT(mid.alpha1, WithinAbs(8.1823845688775965e-01, 1e-13));
  CHECK_THAT(mid.alpha2, WithinAbs(5.4702139482443179e-04, 1e-13));
  CHECK_THAT(mid.alpha3, WithinAbs(5.6587928395464130e-04, 1e-13));
  CHECK_THAT(mid.beta1, WithinAbs(8.3471178332914875e-01, 1e-13));
  CHECK_THAT(mid.beta2, WithinAbs(4.7913413202937960e-04, 1e-13));
  CHECK_THAT(mid.mu1, WithinAbs(9.9939544786287482e-01, 1e-13));
  CHECK_THAT(mid.mu2, WithinAbs(5.8473238014061790e-04, 1e-13));
}

TEST_CASE("recovery coefficients reduce correctly in the limits") {
  SECTION("zero time") {
    const auto p = recovery_params(0.7, 3.0, 0.0);
    CHECK_THAT(p.alpha1, WithinAbs(1.0, 1e-14));
    CHECK(p.alpha2 == 0.0);
    CHECK(p.alpha3 == 0.0);
    CHECK(p.beta1 == 1.0);
    CHECK(p.beta2 == 0.0);
    CHECK(p.mu1 == 1.0);
    CHECK(p.mu2 == 0.0);
  }
  SECTION("free half turn") {
    const double w = 2.0;
    const auto p = recovery_params(0.0, w, pi / w);
    CHECK_THAT(p.alpha1, WithinAbs(0.0, 1e-12));
    CHECK_THAT(p.alpha2, WithinAbs(1.0, 1e-12));
    CHECK_THAT(p.alpha3, WithinAbs(1.0, 1e-12));
    CHECK_THAT(p.beta1, WithinAbs(0.0, 1e-12));
    CHECK_THAT(p.beta2, WithinAbs(1.0, 1e-12));
    CHECK_THAT(p.mu1, WithinAbs(0.0, 1e-12));
    CHECK_THAT(p.mu2, WithinAbs(1.0, 1e-12));
  }
  SECTION("no coupling and no drive") {
    const auto p = recovery_params(0.0, 0.0, 5.0);
    CHECK(p.alpha1 == 1.0);
    CHECK(p.alpha2 == 0.0);
    CHECK(p.alpha3 == 0.0);
    CHECK(p.beta1 == 1.0);
    CHECK(p.beta2 == 0.0);
    CHECK(p.mu1 == 1.0);
    CHECK(p.mu2 == 0.0);
  }
}

TEST_CASE("recovery coefficients are continuous at the degeneracy points") {
  // the inner square roots vanish at gamma = 4 omega and gamma = 2 omega
  const double eps = 1e-8;
  for (double t : {0.5, 3.0}) {
    for (double w : {0.1, 0.2}) { // gamma = 0.4 hits both degeneracies
      const auto lo = recovery_params(0.4, w - eps, t);
      const auto hi = recovery_params(0.4, w + eps, t);
      CHECK_THAT(lo.alpha1, WithinAbs(hi.alpha1, 1e-6));
      CHECK_THAT(lo.alpha2, WithinAbs(hi.alpha2, 1e-6));
      CHECK_THAT(lo.alpha3, WithinAbs(hi.alpha3, 1e-6));
      CHECK_THAT(lo.beta1, WithinAbs(hi.beta1, 1e-6));
      CHECK_THAT(lo.beta2, WithinAbs(hi.beta2, 1e-6));
      CHECK_THAT(lo.mu1, WithinAbs(hi.mu1, 1e-6));
      CHECK_THAT(lo.mu2, WithinAbs(hi.mu2, 1e-6));
    }
  }
}

TEST_CASE("closed fidelity matches independently integrated values") {
  using K = EnvironmentKind;
  // ten digit references from a separately written dense integrator
  CHECK_THAT(fidelity_closed(K::perfect, K::dissipative, 0.1, 5.0, 0.7),
             WithinAbs(0.9620836144, 1e-9));
  CHECK_THAT(fidelity_closed(K::perfect, K::noisy, 0.2, 1.0, 2.0),
             WithinAbs(0.7096387127, 1e-9));
  CHECK_THAT(fidelity_closed(K::perfect, K::dephasing, 0.1, 5.0, 0.6283),
             WithinAbs(0.9896708658, 1e-9));
  CHECK_THAT(fidelity_closed(K::dissipative, K::dissipative, 0.1, 5.0, 0.7, 2.0),
             WithinAbs(0.8619194130, 1e-9));
  CHECK_THAT(fidelity_closed(K::dissipative, K::noisy, 0.1, 5.0, 0.7, 2.0),
             WithinAbs(0.8447115221, 1e-9));
  CHECK_THAT(fidelity_closed(K::dissipative, K::dephasing, 0.1, 5.0, 0.6283, 2.0),
             WithinAbs(0.8817999798, 1e-9));
  CHECK_THAT(fidelity_closed(K::noisy, K::noisy, 0.2, 1.0, 1.5, 0.5),
             WithinAbs(0.6211894733, 1e-9));
  CHECK_THAT(fidelity_closed(K::noisy, K::dissipative, 0.05, 0.5, 3.0, 1.0),
             WithinAbs(0.6843861642, 1e-9));
  CHECK_THAT(fidelity_closed(K::dephasing, K::dephasing, 0.1, 5.0, 0.6283, 2.0),
             WithinAbs(0.9308847078, 1e-9));
  CHECK_THAT(fidelity_closed(K::dephasing, K::noisy, 0.2, 2.0, 1.0, 0.7),
             WithinAbs(0.7473019474, 1e-9));
  // full precision references
  CHECK_THAT(fidelity_closed(K::dephasing, K::dissipative, 0.1, 5.0, 0.7, 2.0),
             WithinAbs(0.90580407431422305, 1e-12));
  CHECK_THAT(fidelity_closed(K::noisy, K::dephasing, 0.2, 1.0, 1.5, 0.5),
             WithinAbs(0.66136814507433006, 1e-12));
  // fast drive near the optimal stopping point
  CHECK_THAT(fidelity_closed(K::perfect, K::dissipative, 0.1, 200.0, pi / 200.0),
             WithinAbs(0.9994766966790942, 1e-11));
}

TEST_CASE("fidelity limits") {
  using K = EnvironmentKind;
  const auto kinds = {K::perfect, K::dissipative, K::noisy, K::dephasing};
  const auto recs = {K::dissipative, K::noisy, K::dephasing};

  SECTION("zero rotation time scores one half") {
    for (auto a : kinds)
      for (auto b : recs)
        CHECK_THAT(fidelity_closed(a, b, 0.3, 2.0, 0.0, 1.0), WithinAbs(0.5, 1e-14));
  }
  SECTION("undisturbed pair with ideal recovery is exact") {
    CHECK(fidelity_closed(K::perfect, K::perfect, 0.5, 1.0, 1.0) == 1.0);
  }
  SECTION("decoupled recovery completes the half turn") {
    for (auto b : recs)
      CHECK_THAT(fidelity_closed(K::perfect, b, 0.0, 2.0, pi / 2.0), WithinAbs(1.0, 1e-12));
  }
  SECTION("a stalled rotation conveys nothing") {
    for (auto a : kinds)
      for (auto b : recs)
        for (double t : {0.4, 2.0, 7.0})
          CHECK_THAT(fidelity_closed(a, b, 0.3, 0.0, t, 1.5), WithinAbs(0.5, 1e-12));
  }
}

TEST_CASE("undisturbed distribution equals the zero exposure limit") {
  using K = EnvironmentKind;
  for (auto a : {K::dissipative, K::noisy, K::dephasing}) {
    for (auto b : {K::perfect, K::dissipative, K::noisy, K::dephasing}) {
      const double implicit = fidelity_closed(a, b, 0.2, 3.0, 0.9);
      const double explicit_zero = fidelity_closed(a, b, 0.2, 3.0, 0.9, 0.0);
      const double perfect_pair = fidelity_closed(K::perfect, b, 0.2, 3.0, 0.9);
      CHECK(implicit == explicit_zero);
      CHECK(implicit == perfect_pair);
    }
  }
}

TEST_CASE("fidelity stays within physical bounds") {
  using K = EnvironmentKind;
  for (auto a : {K::perfect, K::dissipative, K::noisy, K::dephasing})
    for (auto b : {K::perfect, K::dissipative, K::noisy, K::dephasing})
      for (double g : {0.1, 0.4})
        for (double w : {0.5, 5.0})
          for (double t : {0.3, 1.5, 6.0})
            for (double t0 : {0.0, 1.0, 3.0}) {
              const double f = fidelity_closed(a, b, g, w, t, t0);
              CHECK(f >= 0.5 - 1e-12);
              CHECK(f <= 1.0 + 1e-12);
            }
}

TEST_CASE("ideal recovery fidelity declines with exposure") {
  using K = EnvironmentKind;
  for (auto a : {K::dissipative, K::noisy, K::dephasing}) {
    double prev = fidelity_closed(a, K::perfect, 0.25, 0.0, 0.0, 0.0);
    CHECK(prev == 1.0);
    for (double t0 : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double f = fidelity_closed(a, K::perfect, 0.25, 0.0, 0.0, t0);
      CHECK(f < prev);
      prev = f;
    }
  }
}

TEST_CASE("pair overlap drives the ideal recovery score") {
  using K = EnvironmentKind;
  const double fe = entanglement_fidelity(K::dissipative, 0.1, 2.0);
  CHECK_THAT(fe, WithinAbs(0.8351600230178197, 1e-14));
  CHECK_THAT((2.0 * fe + 1.0) / 3.0, WithinAbs(0.8901066820118798, 1e-14));
  CHECK_THAT(fidelity_closed(K::dissipative, K::perfect, 0.1, 7.0, 3.0, 2.0),
             WithinAbs((2.0 * fe + 1.0) / 3.0, 1e-15));
  CHECK(entanglement_fidelity(K::perfect, 0.3, 5.0) == 1.0);

  // the overlap is one entry pair of the closed channel state
  const auto ch = channel_state_closed(K::dissipative, 0.1, 2.0);
  CHECK_THAT(fe, WithinAbs(ch.rho(0, 0).real() / 2.0 + ch.rho(3, 3).real() / 2.0 +
                               ch.rho(0, 3).real(),
                           1e-14));
}

TEST_CASE("closed form argument validation") {
  using K = EnvironmentKind;
  CHECK_THROWS_AS(recovery_params(-0.1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(recovery_params(0.1, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(recovery_params(0.1, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(fidelity_closed(K::dissipative, K::noisy, 0.1, 1.0, 1.0, -2.0),
                  std::invalid_argument);
}
