#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acaslab/dynamics.hpp"
#include "support/generators.hpp"

using namespace acaslab;
using testgen::Rng;

TEST_CASE("propagate: linear motion") {
  EncounterState s{10000, 0, 10, 0};
  ControlFrame u{0, 0, 500};
  auto out = propagate(s, u, 4);
  CHECK(out.r == 8000);
  CHECK(out.h == -40);
  CHECK(out.v == 10);
  CHECK(out.t == 4);
}

TEST_CASE("propagate: constant acceleration, frozen values") {
  EncounterState s{10000, 0, 0, 0};
  ControlFrame u{8.05, 0, 500};
  auto out = propagate(s, u, 4);
  CHECK(out.r == 8000);
  CHECK(out.h == doctest::Approx(-64.4).epsilon(1e-12));
  CHECK(out.v == doctest::Approx(32.2).epsilon(1e-12));
}

TEST_CASE("propagate agrees with an RK4 integrator") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    EncounterState s{testgen::uniform(rng, -5000, 20000), testgen::uniform(rng, -2000, 2000),
                     testgen::uniform(rng, -80, 80), 0};
    ControlFrame u{testgen::uniform(rng, -16, 16), testgen::uniform(rng, -3, 3),
                   testgen::uniform(rng, 0, 500)};
    double T = testgen::uniform(rng, 0.1, 10);
    // classic RK4 on (r, h, v); exact for this right-hand side up to rounding
    double r = s.r, h = s.h, v = s.v;
    double a = u.a_o - u.a_i;
    int n = (int)std::ceil(T / 1e-4);
    double dt = T / n;
    for (int k = 0; k < n; ++k) {
      double k1v = a, k1h = -v, k1r = -u.r_v;
      double k2v = a, k2h = -(v + dt / 2 * k1v), k2r = -u.r_v;
      double k3v = a, k3h = -(v + dt / 2 * k2v), k3r = -u.r_v;
      double k4v = a, k4h = -(v + dt * k3v), k4r = -u.r_v;
      r += dt / 6 * (k1r + 2 * k2r + 2 * k3r + k4r);
      h += dt / 6 * (k1h + 2 * k2h + 2 * k3h + k4h);
      v += dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    auto out = propagate(s, u, T);
    CHECK(out.r == doctest::Approx(r).epsilon(1e-8));
    CHECK(std::abs(out.h - h) <= 1e-6 * (1 + std::abs(h)));
    CHECK(out.v == doctest::Approx(v).epsilon(1e-10));
  }
}

TEST_CASE("propagate is a semigroup") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    EncounterState s{testgen::uniform(rng, -5000, 20000), testgen::uniform(rng, -2000, 2000),
                     testgen::uniform(rng, -80, 80), testgen::uniform(rng, 0, 5)};
    ControlFrame u{testgen::uniform(rng, -16, 16), testgen::uniform(rng, -3, 3),
                   testgen::uniform(rng, 0, 500)};
    double d1 = testgen::uniform(rng, 0, 8), d2 = testgen::uniform(rng, 0, 8);
    auto once = propagate(s, u, d1 + d2);
    auto twice = propagate(propagate(s, u, d1), u, d2);
    CHECK(once.r == doctest::Approx(twice.r).epsilon(1e-12));
    CHECK(std::abs(once.h - twice.h) <= 1e-9 * (1 + std::abs(once.h)));
    CHECK(once.v == doctest::Approx(twice.v).epsilon(1e-12));
  }
}

TEST_CASE("v matches -dh/dt by central differences") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    EncounterState s{0, testgen::uniform(rng, -2000, 2000), testgen::uniform(rng, -80, 80), 0};
    ControlFrame u{testgen::uniform(rng, -16, 16), testgen::uniform(rng, -3, 3), 0};
    double t = testgen::uniform(rng, 0.1, 20);
    double step = 1e-4;
    auto hm = propagate(s, u, t - step).h;
    auto hp = propagate(s, u, t + step).h;
    double v_mid = propagate(s, u, t).v;
    CHECK(std::abs(-(hp - hm) / (2 * step) - v_mid) <= 1e-6);
  }
}

TEST_CASE("next_event: frozen crossing of the upper target") {
  EncounterState s{10000, 0, 0, 0};
  ControlFrame u{8.05, 0, 250};
  Advisory adv;
  adv.w = 1;
  adv.v_lo = -1000;  // already past, no lower crossing ahead
  adv.v_up = 500.0 / 3;  // 10000 ft/min
  NextEvent ev = next_event(s, u, adv, -1, 1e6);
  CHECK(ev.kind == EventKind::ReachUp);
  CHECK(ev.t == doctest::Approx((500.0 / 3) / 8.05).epsilon(1e-12));
  auto at = propagate(s, u, ev.t);
  CHECK(std::abs(at.v - *adv.v_up) <= 1e-9);
}

TEST_CASE("next_event: constant rate between bounds runs to the horizon") {
  EncounterState s{10000, 0, 10, 0};
  ControlFrame u{0, 0, 250};
  Advisory adv;
  adv.w = 1;
  adv.v_lo = 0;
  adv.v_up = 30;
  NextEvent ev = next_event(s, u, adv, -1, 42);
  CHECK(ev.kind == EventKind::Horizon);
  CHECK(ev.t == 42);
}

TEST_CASE("next_event: time bound already reached fires at zero") {
  EncounterState s{10000, 0, 10, 8};
  ControlFrame u{2, 0, 250};
  Advisory adv;
  adv.w = 1;
  adv.v_lo = 25;
  NextEvent ev = next_event(s, u, adv, 8, 100);
  CHECK(ev.kind == EventKind::TimeBound);
  CHECK(ev.t == 0);
}

TEST_CASE("event crossings land exactly on the target rate") {
  Rng rng(13);
  for (int i = 0; i < 3000; ++i) {
    EncounterState s{5000, 0, testgen::uniform(rng, -80, 80), 0};
    ControlFrame u{testgen::uniform(rng, -16, 16), testgen::uniform(rng, -3, 3),
                   testgen::uniform(rng, 50, 500)};
    Advisory adv;
    adv.w = testgen::coin(rng);
    adv.v_lo = testgen::uniform(rng, -60, 60);
    adv.v_up = adv.w * (adv.w * adv.v_lo + testgen::uniform(rng, 1, 80));
    NextEvent ev = next_event(s, u, adv, -1, 1e9);
    if (ev.kind != EventKind::ReachLo && ev.kind != EventKind::ReachUp) continue;
    double target = ev.kind == EventKind::ReachLo ? adv.v_lo : *adv.v_up;
    auto at = propagate(s, u, ev.t);
    CHECK(std::abs(at.v - target) <= 1e-9);
  }
}

TEST_CASE("nmac counts the boundary") {
  Params p;
  CHECK(nmac({0, 0, 0, 0}, p));
  CHECK(nmac({500, 100, 0, 0}, p));
  CHECK(!nmac({500.01, 0, 0, 0}, p));
  CHECK(!nmac({0, 100.01, 0, 0}, p));
}

TEST_CASE("analytic puck entry equals dense sampling") {
  Rng rng(17);
  Params p;
  int entries = 0;
  for (int i = 0; i < 1000; ++i) {
    EncounterState s{testgen::uniform(rng, -1500, 4000), testgen::uniform(rng, -400, 400),
                     testgen::uniform(rng, -60, 60), 0};
    ControlFrame u{testgen::uniform(rng, -16, 16), testgen::uniform(rng, -3, 3),
                   testgen::uniform(rng, 0, 500)};
    double dt = testgen::uniform(rng, 0.5, 20);
    auto analytic = puck_entry_time(s, u, dt, p);
    std::optional<double> sampled;
    for (double t = 0; t <= dt + 1e-12; t += 1e-3) {
      if (nmac(propagate(s, u, std::min(t, dt)), p)) {
        sampled = std::min(t, dt);
        break;
      }
    }
    if (analytic) ++entries;
    if (analytic && sampled) {
      CHECK(*analytic <= *sampled + 1e-9);
      CHECK(*sampled - *analytic <= 1e-3 + 1e-9);
    } else if (sampled) {
      FAIL("sampling found an entry the analytic check missed");
    } else if (analytic) {
      // entry shorter than the sampling step; verify directly
      CHECK(nmac(propagate(s, u, *analytic), p));
    }
  }
  CHECK(entries > 100);  // the draw actually exercises entries
}
