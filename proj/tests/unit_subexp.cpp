#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "rcm/enumerate.hpp"
#include "rcm/graph.hpp"
#include "rcm/oracle.hpp"
#include "rcm/subexp.hpp"

using namespace rcm;

static Rat R(long n, long d = 1) { return Rat(n, d); }
static double D(const Rat& x) { return mpq_get_d(x.get_mpq_t()); }

TEST_CASE("convergence certificate constants") {
  // degree 4, q = 1, p = 0.01
  SubCertificate c = sub_certificate(0.01, 1.0, 4);
  REQUIRE(c.eps_star == Catch::Approx(0.113761228).margin(1e-8));
  REQUIRE(c.eps == c.eps_star);  // q = 1: the max is a no-op
  REQUIRE(c.threshold == Catch::Approx(0.663049024).margin(1e-8));
  REQUIRE(c.threshold_ok);
  REQUIRE_FALSE(c.pressure_ok);  // 2 e^2 eps_star = 1.68 here
  REQUIRE(c.a_value == Catch::Approx(std::log1p(1 / std::sqrt(2.0))).margin(1e-15));

  // p = 0 is trivially inside both regions
  SubCertificate z = sub_certificate(0.0, 3.0, 6);
  REQUIRE(z.eps == 0.0);
  REQUIRE(z.threshold_ok);
  REQUIRE(z.pressure_ok);

  // q above 1 scales eps up, q below 1 leaves the max at eps_star
  SubCertificate big = sub_certificate(0.005, 2.0, 4);
  REQUIRE(big.eps == Catch::Approx(2 * big.eps_star).margin(1e-15));
  SubCertificate small = sub_certificate(0.005, 0.5, 4);
  REQUIRE(small.eps == small.eps_star);

  REQUIRE_THROWS_AS(sub_certificate(1.0, 1.0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(sub_certificate(-0.1, 1.0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(sub_certificate(0.1, 0.0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(sub_certificate(0.1, 1.0, 0), std::invalid_argument);
}

TEST_CASE("largest certified p per flavor") {
  double ps = sub_p_star(1.0, 4);
  REQUIRE(ps == Catch::Approx(0.0147584386).margin(1e-8));
  REQUIRE(sub_certificate(0.99 * ps, 1.0, 4).threshold_ok);
  REQUIRE_FALSE(sub_certificate(1.01 * ps, 1.0, 4).threshold_ok);

  double pp = sub_pressure_p_star(1.0, 4);
  REQUIRE(pp == Catch::Approx(0.0060555927).margin(1e-8));
  REQUIRE(sub_certificate(0.99 * pp, 1.0, 4).pressure_ok);
  REQUIRE_FALSE(sub_certificate(1.01 * pp, 1.0, 4).pressure_ok);

  // the pressure region is the smaller one at these parameters
  REQUIRE(pp < ps);
  // higher degree shrinks both
  REQUIRE(sub_p_star(1.0, 6) < ps);
  REQUIRE(sub_pressure_p_star(1.0, 6) < pp);
}

TEST_CASE("tail inflation factor") {
  SubTailInfo t = sub_tail_info(sub_certificate(0.01, 1.0, 4));
  REQUIRE(t.ok);
  REQUIRE(t.y0 == Catch::Approx(0.194202563).margin(1e-8));
  REQUIRE(t.t_star == Catch::Approx(1.267948349).margin(1e-8));
  REQUIRE(t.t_star > 1.0);

  // p = 0: no polymers at all, infinite inflation allowed
  SubTailInfo z = sub_tail_info(sub_certificate(0.0, 1.0, 4));
  REQUIRE(z.ok);
  REQUIRE(std::isinf(z.t_star));

  // far outside the certified region the inflation collapses below 1
  SubTailInfo bad = sub_tail_info(sub_certificate(0.2, 1.0, 4));
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.t_star < 1.0);
}

TEST_CASE("activities on hand shapes") {
  Rat p = R(1, 5), q = R(7, 3);
  Rat lam = p / (1 - p);

  // adjacent pair: only the single edge spans it
  auto te = build_explicit({"a", "b"}, {{0, 1}});
  Window we = make_window(te.host, te.window_verts);
  REQUIRE(sub_activity_brute<Rat>(we, {0, 1}, lam, q, Bc::free_) == lam / q);

  // triangle: three spanning trees plus the full edge set
  auto tt = build_explicit({"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}});
  Window wt = make_window(tt.host, tt.window_verts);
  Rat expect = (3 * lam * lam + lam * lam * lam) / (q * q);
  REQUIRE(sub_activity_brute<Rat>(wt, {0, 1, 2}, lam, q, Bc::free_) == expect);
  // closed universe: no boundary, wired activities agree with free
  REQUIRE(sub_activity_brute<Rat>(wt, {0, 1, 2}, lam, q, Bc::wired) == expect);

  // 3x3 window in a 5x5 host: the rim of the window is internal boundary
  auto tz = build_zd({3, 3}, 1);
  Window wz = make_window(tz.host, tz.window_verts);
  const HostGraph& g = tz.host;
  int c00 = g.vertex_by_name("(0,0)"), c10 = g.vertex_by_name("(1,0)");
  int c11 = g.vertex_by_name("(1,1)");
  // both endpoints on the boundary: the q exponent cancels entirely
  REQUIRE(sub_activity_brute<Rat>(wz, {c00, c10}, lam, q, Bc::wired) == lam);
  REQUIRE(sub_activity_brute<Rat>(wz, {c00, c10}, lam, q, Bc::free_) == lam / q);
  // one endpoint interior: same exponent either way
  REQUIRE(sub_activity_brute<Rat>(wz, {c11, c10}, lam, q, Bc::wired) == lam / q);
  REQUIRE(sub_activity_brute<Rat>(wz, {c11, c10}, lam, q, Bc::free_) == lam / q);

  REQUIRE_THROWS_AS(sub_activity_brute<Rat>(we, {0}, lam, q, Bc::free_), std::invalid_argument);
}

TEST_CASE("subset tables match the brute activity") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  Rat p = R(2, 7), q = R(3, 5);
  SubExact se = build_sub_exact(w, p, q);

  for (Bc bc : {Bc::free_, Bc::wired}) {
    int seen = 0;
    VertexSetOptions opt;
    opt.min_size = 2;
    opt.max_size = 5;
    enumerate_connected_vertex_sets(*w.g, w.vert, opt, [&](const std::vector<int>& hv) {
      uint32_t mask = 0;
      for (int v : hv) mask |= 1u << w.widx[v];
      REQUIRE(se.rho(mask, bc) == sub_activity_brute<Rat>(w, hv, se.lambda, q, bc));
      ++seen;
    });
    REQUIRE(seen > 100);
  }

  // sets below size 2 and disconnected sets carry no activity
  REQUIRE(se.rho(0u, Bc::free_) == 0);
  REQUIRE(se.rho(1u << w.widx[t.host.vertex_by_name("(1,1)")], Bc::free_) == 0);
  uint32_t corners = (1u << w.widx[t.host.vertex_by_name("(0,0)")]) |
                     (1u << w.widx[t.host.vertex_by_name("(2,2)")]);
  REQUIRE(se.rho(corners, Bc::free_) == 0);
}

TEST_CASE("series pool carries the exact activities") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  Rat p = R(1, 100), q = R(2);
  SubContext cx = make_sub_context(w, p, q, 6);
  REQUIRE(cx.polymers.supp.size() > 0);
  REQUIRE(cx.gas[0].size() == cx.polymers.supp.size());

  for (Bc bc : {Bc::free_, Bc::wired}) {
    const auto& pool = cx.gas[(int)bc];
    for (size_t i = 0; i < pool.size(); ++i) {
      REQUIRE(pool[i].size <= 4);  // K - 2
      if (i) REQUIRE(pool[i - 1].size <= pool[i].size);
      std::vector<int> hv;
      for (int wi : cx.polymers.verts[i]) hv.push_back(w.vert[wi]);
      Rat exact = sub_activity_brute<Rat>(w, hv, cx.p / (1 - cx.p), q, bc);
      REQUIRE(pool[i].activity == Catch::Approx(D(exact)).margin(1e-15));
    }
  }

  // every polymer listed at each of its vertices
  for (int wi = 0; wi < w.nv(); ++wi)
    for (int id : cx.polymers.by_vertex[wi])
      REQUIRE((cx.polymers.supp[id] >> wi & 1) == 1);
}

TEST_CASE("partition function in polymer form") {
  std::vector<BuiltTemplate> shapes;
  shapes.push_back(build_explicit({"a", "b"}, {{0, 1}}));
  shapes.push_back(build_explicit({"a", "b", "c"}, {{0, 1}, {1, 2}}));
  shapes.push_back(build_explicit({"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}}));
  shapes.push_back(build_explicit({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
  shapes.push_back(build_zd({2, 3}, 0));
  shapes.push_back(build_zd({3, 3}, 1));
  shapes.push_back(build_tree(3, 2, 1));

  std::vector<std::array<Rat, 2>> pq = {{R(1, 5), R(2)},
                                        {R(1, 7), R(1, 2)},
                                        {R(3, 10), R(1)},
                                        {R(1, 3), R(7, 2)},
                                        {R(1, 100), R(5)}};

  for (const auto& t : shapes) {
    Window w = make_window(t.host, t.window_verts);
    for (const auto& [p, q] : pq) {
      SubExact se = build_sub_exact(w, p, q);
      Rat edge_factor = rat_pow(1 - p, w.ne());
      Rat z0 = partition_function(w, p, q, Bc::free_);
      REQUIRE(z0 == edge_factor * rat_pow(q, w.nv()) * sub_xi_exact(se, Bc::free_));
      Rat z1 = partition_function(w, p, q, Bc::wired);
      REQUIRE(z1 == edge_factor * rat_pow(q, w.interior_count()) * sub_xi_exact(se, Bc::wired));
    }
  }
}

TEST_CASE("pinned connectivity matches the oracle") {
  // path a-b-c at q = 1: not-isolated and two-ends-joined have closed forms
  auto tp = build_explicit({"a", "b", "c"}, {{0, 1}, {1, 2}});
  Window wp = make_window(tp.host, tp.window_verts);
  Rat p = R(1, 5);
  SubExact sp = build_sub_exact(wp, p, R(1));
  REQUIRE(sub_phi_exact(sp, Bc::free_, {1}) == R(9, 25));  // 1 - (1-p)^2
  REQUIRE(sub_phi_exact(sp, Bc::free_, {0, 2}) == p * p);
  REQUIRE(connectivity_exact(wp, p, R(1), Bc::free_, {1}) == R(9, 25));
  REQUIRE(connectivity_exact(wp, p, R(1), Bc::free_, {0, 2}) == p * p);

  // general q and both boundary conditions on windows with a real rim
  std::vector<BuiltTemplate> shapes;
  shapes.push_back(build_zd({2, 3}, 0));
  shapes.push_back(build_zd({3, 3}, 1));
  std::vector<std::array<Rat, 2>> pq = {{R(1, 5), R(2)}, {R(1, 7), R(1, 2)}, {R(1, 3), R(7, 2)}};

  for (const auto& t : shapes) {
    Window w = make_window(t.host, t.window_verts);
    std::vector<std::vector<int>> xs;
    xs.push_back({w.vert[0]});
    // an adjacent pair and a distance-2 pair
    xs.push_back({w.g->edge[w.edge_host[0]][0], w.g->edge[w.edge_host[0]][1]});
    {
      int a = w.vert[0], far = -1;
      for (int v : w.vert)
        if (w.g->distance(a, v) == 2) far = v;
      REQUIRE(far >= 0);
      xs.push_back({a, far});
    }
    for (const auto& [p2, q2] : pq) {
      SubExact se = build_sub_exact(w, p2, q2);
      for (Bc bc : {Bc::free_, Bc::wired})
        for (const auto& X : xs)
          REQUIRE(sub_phi_exact(se, bc, X) == connectivity_exact(w, p2, q2, bc, X));
    }
  }
}

TEST_CASE("pinned ratio against the pi coefficient") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  Rat p = R(1, 1000), q = R(1);
  int K = 8;
  SubContext cx = make_sub_context(w, p, q, K);
  REQUIRE(cx.tail.ok);
  SubExact se = build_sub_exact(w, p, q);

  const HostGraph& g = t.host;
  std::vector<int> Rpair = {g.vertex_by_name("(1,1)"), g.vertex_by_name("(1,0)")};
  uint32_t rmask = 0;
  for (int v : Rpair) rmask |= 1u << w.widx[v];

  for (Bc bc : {Bc::free_, Bc::wired}) {
    std::vector<Rat> F = sub_family_table(se, bc);
    double ratio = D(F[se.full ^ rmask] / F[se.full]);
    int budget = K - 2;
    double pi = sub_pi_coefficient(cx, bc, Rpair, budget);
    double dr = cx.tail.a * 2 * std::pow(cx.tail.t_star, -(double)(budget + 1));
    REQUIRE(std::abs(pi - ratio) <= ratio * std::expm1(dr) + 1e-12);
  }

  // no room for even one polymer: the factor collapses to 1
  REQUIRE(sub_pi_coefficient(cx, Bc::free_, Rpair, 0) == 1.0);
  REQUIRE(sub_pi_coefficient(cx, Bc::free_, Rpair, 1) == 1.0);
  REQUIRE_THROWS_AS(sub_pi_coefficient(cx, Bc::free_, Rpair, K - 1), std::invalid_argument);
}

TEST_CASE("truncated connectivity lands within its tail") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  const HostGraph& g = t.host;
  int center = g.vertex_by_name("(1,1)");
  int c00 = g.vertex_by_name("(0,0)"), c10 = g.vertex_by_name("(1,0)");
  int c20 = g.vertex_by_name("(2,0)");
  std::vector<std::vector<int>> xs = {{center}, {c00, c10}, {c00, c20}};

  std::vector<std::array<Rat, 2>> pq = {
      {R(1, 100), R(1)}, {R(1, 200), R(2)}, {R(1, 200), R(1, 2)}, {R(1, 1000), R(1)}};

  for (const auto& [p, q] : pq) {
    SubContext cx = make_sub_context(w, p, q, 8);
    REQUIRE(cx.tail.ok);
    for (Bc bc : {Bc::free_, Bc::wired}) {
      for (const auto& X : xs) {
        SubSeries s = sub_phi_series(cx, bc, X);
        REQUIRE(s.tail_ok);
        REQUIRE(s.tail < 0.1);
        REQUIRE(s.roots > 0);
        double exact = D(connectivity_exact(w, p, q, bc, X));
        REQUIRE(std::abs(s.value - exact) <= s.tail);
        double by_size_sum = 0;
        for (double c : s.by_size) by_size_sum += c;
        REQUIRE(by_size_sum == Catch::Approx(s.value).margin(1e-15));
      }
    }
  }

  // deep inside the certified region the bound gets sharp
  {
    SubContext cx = make_sub_context(w, R(1, 1000), R(1), 8);
    SubSeries s = sub_phi_series(cx, Bc::free_, {center});
    REQUIRE(s.tail < 1e-5);
    double exact = D(connectivity_exact(w, R(1, 1000), R(1), Bc::free_, {center}));
    REQUIRE(std::abs(s.value - exact) <= s.tail);
    REQUIRE(exact > 0.003);  // the probe is not vacuous
  }

  // outside the certified region the value still computes, with no bound
  {
    SubContext cx = make_sub_context(w, R(1, 10), R(1), 6);
    SubSeries s = sub_phi_series(cx, Bc::free_, {center});
    REQUIRE_FALSE(s.tail_ok);
    REQUIRE(std::isinf(s.tail));
    REQUIRE(std::isfinite(s.value));
  }
}

TEST_CASE("truncated log of the polymer sum lands within its tail") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  std::vector<std::array<Rat, 2>> pq = {{R(1, 100), R(1)}, {R(1, 200), R(2)}};

  for (const auto& [p, q] : pq) {
    SubContext cx = make_sub_context(w, p, q, 10);
    SubExact se = build_sub_exact(w, p, q);
    for (Bc bc : {Bc::free_, Bc::wired}) {
      SubSeries s = sub_log_xi_series(cx, bc);
      REQUIRE(s.K == 8);
      REQUIRE(s.tail_ok);
      REQUIRE(s.tail < 1.0);
      double exact = rat_ln(sub_xi_exact(se, bc));
      REQUIRE(std::abs(s.value - exact) <= s.tail);
      double by_size_sum = 0;
      for (double c : s.by_size) by_size_sum += c;
      REQUIRE(by_size_sum == Catch::Approx(s.value).margin(1e-15));
    }
  }

  SubContext cx = make_sub_context(w, R(1, 100), R(1), 10);
  REQUIRE_THROWS_AS(sub_log_xi_series(cx, Bc::free_, 9), std::invalid_argument);
}

TEST_CASE("boundary condition gap") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  int center = t.host.vertex_by_name("(1,1)");

  // q = 1: the two activity tables coincide, the gap is exactly zero
  {
    SubContext cx = make_sub_context(w, R(1, 100), R(1), 8);
    SubGap gap = sub_bc_gap(cx, {center});
    REQUIRE(gap.gap == 0.0);
    REQUIRE(gap.distance == 1);
    REQUIRE(gap.scale == Catch::Approx(cx.tail.y0).margin(1e-15));
    REQUIRE(gap.tail_ok);
  }

  // q != 1: both one-sided series are reproduced and the gap obeys its tail
  {
    Rat p = R(1, 200), q = R(2);
    SubContext cx = make_sub_context(w, p, q, 8);
    SubGap gap = sub_bc_gap(cx, {center});
    SubSeries sf = sub_phi_series(cx, Bc::free_, {center});
    SubSeries sw = sub_phi_series(cx, Bc::wired, {center});
    REQUIRE(gap.phi_free == Catch::Approx(sf.value).margin(1e-15));
    REQUIRE(gap.phi_wired == Catch::Approx(sw.value).margin(1e-15));
    double exact_gap = std::abs(D(connectivity_exact(w, p, q, Bc::free_, {center}) -
                                  connectivity_exact(w, p, q, Bc::wired, {center})));
    REQUIRE(std::abs(gap.gap - exact_gap) <= gap.tail);
  }

  // closed universe: no internal boundary to measure a distance to
  {
    auto tc = build_explicit({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}});
    Window wc = make_window(tc.host, tc.window_verts);
    SubContext cx = make_sub_context(wc, R(1, 100), R(2), 6);
    SubGap gap = sub_bc_gap(cx, {1});
    REQUIRE(gap.gap == 0.0);  // identical activity tables without a rim
    REQUIRE(gap.distance == -1);
  }
}

TEST_CASE("pressure against the finite-window value") {
  auto t = build_zd({2, 3}, 1);
  Window w = make_window(t.host, t.window_verts);

  // q = 1: Z collapses to 1, the pressure must vanish within its tail
  {
    SubContext cx = make_sub_context(w, R(1, 200), R(1), 10);
    SubPressure pr = sub_pressure_series(cx);
    REQUIRE(pr.tail_ok);
    REQUIRE(pr.edge_density == Catch::Approx(7.0 / 6.0).margin(1e-15));
    REQUIRE(pressure_finite(w, R(1, 200), R(1), Bc::free_) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(std::abs(pr.value) <= pr.tail);
    REQUIRE(std::abs(pr.value) < 1e-6);
  }

  // q = 2 inside the pressure region
  {
    Rat p = R(1, 200), q = R(2);
    SubContext cx = make_sub_context(w, p, q, 10);
    SubPressure pr = sub_pressure_series(cx);
    REQUIRE(pr.tail_ok);
    double exact = pressure_finite(w, p, q, Bc::free_);
    REQUIRE(std::abs(pr.value - exact) <= pr.tail);
    REQUIRE(std::abs(pr.value - exact) < 1e-6);
  }

  // certified for connectivity but not for the pressure: no bound claimed
  {
    SubContext cx = make_sub_context(w, R(1, 100), R(1), 10);
    REQUIRE(cx.cert.threshold_ok);
    REQUIRE_FALSE(cx.cert.pressure_ok);
    SubPressure pr = sub_pressure_series(cx);
    REQUIRE_FALSE(pr.tail_ok);
    REQUIRE(std::isfinite(pr.value));
  }
}

TEST_CASE("per-size activity sums meet the unconditional bound") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  int center = t.host.vertex_by_name("(1,1)");
  Rat p = R(1, 100), q = R(1);
  double lam = D(p / (1 - p));

  // size 2 at the center: four neighbors, each pair worth lambda/q
  for (Bc bc : {Bc::free_, Bc::wired}) {
    SubRootSum s = sub_activity_sum(w, p, q, bc, center, 2);
    REQUIRE(s.sum == Catch::Approx(4 * lam).margin(1e-15));
    REQUIRE(s.bound == Catch::Approx(sub_certificate(D(p), 1.0, 4).eps).margin(1e-12));
    REQUIRE(s.ok);
  }

  // the bound needs no certificate: p here fails the cluster threshold
  {
    auto t4 = build_zd({4, 4}, 1);
    Window w4 = make_window(t4.host, t4.window_verts);
    Rat p4 = R(1, 50), q4 = R(1, 2);
    REQUIRE_FALSE(sub_certificate(D(p4), D(q4), 4).threshold_ok);
    for (int n : {2, 3, 4, 5}) {
      SubRootSum s = sub_activity_sum(w4, p4, q4, Bc::free_, t4.host.vertex_by_name("(1,1)"), n);
      REQUIRE(s.ok);
    }
  }

  REQUIRE_THROWS_AS(sub_activity_sum(w, p, q, Bc::free_, center, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(sub_activity_sum(w, p, q, Bc::free_, center, 17), std::invalid_argument);
}

TEST_CASE("guard rails") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  REQUIRE_THROWS_AS(make_sub_context(w, R(1, 2), R(0), 8), std::invalid_argument);
  REQUIRE_THROWS_AS(make_sub_context(w, R(3, 2), R(1), 8), std::invalid_argument);
  REQUIRE_THROWS_AS(make_sub_context(w, R(1, 100), R(1), 1), std::invalid_argument);
  REQUIRE_THROWS_AS(make_sub_context(w, R(1, 100), R(1), 17), std::invalid_argument);

  SubContext cx = make_sub_context(w, R(1, 100), R(1), 6);
  REQUIRE_THROWS_AS(sub_phi_series(cx, Bc::free_, {}), std::invalid_argument);
  REQUIRE_THROWS_AS(sub_phi_series(cx, Bc::free_, {t.host.vertex_by_name("(-1,0)")}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(sub_phi_series(cx, Bc::free_, {t.host.vertex_by_name("(1,1)")}, 7),
                    std::invalid_argument);

  // K = 2: no polymer pool, the single-size series still works
  SubContext tiny = make_sub_context(w, R(1, 100), R(1), 2);
  REQUIRE(tiny.gas[0].empty());
  SubSeries s = sub_phi_series(tiny, Bc::free_, {t.host.vertex_by_name("(1,1)")});
  REQUIRE(s.value == Catch::Approx(4 * D(R(1, 99))).margin(1e-15));

  auto tb = build_explicit({"a", "b"}, {{0, 1}});
  Window wb = make_window(tb.host, tb.window_verts);
  REQUIRE_THROWS_AS(build_sub_exact(wb, R(1, 2), R(-1)), std::invalid_argument);
}
