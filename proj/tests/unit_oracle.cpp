#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "rcm/graph.hpp"
#include "rcm/oracle.hpp"

using namespace rcm;

static Rat R(long n, long d = 1) { return Rat(n, d); }

TEST_CASE("cluster counts on hand configurations") {
  auto t = build_zd({4, 4}, 1);
  Window w = make_window(t.host, t.window_verts);
  REQUIRE(cluster_count(w, 0u, Bc::free_) == 16);         // all closed: every vertex alone
  REQUIRE(cluster_count(w, (1u << w.ne()) - 1, Bc::free_) == 1);  // all open
  REQUIRE(cluster_count(w, 0u, Bc::wired) == 4);          // only the 2x2 interior survives
  REQUIRE(cluster_count(w, (1u << w.ne()) - 1, Bc::wired) == 0);

  // one open edge between two interior vertices
  const HostGraph& g = t.host;
  int e = -1;
  for (int we = 0; we < w.ne(); ++we) {
    int a = w.edge_w[we][0], b = w.edge_w[we][1];
    if (!w.internal_bdry[a] && !w.internal_bdry[b]) {
      e = we;
      break;
    }
  }
  REQUIRE(e >= 0);
  REQUIRE(cluster_count(w, 1u << e, Bc::free_) == 15);
  REQUIRE(cluster_count(w, 1u << e, Bc::wired) == 3);
  (void)g;
}

TEST_CASE("cluster count sandwich over every configuration") {
  auto t = build_zd({2, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  int bdry = 0;
  for (int i = 0; i < w.nv(); ++i)
    if (w.internal_bdry[i]) ++bdry;
  for (uint32_t mask = 0; mask < (1u << w.ne()); ++mask) {
    int k0 = cluster_count(w, mask, Bc::free_);
    int k1 = cluster_count(w, mask, Bc::wired);
    REQUIRE(k1 <= k0);
    REQUIRE(k0 <= k1 + bdry);
  }
}

TEST_CASE("single edge partition function") {
  auto t = build_explicit({"a", "b"}, {{0, 1}});
  Window w = make_window(t.host, t.window_verts);
  REQUIRE(partition_function(w, R(1, 2), R(2), Bc::free_) == R(3));
  // general p,q: (1-p) q^2 + p q
  Rat p = R(2, 7), q = R(3, 5);
  REQUIRE(partition_function(w, p, q, Bc::free_) == (1 - p) * q * q + p * q);
}

TEST_CASE("q = 1 collapses to Bernoulli: Z = 1") {
  auto shapes = {build_zd({3, 3}, 0), build_zd({2, 2}, 1), build_tree(3, 2, 0)};
  for (const auto& t : shapes) {
    Window w = make_window(t.host, t.window_verts);
    REQUIRE(partition_function(w, R(1, 3), R(1), Bc::free_) == R(1));
    REQUIRE(partition_function(w, R(4, 5), R(1), Bc::free_) == R(1));
  }
}

TEST_CASE("degenerate p") {
  auto t = build_zd({2, 2}, 0);
  Window w = make_window(t.host, t.window_verts);
  Rat q = R(5, 3);
  // p = 0: all closed, Z = q^|V|; p = 1: all open, one component
  REQUIRE(partition_function(w, R(0), q, Bc::free_) == rat_pow(q, 4));
  REQUIRE(partition_function(w, R(1), q, Bc::free_) == q);
}

TEST_CASE("triangle against its closed form") {
  auto t = build_explicit({"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}});
  Window w = make_window(t.host, t.window_verts);
  Rat p = R(1, 3), q = R(7, 2);
  Rat om = 1 - p;
  Rat closed_form = om * om * om * q * q * q + 3 * p * om * om * q * q +
                    3 * p * p * om * q + p * p * p * q;
  REQUIRE(partition_function(w, p, q, Bc::free_) == closed_form);
}

TEST_CASE("free partition function factorizes over disjoint pieces") {
  auto t2 = build_explicit({"a", "b", "c", "d", "e"},
                           {{0, 1}, {1, 2}, {3, 4}});  // path + segment
  Window w = make_window(t2.host, t2.window_verts);
  auto tp = build_explicit({"a", "b", "c"}, {{0, 1}, {1, 2}});
  Window wp = make_window(tp.host, tp.window_verts);
  auto ts = build_explicit({"d", "e"}, {{0, 1}});
  Window ws = make_window(ts.host, ts.window_verts);
  Rat p = R(2, 5), q = R(3, 4);
  REQUIRE(partition_function(w, p, q, Bc::free_) ==
          partition_function(wp, p, q, Bc::free_) * partition_function(ws, p, q, Bc::free_));
}

TEST_CASE("wired counting on a window with one boundary vertex") {
  // path a-b-c, c declared boundary: window {a,b}, b sits on the inner rim
  auto t = build_explicit({"a", "b", "c"}, {{0, 1}, {1, 2}}, {2});
  Window w = make_window(t.host, t.window_verts);
  REQUIRE(w.ne() == 1);
  Rat p = R(1, 4), q = R(3);
  REQUIRE(partition_function(w, p, q, Bc::wired) == (1 - p) * q + p);
  REQUIRE(partition_function(w, p, q, Bc::free_) == (1 - p) * q * q + p * q);
}

TEST_CASE("lambda-normalized partition function") {
  auto t = build_zd({2, 2}, 0);
  Window w = make_window(t.host, t.window_verts);
  Rat p = R(3, 5), q = R(2);
  ExactRequest req;
  req.win = &w;
  req.p = p;
  req.q = q;
  req.bc = Bc::free_;
  auto vals = exact_compute(req);
  REQUIRE(vals.zbar_valid);
  REQUIRE(vals.Zbar == vals.Z / rat_pow(p, w.ne()));
}

TEST_CASE("connectivity on tiny graphs") {
  auto t = build_explicit({"a", "b"}, {{0, 1}});
  Window w = make_window(t.host, t.window_verts);
  REQUIRE(connectivity_exact(w, R(1, 2), R(2), Bc::free_, {0, 1}) == R(1, 3));

  auto tp = build_explicit({"a", "b", "c"}, {{0, 1}, {1, 2}});
  Window wp = make_window(tp.host, tp.window_verts);
  Rat p = R(1, 3), q = R(2);
  Rat Z = partition_function(wp, p, q, Bc::free_);
  REQUIRE(connectivity_exact(wp, p, q, Bc::free_, {0, 2}) == p * p * q / Z);
  // single vertex: complement of isolation; b isolated <=> both edges closed
  Rat not_isolated = connectivity_exact(wp, p, q, Bc::free_, {1});
  REQUIRE(not_isolated == 1 - (1 - p) * (1 - p) * q * q * q / Z);
}

TEST_CASE("theta via conditioning on an isolated center") {
  // 3x3 window, margin 1: every window vertex except the center sits on the
  // inner rim, so the center's component is interior iff the center is
  // isolated. Closing its 4 edges leaves the ring cycle C_8, hence
  // 1 - theta = (1-p)^4 q Z(C_8) / Z(3x3).
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  int c = t.host.vertex_by_name("(1,1)");
  Rat p = R(1, 3), q = R(2);
  auto ring = build_explicit({"0", "1", "2", "3", "4", "5", "6", "7"},
                             {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}});
  Window wr = make_window(ring.host, ring.window_verts);
  Rat z_ring = partition_function(wr, p, q, Bc::free_);
  Rat z_full = partition_function(w, p, q, Bc::free_);
  Rat pr = 1 - theta_exact(w, p, q, Bc::free_, c);
  REQUIRE(pr == rat_pow(1 - p, 4) * q * z_ring / z_full);
}

TEST_CASE("theta endpoints") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  int c = t.host.vertex_by_name("(1,1)");
  REQUIRE(theta_exact(w, R(1), R(3, 2), Bc::free_, c) == R(1));  // p=1: one giant component
  REQUIRE(theta_exact(w, R(0), R(3, 2), Bc::free_, c) == R(0));  // p=0: isolated interior vertex
  // events anchored on the window boundary are rejected
  REQUIRE_THROWS(theta_exact(w, R(1, 2), R(1), Bc::free_, t.host.vertex_by_name("(0,0)")));
}

TEST_CASE("finite connectivity equals connectivity in a closed universe") {
  auto t = build_explicit({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  Window w = make_window(t.host, t.window_verts);
  Rat p = R(2, 5), q = R(1, 2);
  REQUIRE(finite_connectivity_exact(w, p, q, Bc::free_, {0, 2}) ==
          connectivity_exact(w, p, q, Bc::free_, {0, 2}));
}

TEST_CASE("wired and free probabilities differ near the boundary") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  const HostGraph& g = t.host;
  std::vector<int> X = {g.vertex_by_name("(0,0)"), g.vertex_by_name("(2,2)")};
  Rat p = R(2, 5), q = R(3);
  Rat free_v = connectivity_exact(w, p, q, Bc::free_, X);
  Rat wired_v = connectivity_exact(w, p, q, Bc::wired, X);
  REQUIRE(free_v != wired_v);
  REQUIRE(free_v > 0);
  REQUIRE(wired_v > 0);
  REQUIRE(free_v < 1);
  REQUIRE(wired_v < 1);
}

TEST_CASE("thread count does not change exact values") {
  auto t = build_zd({3, 3}, 1);
  Window w = make_window(t.host, t.window_verts);
  Rat p = R(1, 3), q = R(5, 2);
  setenv("RCM_THREADS", "1", 1);
  Rat z1 = partition_function(w, p, q, Bc::wired);
  Rat c1 = connectivity_exact(w, p, q, Bc::free_, {t.host.vertex_by_name("(1,1)")});
  setenv("RCM_THREADS", "5", 1);
  Rat z5 = partition_function(w, p, q, Bc::wired);
  Rat c5 = connectivity_exact(w, p, q, Bc::free_, {t.host.vertex_by_name("(1,1)")});
  unsetenv("RCM_THREADS");
  REQUIRE(z1 == z5);
  REQUIRE(c1 == c5);
}

TEST_CASE("edge cap enforcement") {
  auto t = build_zd({5, 5}, 0);  // 40 edges
  Window w = make_window(t.host, t.window_verts);
  REQUIRE_THROWS(partition_function(w, R(1, 2), R(1), Bc::free_));
  auto t2 = build_zd({4, 4}, 0);  // 24 edges: above default cap, below hard cap
  Window w2 = make_window(t2.host, t2.window_verts);
  REQUIRE_THROWS(partition_function(w2, R(1, 2), R(1), Bc::free_));
  REQUIRE(partition_function(w2, R(1, 2), R(1), Bc::free_, 24) == R(1));
}

TEST_CASE("finite-volume pressure") {
  auto t = build_explicit({"a", "b"}, {{0, 1}});
  Window w = make_window(t.host, t.window_verts);
  double f = pressure_finite(w, R(1, 2), R(2), Bc::free_);
  REQUIRE(f == Catch::Approx(std::log(3.0) / 2).epsilon(1e-12));
}
