// Front end: host construction, exact oracle runs, truncated expansion runs,
// certificate queries, decay scans, and a fixed identity suite. Reports are
// key,value CSV (schema versioned in the first line) or JSON lines.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcm/enumerate.hpp"
#include "rcm/gas.hpp"
#include "rcm/graph.hpp"
#include "rcm/oracle.hpp"
#include "rcm/rational.hpp"
#include "rcm/subexp.hpp"
#include "rcm/supexp.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rcm;

constexpr int kOk = 0;
constexpr int kCapExit = 2;    // cap or margin violation during a run
constexpr int kCheckExit = 3;  // an invariant check failed
constexpr int kParseExit = 4;  // bad flags, numbers, names, or files
const char* kCsvHeader = "# rcm-csv v1";

struct RunSpec {
  std::string template_str, graph_file;
  std::string p_str = "1/2", q_str = "1";
  std::string bc_str = "free";
  std::string x_str;
  int K = 6;
  std::string regime = "sub";
  bool exact = false;
  std::string format = "csv";
  std::string out_path;
  int cap_polymer = 10;
  int cap_edges = 20;
  int margin = -1;  // negative: keep the template's own margin
  int cutset_R = 1;
  double cutset_C = 1.0;
};

std::string fmt_d(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Exact values always carry an explicit denominator.
std::string frac(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Comma-separated names, except commas nested in parentheses: "(1,1),(2,0)".
std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!isspace((unsigned char)c)) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> resolve_x(const HostGraph& g, const std::string& s) {
  std::vector<int> out;
  for (const auto& name : split_names(s)) out.push_back(g.vertex_by_name(name));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- graph sources ----------------------------------------------------

// Inline templates: "zd:4x4+1" (dims x margin), "tree:3x2+1" (degree, depth).
BuiltTemplate parse_template(const std::string& s, int margin_override) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("template needs kind:shape");
  std::string kind = s.substr(0, colon);
  std::string rest = s.substr(colon + 1);
  int margin = 1;
  auto plus = rest.find('+');
  if (plus != std::string::npos) {
    margin = std::stoi(rest.substr(plus + 1));
    rest = rest.substr(0, plus);
  }
  if (margin_override >= 0) margin = margin_override;
  std::vector<int> nums;
  std::stringstream ss(rest);
  std::string tok;
  while (std::getline(ss, tok, 'x')) nums.push_back(std::stoi(tok));
  if (kind == "zd") {
    if (nums.empty()) throw std::invalid_argument("zd template needs dims");
    return build_zd(nums, margin);
  }
  if (kind == "tree") {
    if (nums.size() != 2) throw std::invalid_argument("tree template needs degree x depth");
    return build_tree(nums[0], nums[1], margin);
  }
  throw std::invalid_argument("unknown template kind: " + kind);
}

BuiltTemplate load_graph_file(const std::string& path, int margin_override) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  ordered_json j = ordered_json::parse(in);
  std::string kind = j.at("template").get<std::string>();
  if (kind == "zd") {
    int margin = j.value("margin", 1);
    if (margin_override >= 0) margin = margin_override;
    return build_zd(j.at("dims").get<std::vector<int>>(), margin);
  }
  if (kind == "tree") {
    int margin = j.value("margin", 1);
    if (margin_override >= 0) margin = margin_override;
    return build_tree(j.at("degree").get<int>(), j.at("depth").get<int>(), margin);
  }
  if (kind == "edges") {
    auto names = j.at("vertices").get<std::vector<std::string>>();
    auto index_of = [&](const ordered_json& v) -> int {
      if (v.is_number_integer()) return v.get<int>();
      auto it = std::find(names.begin(), names.end(), v.get<std::string>());
      if (it == names.end())
        throw std::invalid_argument("unknown vertex in graph file: " + v.dump());
      return (int)(it - names.begin());
    };
    std::vector<std::array<int, 2>> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({index_of(e.at(0)), index_of(e.at(1))});
    std::vector<int> boundary;
    if (j.contains("boundary"))
      for (const auto& v : j.at("boundary")) boundary.push_back(index_of(v));
    return build_explicit(names, edges, boundary);
  }
  throw std::invalid_argument("unknown template kind: " + kind);
}

struct Built {
  BuiltTemplate bt;
  Window win;
  std::string source;
};

Built build_graph(const RunSpec& spec) {
  if (spec.template_str.empty() == spec.graph_file.empty())
    throw std::invalid_argument("exactly one of --template / --graph-file required");
  Built b;
  if (!spec.template_str.empty()) {
    b.bt = parse_template(spec.template_str, spec.margin);
    b.source = spec.template_str;
  } else {
    b.bt = load_graph_file(spec.graph_file, spec.margin);
    b.source = spec.graph_file;
  }
  b.win = make_window(b.bt.host, b.bt.window_verts);
  return b;
}

// ---- report plumbing --------------------------------------------------

struct Report {
  std::vector<std::pair<std::string, std::string>> row;
  ordered_json obj = ordered_json::object();

  void put(const std::string& k, const std::string& v) {
    row.push_back({k, v});
    obj[k] = v;
  }
  void put(const std::string& k, const char* v) { put(k, std::string(v)); }
  void put_d(const std::string& k, double v) {
    row.push_back({k, fmt_d(v)});
    if (std::isfinite(v))
      obj[k] = v;
    else
      obj[k] = fmt_d(v);
  }
  void put_i(const std::string& k, long v) {
    row.push_back({k, std::to_string(v)});
    obj[k] = v;
  }
  void put_b(const std::string& k, bool v) {
    row.push_back({k, v ? "true" : "false"});
    obj[k] = v;
  }
  void put_frac(const std::string& k, const Rat& v) { put(k, frac(v)); }
  void put_sizes(const std::string& k, const std::vector<double>& by_size) {
    ordered_json arr = ordered_json::array();
    for (size_t n = 1; n < by_size.size(); ++n) {
      row.push_back({k + "." + std::to_string(n), fmt_d(by_size[n])});
      arr.push_back(by_size[n]);
    }
    obj[k] = arr;
  }
};

void add_meta(Report& rep, const RunSpec& spec, const Built* b) {
  rep.put_i("caps.edges", spec.cap_edges);
  rep.put_i("caps.polymer", spec.cap_polymer);
  if (b) rep.put_i("margin", b->bt.margin);
}

void emit_report(const Report& rep, const RunSpec& spec, std::ostream& os) {
  if (spec.format == "jsonl") {
    os << rep.obj.dump() << "\n";
    return;
  }
  os << kCsvHeader << "\n";
  for (const auto& kv : rep.row) os << csv_field(kv.first) << "," << csv_field(kv.second) << "\n";
}

struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<std::string>> rows;
  std::vector<ordered_json> jrows;

  void add(const std::vector<std::string>& cells) {
    rows.push_back(cells);
    ordered_json o = ordered_json::object();
    for (size_t i = 0; i < cols.size(); ++i) o[cols[i]] = cells[i];
    jrows.push_back(o);
  }
};

void emit_table(const Table& t, const RunSpec& spec, std::ostream& os) {
  if (spec.format == "jsonl") {
    for (const auto& o : t.jrows) os << o.dump() << "\n";
    return;
  }
  os << kCsvHeader << "\n";
  for (size_t i = 0; i < t.cols.size(); ++i) os << (i ? "," : "") << csv_field(t.cols[i]);
  os << "\n";
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\n";
  }
}

// ---- commands ---------------------------------------------------------

int run_graph(const RunSpec& spec, std::ostream& os) {
  Built b = build_graph(spec);
  const HostGraph& g = b.bt.host;
  long virt = 0;
  for (int v = 0; v < g.n(); ++v) virt += g.virtual_boundary[v];
  Report rep;
  rep.put("command", "graph");
  rep.put("source", b.source);
  rep.put_i("host_vertices", g.n());
  rep.put_i("host_edges", g.m());
  rep.put_i("virtual_vertices", virt);
  rep.put_i("window_vertices", b.win.nv());
  rep.put_i("window_edges", b.win.ne());
  rep.put_i("window_interior", b.win.interior_count());
  rep.put_i("internal_boundary", (long)b.win.internal_bdry.size());
  rep.put_i("boundary_edges", (long)b.win.boundary_edges.size());
  rep.put_i("max_degree", g.max_degree());
  add_meta(rep, spec, &b);
  emit_report(rep, spec, os);
  return kOk;
}

int run_oracle(const RunSpec& spec, std::ostream& os) {
  Built b = build_graph(spec);
  Rat p = parse_rat(spec.p_str), q = parse_rat(spec.q_str);
  Bc bc = spec.bc_str == "wired" ? Bc::wired : Bc::free_;
  std::vector<int> X;
  if (!spec.x_str.empty()) X = resolve_x(b.bt.host, spec.x_str);

  Report rep;
  rep.put("command", "oracle");
  rep.put("source", b.source);
  rep.put_frac("p", p);
  rep.put_frac("q", q);
  rep.put("bc", bc_name(bc));
  rep.put_b("exact", spec.exact);
  rep.put_i("window_edges", b.win.ne());

  bool x_interior = !X.empty();
  for (int v : X)
    if (!b.win.contains(v) || b.win.internal_bdry[b.win.widx[v]]) x_interior = false;

  ExactRequest req;
  req.win = &b.win;
  req.p = p;
  req.q = q;
  req.bc = bc;
  req.edge_cap = spec.cap_edges;
  if (!X.empty()) {
    req.events.push_back({EventKind::Connected, X});
    if (x_interior) req.events.push_back({EventKind::ConnectedFinite, X});
  }
  ExactValues vals = exact_compute(req);

  auto put_val = [&](const std::string& k, const Rat& v) {
    if (spec.exact)
      rep.put_frac(k, v);
    else
      rep.put_d(k, v.get_d());
  };
  put_val("Z", vals.Z);
  put_val("Zbar", vals.Zbar);
  rep.put_d("pressure", pressure_finite(b.win, p, q, bc, spec.cap_edges));
  if (!X.empty()) {
    rep.put("X", spec.x_str);
    put_val("phi", vals.event_prob[0]);
    if (x_interior) {
      put_val("phi_finite", vals.event_prob[1]);
      if (X.size() == 1) put_val("theta", theta_exact(b.win, p, q, bc, X[0], spec.cap_edges));
    }
    rep.put_b("checks.interior", x_interior);
  }
  add_meta(rep, spec, &b);
  emit_report(rep, spec, os);
  return kOk;
}

int run_expand(const RunSpec& spec, std::ostream& os) {
  Built b = build_graph(spec);
  Rat p = parse_rat(spec.p_str), q = parse_rat(spec.q_str);
  Bc bc = spec.bc_str == "wired" ? Bc::wired : Bc::free_;
  if (spec.K > spec.cap_polymer)
    throw std::invalid_argument("K exceeds --cap-polymer");
  std::vector<int> X;
  if (!spec.x_str.empty()) X = resolve_x(b.bt.host, spec.x_str);

  Report rep;
  rep.put("command", "expand");
  rep.put("regime", spec.regime);
  rep.put("source", b.source);
  rep.put_frac("p", p);
  rep.put_frac("q", q);
  rep.put("bc", bc_name(bc));
  rep.put_i("K", spec.K);
  if (!X.empty()) rep.put("X", spec.x_str);

  if (spec.regime == "sub") {
    SubContext cx = make_sub_context(b.win, p, q, spec.K);
    rep.put_d("cert.eps_star", cx.cert.eps_star);
    rep.put_d("cert.eps", cx.cert.eps);
    rep.put_d("cert.threshold", cx.cert.threshold);
    rep.put_b("cert.certified", cx.cert.threshold_ok);
    if (!X.empty()) {
      SubSeries s = sub_phi_series(cx, bc, X);
      rep.put_d("value", s.value);
      rep.put_d("tail", s.tail);
      rep.put_b("tail_ok", s.tail_ok);
      rep.put_i("roots", s.roots);
      rep.put_sizes("order", s.by_size);
    } else {
      SubSeries lx = sub_log_xi_series(cx, bc);
      rep.put_d("log_series", lx.value);
      rep.put_d("log_series_tail", lx.tail);
      SubPressure pr = sub_pressure_series(cx);
      rep.put_d("pressure", pr.value);
      rep.put_d("pressure_tail", pr.tail);
      rep.put_b("tail_ok", pr.tail_ok);
      rep.put_sizes("order", lx.by_size);
    }
  } else {
    SupOptions opt;
    opt.R = spec.cutset_R;
    opt.C = spec.cutset_C;
    if (!X.empty()) {
      SupXContext cx = make_sup_x_context(b.win, p, q, spec.K, X, opt);
      rep.put_d("cert.delta", cx.cert.delta);
      rep.put_d("cert.amax", cx.cert.amax);
      rep.put_d("cert.z", cx.cert.z);
      rep.put_d("cert.threshold", cx.cert.threshold);
      rep.put_b("cert.certified", cx.cert.threshold_ok);
      SupSeries s = sup_phi_series(cx, bc);
      rep.put_d("value", s.value);
      rep.put_d("tail", s.tail);
      rep.put_b("tail_ok", s.tail_ok);
      rep.put_i("roots", (long)cx.roots.size());
      rep.put_sizes("order", s.by_size);
      if (X.size() == 1) {
        SupSeries th = sup_theta_series(cx, bc);
        rep.put_d("theta", th.value);
        rep.put_d("theta_tail", th.tail);
      }
    } else {
      SupContext cx = make_sup_context(b.win, p, q, spec.K, opt);
      rep.put_d("cert.delta", cx.cert.delta);
      rep.put_d("cert.amax", cx.cert.amax);
      rep.put_d("cert.z", cx.cert.z);
      rep.put_d("cert.threshold", cx.cert.threshold);
      rep.put_b("cert.certified", cx.cert.threshold_ok);
      SupSeries lp = sup_log_psi_series(cx, bc);
      rep.put_d("log_series", lp.value);
      rep.put_d("log_series_tail", lp.tail);
      SupPressure pr = sup_pressure_series(cx);
      rep.put_d("pressure", pr.value);
      rep.put_d("pressure_tail", pr.tail);
      rep.put_b("tail_ok", pr.tail_ok);
      rep.put_sizes("order", lp.by_size);
    }
  }
  add_meta(rep, spec, &b);
  emit_report(rep, spec, os);
  return kOk;
}

int run_certify(const RunSpec& spec, std::ostream& os) {
  Built b = build_graph(spec);
  Rat p = parse_rat(spec.p_str), q = parse_rat(spec.q_str);
  double pd = p.get_d(), qd = q.get_d();
  int deg = b.bt.host.max_degree();

  Report rep;
  rep.put("command", "certify");
  rep.put("source", b.source);
  rep.put_frac("p", p);
  rep.put_frac("q", q);
  rep.put_i("degree", deg);

  SubCertificate sub = sub_certificate(pd, qd, deg);
  rep.put_d("sub.eps_star", sub.eps_star);
  rep.put_d("sub.eps", sub.eps);
  rep.put_d("sub.threshold", sub.threshold);
  rep.put_b("sub.certified", sub.threshold_ok);
  rep.put_b("sub.pressure_certified", sub.pressure_ok);
  rep.put_d("sub.p_star", sub_p_star(qd, deg));
  rep.put_d("sub.pressure_p_star", sub_pressure_p_star(qd, deg));

  SupCertificate sup = sup_certificate(pd > 0 ? pd : 1.0, qd, deg, spec.cutset_R, spec.cutset_C);
  rep.put_i("sup.R", spec.cutset_R);
  rep.put_d("sup.C", spec.cutset_C);
  if (pd > 0) {
    rep.put_d("sup.lambda", sup.lambda);
    rep.put_d("sup.delta", sup.delta);
    rep.put_d("sup.z", sup.z);
    rep.put_d("sup.threshold", sup.threshold);
    rep.put_b("sup.certified", sup.threshold_ok);
  } else {
    rep.put_b("sup.certified", false);
  }
  rep.put_d("sup.amax", sup.amax);
  rep.put_d("sup.p_star", sup_p_star(qd, deg, spec.cutset_R, spec.cutset_C));
  add_meta(rep, spec, &b);
  emit_report(rep, spec, os);
  return kOk;
}

int run_scan(const RunSpec& spec, std::ostream& os) {
  Built b = build_graph(spec);
  const HostGraph& g = b.bt.host;
  Rat p = parse_rat(spec.p_str), q = parse_rat(spec.q_str);
  Bc bc = spec.bc_str == "wired" ? Bc::wired : Bc::free_;
  bool sup = spec.regime == "sup";

  // anchor: window vertex deepest inside the host, smallest id on ties
  int anchor = -1;
  long best = -1;
  for (int v : b.win.vert) {
    long depth = std::numeric_limits<long>::max() / 2;
    for (int u = 0; u < g.n(); ++u)
      if (g.virtual_boundary[u]) depth = std::min(depth, (long)g.distance(v, u));
    if (depth > best) {
      best = depth;
      anchor = v;
    }
  }

  // one row per target set: --X pins a single set, otherwise partners at each
  // graph distance from the anchor
  std::vector<std::vector<int>> targets;
  if (!spec.x_str.empty()) {
    targets.push_back(resolve_x(g, spec.x_str));
  } else {
    int dmax = 0;
    for (int v : b.win.vert) dmax = std::max(dmax, g.distance(anchor, v));
    dmax = std::min(dmax, 8);
    for (int d = 1; d <= dmax; ++d) {
      // smallest id at distance d, preferring vertices off the window boundary
      int partner = -1;
      bool partner_deep = false;
      for (int v : b.win.vert) {
        if (g.distance(anchor, v) != d) continue;
        bool deep = !b.win.internal_bdry[b.win.widx[v]];
        if (partner < 0 || (deep && !partner_deep) || (deep == partner_deep && v < partner)) {
          partner = v;
          partner_deep = deep;
        }
      }
      if (partner >= 0) targets.push_back({std::min(anchor, partner), std::max(anchor, partner)});
    }
  }

  SubCertificate subc;
  SupCertificate supc;
  double sub_ratio = 0;
  if (sup) {
    supc = sup_certificate(p.get_d(), q.get_d(), g.max_degree(), spec.cutset_R, spec.cutset_C);
  } else {
    subc = sub_certificate(p.get_d(), q.get_d(), g.max_degree());
    sub_ratio = subc.eps * (1 + 1.0 / std::sqrt(2.0));
  }

  Table t;
  t.cols = {"distance", "tree_distance", "exact", "truncated", "tail", "decay_bound"};
  SubContext subcx;
  if (!sup) subcx = make_sub_context(b.win, p, q, spec.K);
  for (const auto& X : targets) {
    int diam = set_diameter(g, X);
    int tree_d = X.size() < 2 ? 0 : diam;
    std::string exact_s, trunc_s, tail_s, bound_s;
    if (sup) {
      if (b.win.ne() <= spec.cap_edges) {
        try {
          exact_s = fmt_d(finite_connectivity_exact(b.win, p, q, bc, X, spec.cap_edges).get_d());
        } catch (const std::exception&) {
        }
      }
      try {
        SupOptions opt;
        opt.R = spec.cutset_R;
        opt.C = spec.cutset_C;
        SupXContext cx = make_sup_x_context(b.win, p, q, spec.K, X, opt);
        SupSeries s = sup_phi_series(cx, bc);
        trunc_s = fmt_d(s.value);
        tail_s = fmt_d(s.tail);
      } catch (const std::exception&) {
      }
      try {
        long f = cut_set_function(g, {anchor}, diam).value;
        bound_s = fmt_d(sup_decay_bound(supc, f));
      } catch (const std::exception&) {
        bound_s = "";
      }
    } else {
      if (b.win.ne() <= spec.cap_edges)
        exact_s = fmt_d(connectivity_exact(b.win, p, q, bc, X, spec.cap_edges).get_d());
      SubSeries s = sub_phi_series(subcx, bc, X);
      trunc_s = fmt_d(s.value);
      tail_s = fmt_d(s.tail);
      // roots joining X have at least tree_d+1 vertices; with the dressing
      // controlled by the fixed-point weight, sizes n contribute at most
      // eps^(n-1) e^(a n)
      bound_s = subc.threshold_ok
                    ? fmt_d((1 + 1 / std::sqrt(2.0)) * std::pow(sub_ratio, tree_d) /
                            (1 - sub_ratio))
                    : "inf";
    }
    t.add({std::to_string(diam), std::to_string(tree_d), exact_s, trunc_s, tail_s, bound_s});
  }
  emit_table(t, spec, os);
  return kOk;
}

int run_verify(const RunSpec& spec, std::ostream& os) {
  Table t;
  t.cols = {"check", "result", "detail"};
  bool all_ok = true;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    t.add({name, ok ? "PASS" : "FAIL", ok ? "" : detail});
    all_ok = all_ok && ok;
  };

  {
    auto one = build_explicit({"a", "b"}, {{0, 1}});
    Window w = make_window(one.host, one.window_verts);
    Rat z = partition_function(w, Rat(1, 2), Rat(2), Bc::free_);
    check("partition-single-edge", z == Rat(3), "Z = " + frac(z));
    Rat z1 = partition_function(w, Rat(2, 7), Rat(1), Bc::free_);
    check("partition-q-one", z1 == Rat(1), "Z = " + frac(z1));
  }
  {
    auto bt = build_zd({2, 2}, 0);
    Window w = make_window(bt.host, bt.window_verts);
    SubContext cx = make_sub_context(w, Rat(1, 5), Rat(1, 2), 6);
    double brute = sum_clusters_all(cx.gas[0], 4);
    double fast = sum_clusters_connected(cx.gas[0], cx.graph, 4);
    check("cluster-engines-agree", std::abs(brute - fast) <= 1e-12,
          fmt_d(brute) + " vs " + fmt_d(fast));
  }
  {
    auto bt = build_zd({2, 2}, 0);
    Window w = make_window(bt.host, bt.window_verts);
    Rat p = Rat(1, 5), q = Rat(1, 2);
    SubExact se = build_sub_exact(w, p, q);
    Rat lhs = partition_function(w, p, q, Bc::free_);
    Rat rhs = rat_pow(1 - p, w.ne()) * rat_pow(q, w.nv()) * sub_xi_exact(se, Bc::free_);
    check("repartition-open-sets-grid", lhs == rhs, frac(lhs) + " vs " + frac(rhs));
  }
  {
    auto bt = build_tree(2, 2, 0);
    Window w = make_window(bt.host, bt.window_verts);
    Rat p = Rat(2, 7), q = Rat(3);
    SubExact se = build_sub_exact(w, p, q);
    Rat lhs = partition_function(w, p, q, Bc::free_);
    Rat rhs = rat_pow(1 - p, w.ne()) * rat_pow(q, w.nv()) * sub_xi_exact(se, Bc::free_);
    check("repartition-open-sets-tree", lhs == rhs, frac(lhs) + " vs " + frac(rhs));
  }
  {
    auto bt = build_zd({2, 3}, 1);
    Window w = make_window(bt.host, bt.window_verts);
    Rat p = Rat(9, 10), q = Rat(1, 3);
    Rat lhs = sup_psi_exact(w, p, q, Bc::wired, 1) * rat_pow(p, w.ne());
    Rat rhs = partition_function(w, p, q, Bc::wired);
    check("repartition-closed-sets-wired", lhs == rhs, frac(lhs) + " vs " + frac(rhs));
  }
  {
    auto bt = build_zd({2, 2}, 1);
    Window w = make_window(bt.host, bt.window_verts);
    Rat p = Rat(3, 4), q = Rat(2);
    Rat lhs = q * sup_psi_exact(w, p, q, Bc::free_, 1) * rat_pow(p, w.ne());
    Rat rhs = partition_function(w, p, q, Bc::free_);
    check("repartition-closed-sets-free", lhs == rhs, frac(lhs) + " vs " + frac(rhs));
  }
  {
    auto bt = build_zd({2, 2}, 0);
    Window w = make_window(bt.host, bt.window_verts);
    Rat p = Rat(1, 5), q = Rat(3, 2);
    SubExact se = build_sub_exact(w, p, q);
    std::vector<int> X = {bt.host.vertex_by_name("(0,0)"), bt.host.vertex_by_name("(1,1)")};
    bool ok = true;
    std::string detail;
    for (Bc bc : {Bc::free_, Bc::wired}) {
      Rat lhs = sub_phi_exact(se, bc, X);
      Rat rhs = connectivity_exact(w, p, q, bc, X);
      if (lhs != rhs) {
        ok = false;
        detail = std::string(bc_name(bc)) + ": " + frac(lhs) + " vs " + frac(rhs);
      }
    }
    check("connectivity-decomposition-grid", ok, detail);
  }
  {
    auto bt = build_zd({3, 3}, 1);
    Window plus = [&] {
      std::vector<int> v;
      for (const char* n : {"(1,1)", "(0,1)", "(2,1)", "(1,0)", "(1,2)"})
        v.push_back(bt.host.vertex_by_name(n));
      return make_window(bt.host, v);
    }();
    int c = bt.host.vertex_by_name("(1,1)");
    Rat p = Rat(19, 20), q = Rat(2);
    bool ok = true;
    std::string detail;
    for (Bc bc : {Bc::free_, Bc::wired}) {
      Rat lhs = sup_phi_exact(plus, p, q, bc, {c}, 1);
      ExactRequest req;
      req.win = &plus;
      req.p = p;
      req.q = q;
      req.bc = bc;
      req.events = {{EventKind::CompInterior, {c}}};
      Rat rhs = exact_compute(req).event_prob[0];
      if (lhs != rhs) {
        ok = false;
        detail = std::string(bc_name(bc)) + ": " + frac(lhs) + " vs " + frac(rhs);
      }
    }
    check("trapping-decomposition-plus", ok, detail);
  }
  {
    auto bt = build_zd({3, 3}, 2);
    long n4 = 0, n6 = 0;
    FenceOptions fo;
    fo.max_edges = 6;
    enumerate_fences(bt.host, bt.host.vertex_by_name("(1,1)"), fo, [&](const Fence& f) {
      n4 += f.edges.size() == 4;
      n6 += f.edges.size() == 6;
    });
    check("fence-census-center", n4 == 1 && n6 == 4,
          std::to_string(n4) + "," + std::to_string(n6) + " vs 1,4");
  }
  {
    auto bt = build_zd({3, 3}, 0);
    Window w = make_window(bt.host, bt.window_verts);
    Rat p = Rat(1, 100), q = Rat(1);
    SubContext cx = make_sub_context(w, p, q, 6);
    std::vector<int> X = {bt.host.vertex_by_name("(0,0)"), bt.host.vertex_by_name("(2,2)")};
    SubSeries s = sub_phi_series(cx, Bc::free_, X);
    double exact = connectivity_exact(w, p, q, Bc::free_, X).get_d();
    check("small-p-series-within-tail", s.tail_ok && std::abs(s.value - exact) <= s.tail,
          fmt_d(std::abs(s.value - exact)) + " vs tail " + fmt_d(s.tail));
  }
  {
    auto bt = build_zd({3, 3}, 1);
    Window w = make_window(bt.host, bt.window_verts);
    int c = bt.host.vertex_by_name("(1,1)");
    Rat p = Rat(5999, 6000), q = Rat(2);
    auto cx = make_sup_x_context(w, p, q, 6, {c});
    SupSeries s = sup_phi_series(cx, Bc::wired);
    ExactRequest req;
    req.win = &w;
    req.p = p;
    req.q = q;
    req.bc = Bc::wired;
    req.events = {{EventKind::CompInterior, {c}}};
    double exact = exact_compute(req).event_prob[0].get_d();
    check("large-p-series-within-tail", s.tail_ok && std::abs(s.value - exact) <= s.tail,
          fmt_d(std::abs(s.value - exact)) + " vs tail " + fmt_d(s.tail));
  }
  {
    auto bt = build_zd({3, 3}, 1);
    Window w = make_window(bt.host, bt.window_verts);
    int c = bt.host.vertex_by_name("(1,1)");
    auto cx = make_sup_x_context(w, Rat(1), Rat(2), 4, {c});
    SupSeries th = sup_theta_series(cx, Bc::wired);
    check("all-open-limit", th.value == 1.0 && th.tail == 0.0,
          "theta = " + fmt_d(th.value) + ", tail = " + fmt_d(th.tail));
  }

  emit_table(t, spec, os);
  return all_ok ? kOk : kCheckExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random cluster model: exact oracle and the two polymer expansions"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string command;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--template", spec.template_str, "inline template, e.g. zd:4x4+1 or tree:3x2+1");
    sub->add_option("--graph-file", spec.graph_file, "graph spec file (JSON)");
    sub->add_option("--p", spec.p_str, "edge parameter, fraction or decimal");
    sub->add_option("--q", spec.q_str, "cluster weight, fraction or decimal");
    sub->add_option("--bc", spec.bc_str, "boundary condition")
        ->check(CLI::IsMember({"free", "wired"}));
    sub->add_option("--X", spec.x_str, "target vertices, comma separated names");
    sub->add_option("--K", spec.K, "truncation order");
    sub->add_option("--regime", spec.regime, "expansion regime")
        ->check(CLI::IsMember({"sub", "sup"}));
    sub->add_flag("--exact", spec.exact, "print exact fractions");
    sub->add_option("--format", spec.format, "output format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--out", spec.out_path, "output path (default stdout)");
    sub->add_option("--cap-polymer", spec.cap_polymer, "polymer size cap");
    sub->add_option("--cap-edges", spec.cap_edges, "exact-sum edge cap");
    sub->add_option("--margin", spec.margin, "override template margin");
    sub->add_option("--cutset-R", spec.cutset_R, "fence adjacency distance");
    sub->add_option("--cutset-C", spec.cutset_C, "declared cut growth constant");
    sub->callback([&, sub] { command = sub->get_name(); });
  };
  add_common(app.add_subcommand("graph", "build a host graph and report its shape"));
  add_common(app.add_subcommand("oracle", "exact partition function and cluster probabilities"));
  add_common(app.add_subcommand("expand", "truncated series with certificate and tail bound"));
  add_common(app.add_subcommand("certify", "convergence certificates and threshold points"));
  add_common(app.add_subcommand("scan", "decay of cluster probabilities with distance"));
  add_common(app.add_subcommand("verify", "replay the fixed identity suite"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseExit;
  }

  std::ofstream file_out;
  std::ostream* os = &std::cout;
  if (!spec.out_path.empty()) {
    file_out.open(spec.out_path);
    if (!file_out) {
      std::cerr << "error: cannot open " << spec.out_path << "\n";
      return kParseExit;
    }
    os = &file_out;
  }

  try {
    if (command == "graph") return run_graph(spec, *os);
    if (command == "oracle") return run_oracle(spec, *os);
    if (command == "expand") return run_expand(spec, *os);
    if (command == "certify") return run_certify(spec, *os);
    if (command == "scan") return run_scan(spec, *os);
    if (command == "verify") return run_verify(spec, *os);
  } catch (const std::invalid_argument& e) {
    std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    bool input_side = what.find("unknown") != std::string::npos ||
                      what.find("bad ") != std::string::npos ||
                      what.find("template") != std::string::npos ||
                      what.find("graph file") != std::string::npos ||
                      what.find("rational") != std::string::npos ||
                      what.find("required") != std::string::npos;
    return input_side ? kParseExit : kCapExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapExit;
  }
  return kOk;
}
