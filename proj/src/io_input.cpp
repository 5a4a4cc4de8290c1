#include "cab/io/input.hpp"

#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "cab/error.hpp"

namespace cab::io {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const toml::node* n, const std::string& path, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (n) os << ":" << n->source().begin.line << ":" << n->source().begin.column;
    os << ": " << msg << " (" << path << ")";
    throw ParseError(os.str());
  }

  const toml::node& need(const toml::table& t, const std::string& key, const std::string& path) const {
    const toml::node* n = t.get(key);
    if (!n) fail(&t, path, "missing key '" + key + "'");
    return *n;
  }

  const toml::table& table(const toml::node& n, const std::string& path) const {
    if (!n.is_table()) fail(&n, path, "expected a table");
    return *n.as_table();
  }

  const toml::array& array(const toml::node& n, const std::string& path) const {
    if (!n.is_array()) fail(&n, path, "expected an array");
    return *n.as_array();
  }

  std::string string(const toml::node& n, const std::string& path) const {
    if (!n.is_string()) fail(&n, path, "expected a string");
    return n.as_string()->get();
  }

  long long integer(const toml::node& n, const std::string& path, long long lo, long long hi) const {
    if (!n.is_integer()) fail(&n, path, "expected an integer");
    const long long v = n.as_integer()->get();
    if (v < lo || v > hi) fail(&n, path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  int index(const toml::node& n, const std::string& path, int count) const {
    return static_cast<int>(integer(n, path, 1, count)) - 1;
  }

  double real(const toml::node& n, const std::string& path) const {
    if (n.is_floating_point()) return n.as_floating_point()->get();
    if (n.is_integer()) return static_cast<double>(n.as_integer()->get());
    fail(&n, path, "expected a number");
  }

  Rational rational(const toml::node& n, const std::string& path) const {
    if (n.is_integer()) return Rational(static_cast<long>(n.as_integer()->get()));
    const std::string s = string(n, path);
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) fail(&n, path, "expected a rational \"p/q\", got \"" + s + "\"");
    q.canonicalize();
    return q;
  }

  /// "p/q" constant or records [{k, lam, re, im}].
  FPoly poly(const toml::node& n, Ring ring, const std::string& path) const {
    if (n.is_string() || n.is_integer()) return FPoly::constant(ring, rational(n, path));
    FPoly f(ring);
    const toml::array& recs = array(n, path);
    for (std::size_t r = 0; r < recs.size(); ++r) {
      const std::string rp = path + "[" + std::to_string(r) + "]";
      const toml::table& t = table(recs[r], rp);
      const toml::array& k = array(need(t, "k", rp), rp + ".k");
      if (static_cast<int>(k.size()) != ring.dim) fail(&k, rp + ".k", "expected " + std::to_string(ring.dim) + " exponents");
      std::vector<int> modes;
      for (std::size_t j = 0; j < k.size(); ++j) {
        const long long lo = ring.flavor == Flavor::Fourier ? -1000000 : 0;
        modes.push_back(static_cast<int>(integer(k[j], rp + ".k", lo, 1000000)));
      }
      const int lam = t.get("lam") ? static_cast<int>(integer(*t.get("lam"), rp + ".lam", -1000000, 1000000)) : 0;
      const Rational re = t.get("re") ? rational(*t.get("re"), rp + ".re") : Rational(0);
      const Rational im = t.get("im") ? rational(*t.get("im"), rp + ".im") : Rational(0);
      f += FPoly::term(ring, modes, lam, CRat(re, im));
    }
    return f;
  }

  /// Entries [i_1, .., i_k, poly] with 1-based indices below `count`.
  template <class F>
  void entries(const toml::node& n, const std::string& path, int arity, int count, Ring ring, F on_entry) const {
    const toml::array& rows = array(n, path);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rp = path + "[" + std::to_string(r) + "]";
      const toml::array& row = array(rows[r], rp);
      if (static_cast<int>(row.size()) != arity + 1)
        fail(&row, rp, "expected " + std::to_string(arity) + " indices and a value");
      std::vector<int> idx;
      for (int a = 0; a < arity; ++a) idx.push_back(index(row[static_cast<std::size_t>(a)], rp, count));
      on_entry(idx, poly(row[static_cast<std::size_t>(arity)], ring, rp), &row, rp);
    }
  }

  Ring ring(const toml::table& t, const std::string& path) const {
    const std::string kind = t.get("ring") ? string(*t.get("ring"), path + ".ring") : "chart";
    if (kind != "chart" && kind != "torus") fail(t.get("ring"), path + ".ring", "ring must be \"chart\" or \"torus\"");
    const int dim = static_cast<int>(integer(need(t, "dim", path), path + ".dim", 1, kMaxDim));
    return kind == "torus" ? torus(dim) : chart(dim);
  }

  LieAlgebraInput lie_algebra(const toml::table& t) const {
    const std::string p = "lie_algebra";
    LieAlgebraInput g;
    g.name = t.get("name") ? string(*t.get("name"), p + ".name") : "lie-algebra";
    g.dim = static_cast<int>(integer(need(t, "dim", p), p + ".dim", 1, 64));
    const toml::array& rows = array(need(t, "brackets", p), p + ".brackets");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rp = p + ".brackets[" + std::to_string(r) + "]";
      const toml::array& row = array(rows[r], rp);
      if (row.size() != 4) fail(&row, rp, "expected [i, j, k, value]");
      g.brackets.push_back({index(row[0], rp, g.dim), index(row[1], rp, g.dim), index(row[2], rp, g.dim), rational(row[3], rp)});
    }
    if (const toml::node* om = t.get("omega")) {
      RatMatrix w(g.dim, g.dim);
      const toml::array& rows2 = array(*om, p + ".omega");
      for (std::size_t r = 0; r < rows2.size(); ++r) {
        const std::string rp = p + ".omega[" + std::to_string(r) + "]";
        const toml::array& row = array(rows2[r], rp);
        if (row.size() != 3) fail(&row, rp, "expected [i, j, value]");
        const int i = index(row[0], rp, g.dim), j = index(row[1], rp, g.dim);
        const Rational v = rational(row[2], rp);
        w(i, j) = v;
        w(j, i) = -v;
      }
      g.omega = w;
    }
    return g;
  }

  static Blocks zero_blocks(Ring r, int m) {
    const auto n = static_cast<std::size_t>(m);
    return Blocks(n, std::vector<std::vector<FPoly>>(n, std::vector<FPoly>(n, FPoly(r))));
  }

  AlgebroidInput algebroid(const toml::table& t) const {
    const std::string p = "algebroid";
    AlgebroidInput a;
    a.name = t.get("name") ? string(*t.get("name"), p + ".name") : "algebroid";
    a.ring = ring(t, p);
    const int m = static_cast<int>(integer(need(t, "rank", p), p + ".rank", 1, kMaxDim));
    a.anchor.assign(static_cast<std::size_t>(m), VecField::zero(a.ring));
    entries(need(t, "anchor", p), p + ".anchor", 2, std::max(m, a.ring.dim), a.ring,
            [&](const std::vector<int>& i, const FPoly& f, const toml::node* n, const std::string& rp) {
              if (i[0] >= m || i[1] >= a.ring.dim) fail(n, rp, "anchor index out of range");
              a.anchor[static_cast<std::size_t>(i[0])][i[1]] = f;
            });
    a.structure = zero_blocks(a.ring, m);
    if (const toml::node* s = t.get("structure"))
      entries(*s, p + ".structure", 3, m, a.ring, [&](const std::vector<int>& i, const FPoly& f, const toml::node*, const std::string&) {
        const auto k = static_cast<std::size_t>(i[0]), x = static_cast<std::size_t>(i[1]), y = static_cast<std::size_t>(i[2]);
        a.structure[k][x][y] = f;
        a.structure[k][y][x] = -f;
      });
    if (const toml::node* q = t.get("q")) {
      a.q = zero_blocks(a.ring, m);
      entries(*q, p + ".q", 3, m, a.ring, [&](const std::vector<int>& i, const FPoly& f, const toml::node*, const std::string&) {
        (*a.q)[static_cast<std::size_t>(i[0])][static_cast<std::size_t>(i[1])][static_cast<std::size_t>(i[2])] = f;
      });
    }
    return a;
  }

  LenardInput lenard(const toml::table& t, const AlgebroidInput& a) const {
    const std::string p = "lenard";
    const int m = static_cast<int>(a.anchor.size());
    LenardInput l;
    l.seed = Section::zero(a.ring, m);
    entries(need(t, "seed", p), p + ".seed", 1, m, a.ring,
            [&](const std::vector<int>& i, const FPoly& f, const toml::node*, const std::string&) { l.seed[i[0]] = f; });
    l.omega = KForm(a.ring, m, 2);
    entries(need(t, "omega", p), p + ".omega", 2, m, a.ring,
            [&](const std::vector<int>& i, const FPoly& f, const toml::node* n, const std::string& rp) {
              if (i[0] >= i[1]) fail(n, rp, "two-form entries need i < j");
              l.omega += f * KForm::basis(a.ring, m, {i[0], i[1]});
            });
    if (const toml::node* c = t.get("cap")) l.cap = static_cast<int>(integer(*c, p + ".cap", 1, 64));
    return l;
  }

  FlowInput flow(const toml::table& t) const {
    const std::string p = "flow";
    FlowInput f;
    f.ring = torus(static_cast<int>(integer(need(t, "dim", p), p + ".dim", 1, 2)));
    if (const toml::node* w = t.get("window")) {
      const toml::table& wt = table(*w, p + ".window");
      f.window.radius = static_cast<int>(integer(need(wt, "radius", p + ".window"), p + ".window.radius", 0, 16));
      f.window.lo = static_cast<int>(integer(need(wt, "lo", p + ".window"), p + ".window.lo", -64, 64));
      f.window.hi = static_cast<int>(integer(need(wt, "hi", p + ".window"), p + ".window.hi", f.window.lo, 64));
    }
    if (const toml::node* c = t.get("casimir")) f.casimir = string(*c, p + ".casimir");
    if (f.casimir != "zero" && f.casimir != "translation" && f.casimir != "quadratic")
      fail(t.get("casimir"), p + ".casimir", "casimir must be zero, translation or quadratic");
    if (const toml::node* s = t.get("s")) f.s = static_cast<int>(integer(*s, p + ".s", -64, 64));
    if (f.casimir == "translation") {
      const toml::array& c = array(need(t, "translation", p), p + ".translation");
      if (static_cast<int>(c.size()) != f.ring.dim) fail(&c, p + ".translation", "one entry per torus direction");
      for (const auto& x : c) f.translation.push_back(rational(x, p + ".translation"));
    }
    f.point = APair::zero(f.ring);
    const int n = f.ring.dim;
    if (const toml::node* fl = t.get("field"))
      entries(*fl, p + ".field", 1, n, f.ring,
              [&](const std::vector<int>& i, const FPoly& v, const toml::node*, const std::string&) { f.point.field[i[0]] = v; });
    if (const toml::node* fo = t.get("form"))
      entries(*fo, p + ".form", 1, n, f.ring,
              [&](const std::vector<int>& i, const FPoly& v, const toml::node*, const std::string&) { f.point.form[i[0]] = v; });
    if (const toml::node* d = t.get("dt")) f.dt = real(*d, p + ".dt");
    if (!(f.dt > 0)) fail(t.get("dt"), p + ".dt", "time step must be positive");
    if (const toml::node* s = t.get("steps")) f.steps = static_cast<int>(integer(*s, p + ".steps", 0, 100000000));
    if (const toml::node* w = t.get("watch"))
      for (const auto& x : array(*w, p + ".watch")) f.watch.push_back(static_cast<int>(integer(x, p + ".watch", -64, 64)));
    if (const toml::node* s = t.get("snapshot_every"))
      f.snapshot_every = static_cast<int>(integer(*s, p + ".snapshot_every", 0, 100000000));
    if (const toml::node* l = t.get("leak_tolerance")) f.leak_tolerance = real(*l, p + ".leak_tolerance");
    if (const toml::node* pol = t.get("policy")) {
      const std::string v = string(*pol, p + ".policy");
      if (v != "hard" && v != "strict") fail(pol, p + ".policy", "policy must be hard or strict");
      f.policy = v == "hard" ? ProjectionPolicy::Hard : ProjectionPolicy::Strict;
    }
    return f;
  }

 private:
  std::string source_;
};

}  // namespace

InputDocument parse_input(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw ParseError(os.str());
  }
  Reader rd(source);
  InputDocument doc;
  doc.source = source;
  const std::string schema = rd.string(rd.need(root, "schema", "schema"), "schema");
  if (schema != kInputSchema) rd.fail(root.get("schema"), "schema", "unsupported schema \"" + schema + "\", expected \"" + kInputSchema + "\"");
  for (const auto& [key, node] : root) {
    const std::string k(key.str());
    if (k != "schema" && k != "lie_algebra" && k != "algebroid" && k != "lenard" && k != "flow")
      rd.fail(&node, k, "unknown section");
  }
  if (const toml::node* n = root.get("lie_algebra")) doc.lie_algebra = rd.lie_algebra(rd.table(*n, "lie_algebra"));
  if (const toml::node* n = root.get("algebroid")) doc.algebroid = rd.algebroid(rd.table(*n, "algebroid"));
  if (const toml::node* n = root.get("lenard")) {
    if (!doc.algebroid) rd.fail(n, "lenard", "a [lenard] section needs an [algebroid] section");
    doc.lenard = rd.lenard(rd.table(*n, "lenard"), *doc.algebroid);
  }
  if (const toml::node* n = root.get("flow")) doc.flow = rd.flow(rd.table(*n, "flow"));
  return doc;
}

InputDocument load_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open input file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_input(ss.str(), path);
}

}  // namespace cab::io
