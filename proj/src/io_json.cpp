#include "cab/io/json.hpp"

namespace cab::io {

Json to_json(const Rational& q) { return to_string(q); }

namespace {

Json record(const MultiIndex& idx, int dim, Json re, Json im) {
  Json k = Json::array();
  for (int j = 0; j < dim; ++j) k.push_back(idx.torus[static_cast<std::size_t>(j)]);
  return Json{{"k", k}, {"lam", idx.loop}, {"re", std::move(re)}, {"im", std::move(im)}};
}

template <class T>
Json components(const T& v) {
  Json out = Json::array();
  for (const auto& f : v.comps()) out.push_back(to_json(f));
  return out;
}

}  // namespace

Json to_json(const FPoly& f) {
  Json out = Json::array();
  for (const auto& [idx, c] : f.terms()) out.push_back(record(idx, f.dim(), to_json(c.re()), to_json(c.im())));
  return out;
}

Json to_json(const VecField& v) { return components(v); }
Json to_json(const OneForm& a) { return components(a); }
Json to_json(const Section& s) { return components(s); }

Json to_json(const KForm& w) {
  Json comps = Json::array();
  for (const auto& [mask, f] : w.components()) {
    Json idx = Json::array();
    for (int i : mask_indices(mask)) idx.push_back(i + 1);
    comps.push_back(Json{{"idx", idx}, {"coeff", to_json(f)}});
  }
  return Json{{"rank", w.rank()}, {"degree", w.degree()}, {"components", comps}};
}

Json to_json(const Window& w) { return Json{{"radius", w.radius}, {"lo", w.lo}, {"hi", w.hi}}; }

Json to_json(const IdentityReport& r) {
  return Json{{"identity", r.identity},
              {"instances", r.instances},
              {"failures", r.failures},
              {"certified", r.certified()},
              {"witness", r.witness}};
}

Json to_json(const SuiteResult& r) {
  Json ids = Json::array();
  for (const auto& id : r.identities) ids.push_back(to_json(id));
  Json notes = Json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  return Json{{"suite", r.suite}, {"certified", r.certified()}, {"identities", ids}, {"notes", notes}};
}

Json state_json(const std::vector<BasisMode>& basis, const State& y, int dim) {
  std::vector<Json> comps(static_cast<std::size_t>(2 * dim), Json::array());
  for (std::size_t a = 0; a < basis.size(); ++a)
    if (y[a] != 0.0) comps[static_cast<std::size_t>(basis[a].comp)].push_back(record(basis[a].idx, dim, y[a].real(), y[a].imag()));
  Json field = Json::array(), form = Json::array();
  for (int c = 0; c < 2 * dim; ++c) (c < dim ? field : form).push_back(comps[static_cast<std::size_t>(c)]);
  return Json{{"field", field}, {"form", form}};
}

std::string ring_text(Ring r) {
  return std::string(r.flavor == Flavor::Fourier ? "torus" : "chart") + "(" + std::to_string(r.dim) + ")";
}

}  // namespace cab::io
