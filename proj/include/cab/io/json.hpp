#pragma once

#include <json.hpp>

#include "cab/lenard.hpp"
#include "cab/loopflow.hpp"
#include "cab/suites.hpp"

namespace cab::io {

/// Reports keep key insertion order; output is a pure function of the data.
using Json = nlohmann::ordered_json;

/// "p/q", or "p" for integers.
Json to_json(const Rational& q);
/// Records {k: [k_1..k_n], lam, re, im} in term order.
Json to_json(const FPoly& f);
Json to_json(const VecField& v);
Json to_json(const OneForm& a);
Json to_json(const Section& s);
/// {rank, degree, components: [{idx: [1-based], coeff}]}.
Json to_json(const KForm& w);
Json to_json(const Window& w);
Json to_json(const IdentityReport& r);
Json to_json(const SuiteResult& r);
/// Float coefficients grouped like FPoly records: {field: [[..]], form: [[..]]}.
Json state_json(const std::vector<BasisMode>& basis, const State& y, int dim);

std::string ring_text(Ring r);

}  // namespace cab::io
