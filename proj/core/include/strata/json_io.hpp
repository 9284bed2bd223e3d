#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strata/appendix.hpp"
#include "strata/bundles.hpp"
#include "strata/darboux.hpp"
#include "strata/gap.hpp"
#include "strata/gauge.hpp"

namespace strata {

using json = nlohmann::json;

// Scalars: a JSON number, a "p/q" string, or a pair [re, im] of those.
// A document is exact when every number in it is an integer; strings are
// always exact.
bool json_is_exact(const json& j);

template <class S>
S scalar_from_json(const json& j);
json to_json(const cplx& z);
json to_json(const qcomplex& z);

template <class S>
std::vector<S> vector_from_json(const json& j);
template <class S>
json vector_to_json(const std::vector<S>& v);

// Polynomial: {"vars": d, "terms": [{"exp": [..], "coef": scalar}, ...]}.
template <class S>
Poly<S> poly_from_json(const json& j);
template <class S>
json poly_to_json(const Poly<S>& p);

// Series: {"vars", "center", "K", "reliable", "terms"}.
template <class S>
TruncatedSeries<S> series_from_json(const json& j);
template <class S>
json series_to_json(const TruncatedSeries<S>& s);

// Matrix of series: {"n", "vars", "center", "K", "entries": [[terms]],
// "reliable": [[int]]}; entries hold the term lists only.
template <class S>
SeriesMatrix<S> series_matrix_from_json(const json& j);
template <class S>
json series_matrix_to_json(const SeriesMatrix<S>& m);

Partition partition_from_json(const json& j);
SegreSymbol symbol_from_json(const json& j);
json to_json(const SegreSymbol& s);

Eigen::MatrixXcd matrix_from_json(const json& j);
json matrix_to_json(const Eigen::MatrixXcd& m);

json to_json(const Subspace& s);
Subspace subspace_from_json(const json& j);

// {"d", "n", "entries": [[poly]], "branches": [{"lambda": poly, "multiplicity": m}]}
MatrixFamily family_from_json(const json& j);
json to_json(const MatrixFamily& f);

// {"d", "n", "x0", "f": [poly], "b": [scalar], "F0": [[scalar]] (optional)}
template <class S>
DEProblem<S> de_problem_from_json(const json& j);
template <class S>
json de_problem_to_json(const DEProblem<S>& p);
template <class S>
InitialValue<S> initial_value_from_json(const json& j);

// {"d", "n", "center", "K", "Delta0": [poly], "Bdiag": [scalar], "L": series matrix}
template <class S>
FramedConnection<S> connection_from_json(const json& j);
template <class S>
json connection_to_json(const FramedConnection<S>& c);

// {"K", "F": [series matrix]}
template <class S>
GaugeSeries<S> gauge_series_from_json(const json& j);
template <class S>
json gauge_series_to_json(const GaugeSeries<S>& g);

json to_json(const BundleDescriptor& b);
json to_json(const HasseDiagram& h);
json to_json(const MatrixClassification& c);
json to_json(const JordanizabilityReport& r);
json to_json(const LimitResult& r);
json to_json(const DEResidualReport& r);
json to_json(const IntegrabilityReport& r);
json to_json(const HolconReport& r);
json to_json(const CurveReport& r);
json to_json(const MonomialFamily& f);
template <class S>
json residual_to_json(const GaugeResidual<S>& r);
template <class S>
json pfaffian_to_json(const PfaffianReport<S>& r);
template <class S>
json classification_to_json(const Classification2x2<S>& c);

// Reads a JSON file; throws Error("io") or Error("parse").
json read_json_file(const std::string& path);

}  // namespace strata
