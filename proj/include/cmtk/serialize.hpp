#pragma once

// JSON forms of sequences, certificates, measures, triplets, series and reports. Readers accept
// reals as JSON numbers or as "p/q" strings and name the offending field on error.

#include "cmtk/bernstein.hpp"
#include "cmtk/newton.hpp"
#include "cmtk/webster.hpp"

#include <json.hpp>

namespace cmtk {

using Json = nlohmann::json;

Json to_json(const Number& n);
Json to_json(const Rational& x);  // "p/q"
Json to_json(const Certificate& c);
Json to_json(const AtomEstimate& a);
Json to_json(const MinimalityReport& m);
Json to_json(const DegeneracyReport& d);
Json to_json(const FitReport& r);
Json to_json(const LaplaceMeasure& m);
Json to_json(const BernsteinTriplet& t);  // {"q", "d", "levy": [{"x", "w"}], "infinity_mass"}
Json to_json(const SeriesEvaluation& e);
Json to_json(const ExponentialTypeReport& r);
Json to_json(const CmLimitReport& r);
Json to_json(const BfLimitReport& r);
Json to_json(const LatticeReport& r);
Json to_json(const SubaffineReport& r);
Json to_json(const WebsterSolution& s);
Json to_json(const ThetaReport& r);
Json to_json(const SdReport& r);
Json to_json(const EgfCheck& e);

template <typename Scalar>
Json to_json(const Sequence<Scalar>& a);
template <typename Scalar>
Json to_json(const DiscreteMeasure<Scalar>& m);  // {"support", "atoms": [{"u", "w"}]}
template <typename Scalar>
Json to_json(const CATriplet<Scalar>& t);        // {"q", "d", "atoms": [{"u", "w"}]}
template <typename Scalar>
Json to_json(const NewtonSeries<Scalar>& s);     // coefficients, errors and the source samples
template <typename Scalar>
Json to_json(const BernsteinExtraction<Scalar>& e);

/// A real from a JSON number or a rational string; `field` names the location in errors.
double real_from_json(const Json& j, const std::string& field);
Rational rational_from_json(const Json& j, const std::string& field);

/// True when "q", "d" and every atom's "u" and "w" are integers or rational strings.
bool json_is_exact(const Json& j);

/// {"q", "d", "levy": [{"x", "w"}], optional "infinity_mass"}. Validated; throws ParseError.
BernsteinTriplet bernstein_triplet_from_json(const Json& j);
/// {"atoms": [{"u", "w"}]} on [0, 1]; exact when every entry is rational.
DiscreteMeasure<Rational> exact_measure_from_json(const Json& j);
DiscreteMeasure<double> measure_from_json(const Json& j);
/// {"q", "d", "atoms": [{"u", "w"}]} with u in [0, 1).
CATriplet<Rational> exact_ca_triplet_from_json(const Json& j);
CATriplet<double> ca_triplet_from_json(const Json& j);
/// Rebuilds a series from its "samples" and "step"; "mode" selects exact or binary64.
std::variant<NewtonSeries<Rational>, NewtonSeries<double>> series_from_json(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace cmtk
