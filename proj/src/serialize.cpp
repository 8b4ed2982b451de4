#include "cmtk/serialize.hpp"

#include <fstream>
#include <sstream>

namespace cmtk {

namespace {

Json complex_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? to_json(*v) : Json(nullptr);
}

Json optional_double(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

template <typename Scalar>
Json scalar_json(const Scalar& x) {
    if constexpr (is_exact_v<Scalar>)
        return to_string(x);
    else
        return x;
}

std::optional<Rational> exact_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return try_parse_rational(j.get<std::string>());
    return std::nullopt;
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

const Json& array_field(const Json& j, const std::string& key, const std::string& where) {
    const Json& a = field(j, key, where);
    if (!a.is_array()) throw ParseError(where + "." + key + ": expected an array");
    return a;
}

bool all_exact(const Json& j, const std::vector<std::string>& scalars, const char* array, const char* a, const char* b) {
    for (const auto& key : scalars)
        if (j.contains(key) && !exact_from_json(j[key])) return false;
    if (j.contains(array) && j[array].is_array())
        for (const auto& atom : j[array])
            if (!atom.is_object() || !atom.contains(a) || !atom.contains(b) || !exact_from_json(atom[a]) ||
                !exact_from_json(atom[b]))
                return false;
    return true;
}

template <typename Scalar>
Scalar scalar_from_json(const Json& j, const std::string& where) {
    if constexpr (is_exact_v<Scalar>)
        return rational_from_json(j, where);
    else
        return real_from_json(j, where);
}

template <typename Scalar>
std::vector<MeasureAtom<Scalar>> atoms_from_json(const Json& j, const std::string& where) {
    std::vector<MeasureAtom<Scalar>> atoms;
    const Json& arr = array_field(j, "atoms", where);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = where + ".atoms[" + std::to_string(i) + "]";
        atoms.push_back({scalar_from_json<Scalar>(field(arr[i], "u", at), at + ".u"),
                         scalar_from_json<Scalar>(field(arr[i], "w", at), at + ".w")});
    }
    return atoms;
}

Support support_from_json(const Json& j, Support fallback) {
    if (!j.contains("support")) return fallback;
    const auto s = j["support"];
    if (s == "closed") return Support::closed;
    if (s == "half_open") return Support::half_open;
    throw ParseError("support: expected \"closed\" or \"half_open\"");
}

template <typename Scalar>
DiscreteMeasure<Scalar> measure_impl(const Json& j, Support fallback) {
    try {
        return DiscreteMeasure<Scalar>(atoms_from_json<Scalar>(j, "measure"), support_from_json(j, fallback));
    } catch (const DomainError& e) {
        throw ParseError(std::string("measure: ") + e.what());
    }
}

template <typename Scalar>
CATriplet<Scalar> ca_triplet_impl(const Json& j) {
    CATriplet<Scalar> t;
    t.q = j.contains("q") ? scalar_from_json<Scalar>(j["q"], "triplet.q") : Scalar(0);
    t.d = j.contains("d") ? scalar_from_json<Scalar>(j["d"], "triplet.d") : Scalar(0);
    if (t.q < 0 || t.d < 0) throw ParseError("triplet: q and d must be >= 0");
    if (j.contains("atoms")) t.measure = measure_impl<Scalar>(j, Support::half_open);
    return t;
}

}  // namespace

Json to_json(const Rational& x) { return to_string(x); }

Json to_json(const Number& n) {
    Json j = {{"value", n.value}, {"error", n.error}};
    if (n.exact) j["exact"] = to_string(*n.exact);
    return j;
}

Json to_json(const Certificate& c) {
    Json w = nullptr;
    if (c.witness) w = {{"n", c.witness->n}, {"k", c.witness->k}, {"value", to_json(c.witness->value)}};
    return {{"kind", to_string(c.kind)},       {"depth", c.depth},
            {"max_index", c.max_index},        {"verdict", to_string(c.verdict)},
            {"witness", w},                    {"min_margin", to_json(c.min_margin)},
            {"origin_margin", to_json(c.origin_margin)}, {"checked", c.checked},
            {"undecided", c.undecided},        {"mode", to_string(c.mode)}};
}

Json to_json(const AtomEstimate& a) {
    Json trail = Json::array();
    for (const auto& t : a.trail) trail.push_back(to_json(t));
    return {{"kind", to_string(a.kind)},
            {"first_n", a.first_n},
            {"trail", trail},
            {"estimate", to_json(a.estimate)},
            {"monotone_ok", a.monotone_ok}};
}

Json to_json(const MinimalityReport& m) { return {{"minimal", m.minimal}, {"tol", m.tol}, {"atom", to_json(m.atom)}}; }

Json to_json(const DegeneracyReport& d) {
    Json z = nullptr;
    if (d.zero_entry) z = {{"n", d.zero_entry->first}, {"k", d.zero_entry->second}};
    return {{"degeneracy", to_string(d.degeneracy)}, {"zero_entry", z}, {"tail_consistent", d.tail_consistent}};
}

Json to_json(const FitReport& r) {
    return {{"residual", r.residual},
            {"kkt_gap", r.kkt_gap},
            {"grid_size", r.grid_size},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"mode", to_string(r.mode)},
            {"tol", r.tol},
            {"drift_upper_bound", optional_double(r.drift_upper_bound)},
            {"drift_bias", r.drift_bias},
            {"drift_clamped", r.drift_clamped}};
}

Json to_json(const LaplaceMeasure& m) {
    Json atoms = Json::array();
    for (const auto& a : m.atoms) atoms.push_back({{"x", a.x}, {"w", a.w}});
    return {{"atoms", atoms}, {"infinity_mass", m.infinity_mass}};
}

Json to_json(const BernsteinTriplet& t) {
    Json levy = Json::array();
    for (const auto& a : t.levy) levy.push_back({{"x", a.x}, {"w", a.w}});
    return {{"q", t.q}, {"d", t.d}, {"levy", levy}, {"infinity_mass", t.infinity_mass}};
}

Json to_json(const SeriesEvaluation& e) {
    return {{"partial_sum", complex_json(e.partial_sum)},
            {"tail_estimate", e.tail_estimate},
            {"diverging", e.diverging},
            {"outside_half_plane", e.outside_half_plane},
            {"accelerated", complex_json(e.accelerated)},
            {"levin_order", e.levin_order},
            {"acceleration_change", e.acceleration_change},
            {"n_terms", e.n_terms}};
}

Json to_json(const ExponentialTypeReport& r) {
    return {{"pass", r.pass}, {"worst", r.worst}, {"worst_excess", r.worst_excess}};
}

Json to_json(const CmLimitReport& r) {
    return {{"c", r.c},
            {"n_max", r.n_max},
            {"horizon", r.horizon},
            {"psi_inf", r.psi_inf},
            {"grid", r.grid},
            {"limit", r.limit},
            {"residual", r.residual},
            {"tail", r.tail},
            {"c_alt", optional_double(r.c_alt)},
            {"psi_inf_alt", r.psi_inf_alt},
            {"c_difference", r.c_difference},
            {"c_independent", r.c_independent}};
}

Json to_json(const BfLimitReport& r) {
    return {{"c", r.c},
            {"n_max", r.n_max},
            {"q", r.q},
            {"d", r.d},
            {"d_cesaro", r.d_cesaro},
            {"grid", r.grid},
            {"theta", r.theta},
            {"residual", r.residual},
            {"telescoping_error", optional_double(r.telescoping_error)}};
}

Json to_json(const LatticeReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back(
            {{"alpha", e.alpha}, {"certificate", to_json(e.certificate)}, {"minimality", optional_json(e.minimality)}});
    return {{"kind", to_string(r.kind)}, {"entries", entries},   {"verdict", to_string(r.verdict)},
            {"all_minimal", r.all_minimal}, {"complete", r.complete}, {"message", r.message}};
}

Json to_json(const SubaffineReport& r) {
    return {{"supremum", r.supremum}, {"argmax", r.argmax}, {"pass", r.pass}};
}

Json to_json(const WebsterSolution& s) {
    return {{"value", s.value},
            {"raw_value", s.raw_value},
            {"log_value", s.log_value},
            {"indicator", s.indicator},
            {"gamma_raw", s.gamma_raw},
            {"gamma_accelerated", s.gamma_accelerated},
            {"tail_ratio", s.tail_ratio},
            {"unit_limit_path", s.unit_limit_path},
            {"log_concave", s.log_concave},
            {"warnings", s.warnings}};
}

Json to_json(const ThetaReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"c", e.c},
                           {"zero_at_origin", e.zero_at_origin},
                           {"certificate", to_json(e.certificate)},
                           {"increment_ratio", e.increment_ratio},
                           {"bounded", e.bounded},
                           {"affine", e.affine},
                           {"verdict", to_string(e.verdict)}});
    return {{"entries", entries}, {"verdict", to_string(r.verdict)}};
}

namespace {

Json sd_test_json(const SdTest& t) {
    return {{"certificate", to_json(t.certificate)},
            {"minimality", optional_json(t.minimality)},
            {"verdict", to_string(t.verdict)},
            {"witness_delta", optional_double(t.witness_delta)},
            {"affine", t.affine}};
}

}  // namespace

Json to_json(const SdReport& r) {
    Json a = Json::array();
    for (const auto& [c, t] : r.test_a) {
        Json e = sd_test_json(t);
        e["c"] = c;
        a.push_back(std::move(e));
    }
    return {{"test_a", a},
            {"test_b", r.test_b ? sd_test_json(*r.test_b) : Json(nullptr)},
            {"b_skipped", r.b_skipped},
            {"derivative_supplied", r.derivative_supplied},
            {"derivative_error", r.derivative_error},
            {"verdict", to_string(r.verdict)},
            {"caveat", r.caveat}};
}

Json to_json(const EgfCheck& e) {
    return {{"max_residual", e.max_residual}, {"truncation_bound", e.truncation_bound}, {"ok", e.ok}};
}

template <typename Scalar>
Json to_json(const Sequence<Scalar>& a) {
    Json values = Json::array();
    for (Index k = 0; k <= a.max_index(); ++k) values.push_back(scalar_json(a[k]));
    Json j = {{"mode", to_string(ScalarTraits<Scalar>::mode)}, {"step", a.step()}, {"values", values}};
    if constexpr (!is_exact_v<Scalar>) j["errors"] = std::vector<double>(a.errors().data(), a.errors().data() + a.errors().size());
    return j;
}

template <typename Scalar>
Json to_json(const DiscreteMeasure<Scalar>& m) {
    Json atoms = Json::array();
    for (const auto& a : m.atoms()) atoms.push_back({{"u", scalar_json(a.u)}, {"w", scalar_json(a.w)}});
    return {{"support", m.support() == Support::closed ? "closed" : "half_open"},
            {"atoms", atoms},
            {"total_mass", scalar_json(m.total_mass())}};
}

template <typename Scalar>
Json to_json(const CATriplet<Scalar>& t) {
    Json j = to_json(t.measure);
    j.erase("support");
    j["q"] = scalar_json(t.q);
    j["d"] = scalar_json(t.d);
    return j;
}

template <typename Scalar>
Json to_json(const NewtonSeries<Scalar>& s) {
    Json coeffs = Json::array();
    for (Index k = 0; k < s.size(); ++k) coeffs.push_back(scalar_json(s.coeffs()(k)));
    const Json samples = to_json(s.samples());
    return {{"mode", to_string(ScalarTraits<Scalar>::mode)},
            {"basis", "falling"},
            {"step", s.samples().step()},
            {"coefficients", coeffs},
            {"errors", std::vector<double>(s.errors().data(), s.errors().data() + s.errors().size())},
            {"samples", samples["values"]}};
}

template <typename Scalar>
Json to_json(const BernsteinExtraction<Scalar>& e) {
    return {{"moment_form", to_json(e.moment_form)},
            {"triplet", to_json(e.triplet)},
            {"report", to_json(e.report)},
            {"certificate", to_json(e.certificate)},
            {"roundtrip_error", e.roundtrip_error},
            {"d_limit", optional_double(e.d_limit)}};
}

double real_from_json(const Json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (auto r = try_parse_rational(s)) return to_double(*r);
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
    }
    throw ParseError(where + ": expected a number or a \"p/q\" string");
}

Rational rational_from_json(const Json& j, const std::string& where) {
    if (auto r = exact_from_json(j)) return *r;
    throw ParseError(where + ": expected an integer or a \"p/q\" string");
}

BernsteinTriplet bernstein_triplet_from_json(const Json& j) {
    BernsteinTriplet t;
    if (!j.is_object()) throw ParseError("triplet: expected an object");
    t.q = j.contains("q") ? real_from_json(j["q"], "triplet.q") : 0.0;
    t.d = j.contains("d") ? real_from_json(j["d"], "triplet.d") : 0.0;
    t.infinity_mass = j.contains("infinity_mass") ? real_from_json(j["infinity_mass"], "triplet.infinity_mass") : 0.0;
    const Json& levy = array_field(j, "levy", "triplet");
    for (std::size_t i = 0; i < levy.size(); ++i) {
        const std::string at = "triplet.levy[" + std::to_string(i) + "]";
        t.levy.push_back({real_from_json(field(levy[i], "x", at), at + ".x"),
                          real_from_json(field(levy[i], "w", at), at + ".w")});
    }
    try {
        t.validate();
    } catch (const DomainError& e) {
        throw ParseError(std::string("triplet: ") + e.what());
    }
    return t;
}

DiscreteMeasure<Rational> exact_measure_from_json(const Json& j) { return measure_impl<Rational>(j, Support::closed); }
DiscreteMeasure<double> measure_from_json(const Json& j) { return measure_impl<double>(j, Support::closed); }
CATriplet<Rational> exact_ca_triplet_from_json(const Json& j) { return ca_triplet_impl<Rational>(j); }
CATriplet<double> ca_triplet_from_json(const Json& j) { return ca_triplet_impl<double>(j); }

bool json_is_exact(const Json& j) { return all_exact(j, {"q", "d"}, "atoms", "u", "w"); }

std::variant<NewtonSeries<Rational>, NewtonSeries<double>> series_from_json(const Json& j) {
    const Json& samples = array_field(j, "samples", "series");
    const double step = j.contains("step") ? real_from_json(j["step"], "series.step") : 1.0;
    const std::string mode = j.contains("mode") ? j["mode"].get<std::string>() : "floating";
    if (mode == "exact") {
        Vector<Rational> v(static_cast<Index>(samples.size()));
        for (std::size_t i = 0; i < samples.size(); ++i)
            v(static_cast<Index>(i)) = rational_from_json(samples[i], "series.samples[" + std::to_string(i) + "]");
        return series_from_samples(Sequence<Rational>(std::move(v), step));
    }
    Eigen::VectorXd v(static_cast<Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i)
        v(static_cast<Index>(i)) = real_from_json(samples[i], "series.samples[" + std::to_string(i) + "]");
    return series_from_samples(Sequence<double>(std::move(v), step));
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

template Json to_json(const Sequence<double>&);
template Json to_json(const Sequence<Rational>&);
template Json to_json(const DiscreteMeasure<double>&);
template Json to_json(const DiscreteMeasure<Rational>&);
template Json to_json(const CATriplet<double>&);
template Json to_json(const CATriplet<Rational>&);
template Json to_json(const NewtonSeries<double>&);
template Json to_json(const NewtonSeries<Rational>&);
template Json to_json(const BernsteinExtraction<double>&);
template Json to_json(const BernsteinExtraction<Rational>&);

}  // namespace cmtk
