#include "cmtk/cli.hpp"

#include "cmtk/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cmtk {

namespace {

constexpr const char* kVersion = "1.0.0";

struct Outcome {
    int code = exit_pass;
    Json result;
};

Kind parse_kind(const std::string& s) {
    if (s == "cm") return Kind::cm;
    if (s == "ca") return Kind::ca;
    throw ParseError("--kind: expected cm or ca, got '" + s + "'");
}

Kind require_kind(const Command& cmd, Json& params) {
    if (!cmd.kind) throw ParseError("--kind is required");
    params["kind"] = *cmd.kind;
    return parse_kind(*cmd.kind);
}

const std::string& single_input(const Command& cmd) {
    if (cmd.inputs.size() != 1) throw ParseError(cmd.name + ": expected exactly one input file");
    return cmd.inputs.front();
}

AnySequence load_sequence(const Command& cmd, Json& params) {
    const std::string& path = single_input(cmd);
    params["input"] = path;
    AnySequence a = read_sequence_file(path, cmd.mode);
    params["mode"] = std::holds_alternative<Sequence<Rational>>(a) ? "exact" : "floating";
    return a;
}

bool is_json_object_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    char ch = 0;
    while (in.get(ch))
        if (!std::isspace(static_cast<unsigned char>(ch))) return ch == '{';
    return false;
}

FunctionHandle measure_handle(const DiscreteMeasure<double>& m, const std::string& name) {
    return FunctionHandle(name, [m](long double lambda) {
        long double s = 0;
        for (const auto& a : m.atoms()) {
            if (a.u == 0.0) {
                if (lambda == 0) s += a.w;
                continue;
            }
            s += a.w * std::pow(static_cast<long double>(a.u), lambda);
        }
        return s;
    });
}

// A handle from --builtin or from a JSON file holding a Bernstein triplet ("levy"), a CA triplet
// ("q"/"d" with "atoms") or a CM measure ("atoms").
FunctionHandle load_function(const Command& cmd, Json& params) {
    if (cmd.builtin && !cmd.inputs.empty()) throw ParseError(cmd.name + ": give either --builtin or a file, not both");
    if (cmd.builtin) {
        params["builtin"] = *cmd.builtin;
        return resolve_builtin(*cmd.builtin);
    }
    const std::string& path = single_input(cmd);
    params["input"] = path;
    const Json j = read_json_file(path);
    if (!j.is_object()) throw ParseError(path + ": expected a JSON object");
    if (j.contains("levy")) return triplet_handle(bernstein_triplet_from_json(j), path);
    if (j.contains("q") || j.contains("d")) return triplet_handle(to_exponential(ca_triplet_from_json(j)), path);
    if (j.contains("atoms")) return measure_handle(measure_from_json(j), path);
    throw ParseError(path + ": expected a triplet (\"levy\" or \"q\", \"d\", \"atoms\") or a measure (\"atoms\")");
}

Json points_json(const std::vector<double>& xs) { return xs; }

Json values_at(const std::vector<double>& at, const std::function<Json(double)>& f) {
    Json out = Json::array();
    for (double x : at) out.push_back(f(x));
    return out;
}

std::vector<double> require_at(const Command& cmd, Json& params) {
    if (cmd.at.empty()) throw ParseError(cmd.name + ": --at is required");
    params["at"] = points_json(cmd.at);
    return cmd.at;
}

InversionOptions inversion_options(const Command& cmd, Json& params) {
    InversionOptions o;
    if (cmd.grid) o.grid = *cmd.grid;
    if (cmd.tol) o.tol = *cmd.tol;
    params["grid"] = o.grid;
    params["tol"] = o.tol;
    return o;
}

// --- subcommands -----------------------------------------------------------------------------

Outcome run_certify(const Command& cmd, Json& params) {
    const Kind kind = require_kind(cmd, params);
    const AnySequence seq = load_sequence(cmd, params);
    return std::visit(
        [&](const auto& a) {
            const Index depth = cmd.depth.value_or(default_depth(a));
            params["depth"] = depth;
            const Certificate c = certify(a, kind, depth);
            return Outcome{exit_code(c.verdict), {{"certificate", to_json(c)}}};
        },
        seq);
}

Outcome run_minimal(const Command& cmd, Json& params) {
    const Kind kind = require_kind(cmd, params);
    const AnySequence seq = load_sequence(cmd, params);
    return std::visit(
        [&](const auto& a) {
            const Index depth = cmd.depth.value_or(default_depth(a));
            params["depth"] = depth;
            params["tol"] = cmd.tol ? Json(*cmd.tol) : Json("default");
            const MinimalityReport m = is_minimal(a, kind, depth, cmd.tol);
            // the trail bounds the atom from above: a large trail is not a certified violation
            return Outcome{m.minimal ? exit_pass : exit_inconclusive, {{"minimality", to_json(m)}}};
        },
        seq);
}

Outcome run_invert(const Command& cmd, Json& params) {
    const std::string which = cmd.which.value_or("");
    params["which"] = which;
    const InversionOptions opts = inversion_options(cmd, params);
    const AnySequence seq = load_sequence(cmd, params);
    return std::visit(
        [&](const auto& a) {
            if (which == "cm") {
                const auto fit = invert_cm(a, opts);
                return Outcome{exit_pass,
                               {{"measure", to_json(fit.measure)},
                                {"laplace", to_json(to_exponential(fit.measure))},
                                {"report", to_json(fit.report)}}};
            }
            const auto fit = invert_ca(a, opts);
            return Outcome{exit_pass,
                           {{"triplet", to_json(fit.triplet)},
                            {"bernstein", to_json(to_exponential(fit.triplet))},
                            {"report", to_json(fit.report)}}};
        },
        seq);
}

Outcome run_evaluate(const Command& cmd, Json& params) {
    const std::string& path = single_input(cmd);
    params["input"] = path;
    const std::vector<double> at = require_at(cmd, params);
    const Json j = read_json_file(path);
    if (!j.is_object()) throw ParseError(path + ": expected a JSON object");
    std::function<double(double)> f;
    std::string form;
    if (j.contains("levy")) {
        const BernsteinTriplet t = bernstein_triplet_from_json(j);
        f = [t](double l) { return eval_bernstein(t, l); };
        form = "bernstein";
    } else if (j.contains("q") || j.contains("d")) {
        const auto t = ca_triplet_from_json(j);
        f = [t](double l) { return evaluate(t, l); };
        form = "ca_triplet";
    } else {
        const auto m = measure_from_json(j);
        f = [m](double l) { return evaluate(m, l); };
        form = "cm_measure";
    }
    params["form"] = form;
    return Outcome{exit_pass,
                   {{"values", values_at(at, [&](double l) { return Json{{"lambda", l}, {"value", f(l)}}; })}}};
}

Outcome run_extend(const Command& cmd, Json& params) {
    const Kind kind = require_kind(cmd, params);
    ExtendOptions opts;
    opts.inversion = inversion_options(cmd, params);
    opts.depth = cmd.depth;
    params["depth"] = cmd.depth ? Json(*cmd.depth) : Json("default");
    const AnySequence seq = load_sequence(cmd, params);
    params["at"] = points_json(cmd.at);
    const Interpolant ip = std::visit([&](const auto& a) { return extend_from_integer_samples(a, kind, opts); }, seq);
    Json rep = std::visit([](const auto& r) { return to_json(r); }, ip.representation());
    return Outcome{exit_pass,
                   {{"representation", rep},
                    {"certificate", to_json(ip.certificate())},
                    {"report", to_json(ip.report())},
                    {"values", values_at(cmd.at, [&](double l) { return Json{{"lambda", l}, {"value", ip(l)}}; })}}};
}

Outcome run_newton(const Command& cmd, Json& params) {
    const std::string which = cmd.which.value_or("");
    params["which"] = which;
    const std::string& path = single_input(cmd);
    std::variant<NewtonSeries<Rational>, NewtonSeries<double>> series = [&]() {
        if (is_json_object_file(path)) {
            params["input"] = path;
            return series_from_json(read_json_file(path));
        }
        const AnySequence seq = load_sequence(cmd, params);
        return std::visit(
            [](const auto& a) -> std::variant<NewtonSeries<Rational>, NewtonSeries<double>> {
                return series_from_samples(a);
            },
            seq);
    }();
    if (which == "fit") return Outcome{exit_pass, {{"series", std::visit([](const auto& s) { return to_json(s); }, series)}}};

    const std::vector<double> at = require_at(cmd, params);
    return std::visit(
        [&](const auto& s) {
            const Index terms = cmd.n.value_or(s.size());
            params["terms"] = terms;
            Outcome o;
            o.result["evaluations"] = values_at(at, [&](double z) {
                const SeriesEvaluation e = eval_series(s, Complex(z, 0.0), terms);
                if (e.diverging) o.code = exit_inconclusive;
                Json j = to_json(e);
                j["z"] = z;
                return j;
            });
            return o;
        },
        series);
}

Outcome run_webster(const Command& cmd, Json& params) {
    WebsterProblem p{load_function(cmd, params)};
    p.derivative = p.g.derivative() ? DerivativeMode::supplied : DerivativeMode::central_difference;
    p.N = cmd.n.value_or(p.N);
    p.unit_limit = cmd.unit_limit;
    params["N"] = p.N;
    params["unit_limit"] = p.unit_limit;
    params["derivative"] = p.derivative == DerivativeMode::supplied ? "supplied" : "central_difference";
    const std::vector<double> at = require_at(cmd, params);
    Outcome o;
    o.result["solutions"] = values_at(at, [&](double x) {
        const WebsterSolution s = solve_webster(p, x);
        if (!s.warnings.empty()) o.code = exit_inconclusive;
        Json j = to_json(s);
        j["x"] = x;
        return j;
    });
    return o;
}

Operator parse_operator(const std::string& s) {
    for (Operator op : {Operator::sigma, Operator::tau, Operator::delta, Operator::theta, Operator::rho})
        if (s == to_string(op)) return op;
    throw ParseError("--op: expected sigma, tau, delta, theta or rho, got '" + s + "'");
}

double single_c(const Command& cmd, Json& params, double fallback) {
    if (cmd.c.size() > 1) throw ParseError(cmd.name + ": expects a single --c");
    const double c = cmd.c.empty() ? fallback : cmd.c.front();
    params["c"] = c;
    return c;
}

Outcome run_operator(const Command& cmd, Json& params) {
    if (!cmd.op) throw ParseError("--op is required");
    const Operator op = parse_operator(*cmd.op);
    params["op"] = *cmd.op;
    const double c = single_c(cmd, params, 1.0);
    const Index n = cmd.n.value_or(1);
    params["n"] = n;
    const FunctionHandle f = load_function(cmd, params);
    const FunctionHandle g = apply_operator(f, op, c, n);
    const std::vector<double> at = require_at(cmd, params);
    return Outcome{exit_pass, {{"values", values_at(at, [&](double x) {
                                    const Evaluation e = g(x);
                                    return Json{{"x", x}, {"value", static_cast<double>(e.value)}, {"error", e.error}};
                                })}}};
}

Outcome run_decompose(const Command& cmd, Json& params) {
    const std::string which = cmd.which.value_or("");
    params["which"] = which;
    const double c = single_c(cmd, params, 1.0);
    const Index n_max = cmd.n.value_or(10000);
    params["n_max"] = n_max;
    const FunctionHandle f = load_function(cmd, params);
    const std::vector<double> grid = cmd.at.empty() ? default_grid(f.domain()) : cmd.at;
    params["grid"] = cmd.at.empty() ? Json("default") : points_json(cmd.at);
    if (which == "cm") return Outcome{exit_pass, {{"decomposition", to_json(cm_limit_decompose(f, c, n_max, grid))}}};
    return Outcome{exit_pass, {{"decomposition", to_json(bf_limit_decompose(f, c, n_max, grid))}}};
}

Outcome run_lattice(const Command& cmd, Json& params) {
    const Kind kind = parse_kind(cmd.kind.value_or("cm"));
    params["kind"] = to_string(kind);
    const std::vector<double> alphas = cmd.alpha.empty() ? std::vector<double>{1.0, 0.5, 1.0 / 3.0} : cmd.alpha;
    params["alpha"] = alphas;
    const Index depth = cmd.depth.value_or(20);
    params["depth"] = depth;
    LatticeOptions opts;
    opts.minimality_tol = cmd.tol;
    params["tol"] = cmd.tol ? Json(*cmd.tol) : Json("default");
    const LatticeReport r = lattice_check(load_function(cmd, params), kind, alphas, depth, opts);
    return Outcome{r.complete ? exit_code(r.verdict) : exit_inconclusive, {{"lattice", to_json(r)}}};
}

Outcome run_subaffine(const Command& cmd, Json& params) {
    if (!cmd.bound) throw ParseError("--bound is required");
    const double c = single_c(cmd, params, 1.0);
    params["bound"] = *cmd.bound;
    const FunctionHandle f = load_function(cmd, params);
    const std::vector<double> grid = cmd.at.empty() ? default_grid(f.domain()) : cmd.at;
    params["grid"] = cmd.at.empty() ? Json("default") : points_json(cmd.at);
    const SubaffineReport r = subaffine_check(f, c, *cmd.bound, grid);
    return Outcome{r.pass ? exit_pass : exit_fail, {{"subaffine", to_json(r)}}};
}

Outcome run_bftheta(const Command& cmd, Json& params) {
    const std::vector<double> cs = cmd.c.empty() ? std::vector<double>{1.0, 0.7071067811865476} : cmd.c;
    const Index depth = cmd.depth.value_or(30);
    params["c"] = cs;
    params["depth"] = depth;
    const ThetaReport r = check_bf_via_theta(load_function(cmd, params), cs, depth);
    return Outcome{exit_code(r.verdict), {{"theta", to_json(r)}}};
}

Outcome run_selfdec(const Command& cmd, Json& params) {
    const std::vector<double> cs = cmd.c.empty() ? std::vector<double>{0.25, 0.5, 0.75, 0.9} : cmd.c;
    const Index depth = cmd.depth.value_or(30);
    SdOptions opts;
    if (cmd.tol) opts.minimality_tol = *cmd.tol;
    params["c"] = cs;
    params["depth"] = depth;
    params["tol"] = opts.minimality_tol;
    const SdReport r = check_selfdecomposable(load_function(cmd, params), cs, depth, opts);
    return Outcome{exit_code(r.verdict), {{"selfdecomposable", to_json(r)}}};
}

Outcome run_egf(const Command& cmd, Json& params) {
    const Kind kind = parse_kind(cmd.kind.value_or("ca"));
    params["kind"] = to_string(kind);
    InversionOptions opts = inversion_options(cmd, params);
    opts.reject_unrepresentable = false;
    std::vector<double> ts = cmd.at;
    if (ts.empty())
        for (int i = 0; i <= 10; ++i) ts.push_back(i / 10.0);
    params["at"] = ts;
    const AnySequence seq = load_sequence(cmd, params);
    return std::visit(
        [&](const auto& a) {
            Outcome o;
            EgfCheck e;
            if (kind == Kind::cm) {
                const auto fit = invert_cm(a, opts);
                e = egf_validate_cm(a, fit, ts);
                o.result["fit"] = to_json(fit.measure);
                o.result["report"] = to_json(fit.report);
            } else {
                const auto fit = invert_ca(a, opts);
                e = egf_validate(a, fit.triplet, ts);
                o.result["fit"] = to_json(fit.triplet);
                o.result["report"] = to_json(fit.report);
            }
            o.result["egf"] = to_json(e);
            o.code = e.ok ? exit_pass : exit_fail;
            return o;
        },
        seq);
}

Outcome route(const Command& cmd, Json& params) {
    const std::string& n = cmd.name;
    if (n == "certify") return run_certify(cmd, params);
    if (n == "minimal") return run_minimal(cmd, params);
    if (n == "invert") return run_invert(cmd, params);
    if (n == "evaluate") return run_evaluate(cmd, params);
    if (n == "extend") return run_extend(cmd, params);
    if (n == "newton") return run_newton(cmd, params);
    if (n == "webster") return run_webster(cmd, params);
    if (n == "operator") return run_operator(cmd, params);
    if (n == "decompose") return run_decompose(cmd, params);
    if (n == "lattice") return run_lattice(cmd, params);
    if (n == "subaffine") return run_subaffine(cmd, params);
    if (n == "bftheta") return run_bftheta(cmd, params);
    if (n == "selfdec") return run_selfdec(cmd, params);
    if (n == "egf") return run_egf(cmd, params);
    throw ParseError("unknown subcommand '" + n + "'");
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream s;
    s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

const char* verdict_name(int code) {
    switch (code) {
        case exit_pass: return "pass";
        case exit_fail: return "fail";
        default: return "inconclusive";
    }
}

}  // namespace

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::pass: return exit_pass;
        case Verdict::fail: return exit_fail;
        case Verdict::inconclusive: return exit_inconclusive;
    }
    return exit_usage;
}

double parse_real_text(const std::string& text, const std::string& what) {
    if (auto r = try_parse_rational(text)) return to_double(*r);
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(what + ": not a number: '" + text + "'");
}

FunctionHandle resolve_builtin(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        try {
            return builtin(spec);
        } catch (const std::invalid_argument&) {
            std::string names;
            for (const auto& b : builtin_names()) names += " " + b;
            throw ParseError("--builtin: unknown function '" + spec + "'; known:" + names +
                             ", constant:<c>, exp-of-neg:<name>");
        }
    }
    const std::string head = spec.substr(0, colon), tail = spec.substr(colon + 1);
    if (head == "constant") return constant_function(parse_real_text(tail, "--builtin constant"));
    if (head == "exp-of-neg") return exp_of_neg(resolve_builtin(tail));
    throw ParseError("--builtin: unknown form '" + head + "'");
}

DispatchResult dispatch(const Command& cmd) {
    DispatchResult r;
    Json params = Json::object();
    Outcome o;
    try {
        o = route(cmd, params);
    } catch (const CertificationFailed& e) {
        o = Outcome{exit_fail, {{"certificate", to_json(e.certificate())}, {"error", e.what()}}};
    } catch (const NotRepresentable& e) {
        o = Outcome{exit_inconclusive, {{"error", e.what()}, {"residual", e.residual()}}};
    } catch (const BudgetExceeded& e) {
        o = Outcome{exit_inconclusive, {{"error", e.what()}}};
    } catch (const std::exception& e) {
        r.code = exit_usage;
        r.message = e.what();
        return r;
    }
    r.code = o.code;
    r.report = {{"command", cmd.which ? cmd.name + " " + *cmd.which : cmd.name},
                {"parameters", params},
                {"verdict", verdict_name(o.code)},
                {"exit_code", o.code},
                {"result", o.result}};
    if (cmd.meta) r.report["meta"] = {{"tool", "cmtk"}, {"version", kVersion}, {"timestamp", timestamp()}};
    return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Completely monotone and Bernstein function toolkit", "cmtk"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Command cmd;
    std::vector<std::string> c_text, at_text, alpha_text;
    std::optional<std::string> mode_text;

    auto sub = [&](const std::string& name, const std::string& about) {
        CLI::App* s = app.add_subcommand(name, about);
        s->add_flag("--no-meta", [&](std::int64_t) { cmd.meta = false; }, "omit tool version and timestamp");
        s->add_option("--out", cmd.out, "write the JSON report to this file");
        return s;
    };
    auto files = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("input", cmd.inputs, "input file");
        if (required) o->required();
    };
    auto depth = [&](CLI::App* s) { s->add_option("--depth", cmd.depth, "certification depth")->check(CLI::NonNegativeNumber); };
    auto tol = [&](CLI::App* s, const std::string& what) { s->add_option("--tol", cmd.tol, what)->check(CLI::PositiveNumber); };
    auto grid = [&](CLI::App* s) { s->add_option("--grid", cmd.grid, "grid size M of {0, 1/M, ..., 1}")->check(CLI::PositiveNumber); };
    auto kind = [&](CLI::App* s) { s->add_option("--kind", cmd.kind, "cm or ca")->check(CLI::IsMember({"cm", "ca"})); };
    auto mode = [&](CLI::App* s) { s->add_option("--mode", mode_text, "exact or float")->check(CLI::IsMember({"exact", "float"})); };
    auto fn = [&](CLI::App* s) {
        s->add_option("--builtin", cmd.builtin, "built-in function, constant:<c> or exp-of-neg:<name>");
        files(s, false);
    };
    auto cs = [&](CLI::App* s, const std::string& what) { s->add_option("--c", c_text, what)->delimiter(','); };
    auto at = [&](CLI::App* s, const std::string& what) { s->add_option("--at", at_text, what)->delimiter(','); };
    auto which = [&](CLI::App* s, std::vector<std::string> options) {
        s->add_option("which", cmd.which, "variant")->required()->check(CLI::IsMember(options));
    };

    CLI::App* s = sub("certify", "certify a sequence CM or CA");
    kind(s), depth(s), mode(s), files(s, true);
    s = sub("minimal", "estimate the atom at u = 0");
    kind(s), depth(s), tol(s, "minimality tolerance"), mode(s), files(s, true);
    s = sub("invert", "Hausdorff moment inversion (cm) or CA triplet fit (ca)");
    which(s, {"cm", "ca"}), grid(s), tol(s, "KKT tolerance"), mode(s), files(s, true);
    s = sub("evaluate", "evaluate a measure or triplet JSON file");
    at(s, "lambda values"), files(s, true);
    s = sub("extend", "reconstruct the interpolant of integer samples");
    kind(s), depth(s), grid(s), tol(s, "KKT tolerance"), mode(s), at(s, "lambda values"), files(s, true);
    s = sub("newton", "Gregory-Newton series: fit coefficients or evaluate");
    which(s, {"fit", "eval"}), mode(s), at(s, "real z values");
    s->add_option("--n", cmd.n, "number of terms")->check(CLI::PositiveNumber);
    files(s, true);
    s = sub("webster", "solve f(x+1) = g(x) f(x), f(1) = 1");
    fn(s), at(s, "x values");
    s->add_option("--n", cmd.n, "product truncation N")->check(CLI::PositiveNumber);
    s->add_flag("--unit-limit", cmd.unit_limit, "g tends to 1; use the simpler product");
    s = sub("operator", "apply sigma, tau, delta, theta or rho");
    fn(s), cs(s, "operator parameter"), at(s, "points");
    s->add_option("--op", cmd.op, "sigma, tau, delta, theta or rho")->required();
    s->add_option("--n", cmd.n, "iterate count")->check(CLI::NonNegativeNumber);
    s = sub("decompose", "limit decomposition of a CM (cm) or Bernstein (bf) function");
    which(s, {"cm", "bf"}), fn(s), cs(s, "step c"), at(s, "grid");
    s->add_option("--n", cmd.n, "n_max")->check(CLI::PositiveNumber);
    s = sub("lattice", "certify a function on lattices alpha N");
    kind(s), depth(s), tol(s, "minimality tolerance"), fn(s);
    s->add_option("--alpha", alpha_text, "lattice spacings")->delimiter(',');
    s = sub("subaffine", "check sup |Phi(x + c) - Phi(x)| <= bound on a grid");
    fn(s), cs(s, "shift c"), at(s, "grid");
    s->add_option("--bound", cmd.bound, "bound M")->required();
    s = sub("bftheta", "Bernstein membership via theta_c");
    fn(s), cs(s, "c values"), depth(s);
    s = sub("selfdec", "self-decomposability tests");
    fn(s), cs(s, "c values in (0, 1)"), depth(s), tol(s, "minimality tolerance");
    s = sub("egf", "exponential generating function identity");
    kind(s), grid(s), tol(s, "KKT tolerance"), mode(s), at(s, "t values in [0, 1]"), files(s, true);

    try {
        app.parse(argc, argv);
        for (const auto& t : c_text) cmd.c.push_back(parse_real_text(t, "--c"));
        for (const auto& t : at_text) cmd.at.push_back(parse_real_text(t, "--at"));
        for (const auto& t : alpha_text) cmd.alpha.push_back(parse_real_text(t, "--alpha"));
        if (mode_text) cmd.mode = *mode_text == "exact" ? Mode::exact : Mode::floating;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_pass;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "cmtk: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "cmtk: " << e.what() << "\n";
        return exit_usage;
    }
    for (CLI::App* chosen : app.get_subcommands()) cmd.name = chosen->get_name();

    const DispatchResult r = dispatch(cmd);
    if (r.code == exit_usage) {
        err << "cmtk " << cmd.name << ": " << r.message << "\n";
        return exit_usage;
    }
    const std::string text = r.report.dump(2) + "\n";
    if (cmd.out) {
        std::ofstream f(*cmd.out);
        if (!f || !(f << text)) {
            err << "cmtk: cannot write '" << *cmd.out << "'\n";
            return exit_usage;
        }
    } else {
        out << text;
    }
    return r.code;
}

}  // namespace cmtk
