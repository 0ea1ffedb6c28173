// Command-line front end: local fractional derivatives, the alpha-metric,
// Christoffel/Riemann components, flatness scans, geodesics and the local
// isometry. Reports are JSON with deterministic key order and 17-significant-
// digit floats; paths are CSV.
//
// Exit codes: 0 success, 1 usage/parse error, 2 numeric/domain error,
// 3 flatness-scan failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraccurv/fracderiv.hpp"
#include "fraccurv/geometry.hpp"
#include "fraccurv/mittag_leffler.hpp"
#include "fraccurv/report.hpp"
#include "fraccurv/spec_parse.hpp"

using namespace fraccurv;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string output = "json";
    double tol = 1.0e-9;
    std::string mode = "closed-form";
    std::string config_path;
    json config;  // flag-name -> value, flags override
};

RiemannMode riemann_mode(const GlobalOpts& g) {
    if (g.mode == "closed-form") return RiemannMode::ClosedFormJets;
    if (g.mode == "finite-difference") return RiemannMode::FiniteDifference;
    throw CLI::ValidationError("--mode must be closed-form or finite-difference");
}

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError("bad number '" + item + "' in list");
        }
    }
    if (out.empty()) throw CLI::ValidationError("empty number list");
    return out;
}

// "lo:hi:count" per-axis grid spec, one spec applied to every axis.
std::vector<double> parse_axis_spec(const std::string& s) {
    double lo, hi;
    int count;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3)
        throw CLI::ValidationError("grid spec must be lo:hi:count");
    return uniform_axis(lo, hi, count);
}

json load_metric_json(const std::string& spec) {
    std::string text = spec;
    if (!spec.empty() && spec[0] != '{') {
        std::ifstream in(spec);
        if (!in) throw std::runtime_error("cannot open metric file: " + spec);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return json::parse(text);
}

void emit(const GlobalOpts& g, const std::string& json_report, double pretty_value) {
    if (g.output == "pretty")
        std::printf("%.17g\n", pretty_value);
    else
        std::printf("%s\n", json_report.c_str());
}

// Pull a value from the config file for an option the user did not pass.
template <class T>
void merge_config(const GlobalOpts& g, const CLI::App* cmd, const std::string& flag, T& var) {
    const std::string key = flag.substr(2);
    if (!g.config.contains(key)) return;
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt && opt->count() > 0) return;
    var = g.config.at(key).get<T>();
}

int cmd_ml(const GlobalOpts& g, const MLParams& mp, double z, bool use_h) {
    const double v = use_h ? h_function(mp, z) : ml_truncated(mp, z);
    JsonWriter w;
    w.begin_object();
    w.field("value", v);
    w.end_object();
    emit(g, w.str(), v);
    return 0;
}

int cmd_deriv(const GlobalOpts& g, const std::string& op_spec, double alpha,
              const std::string& f_text, double t, bool limit_at_zero, bool check_limit_def) {
    const LocalFractionalOperator op = parse_operator_spec(op_spec, alpha);
    const ScalarFunction f = ScalarFunction::from_text(f_text);
    JsonWriter w;
    w.begin_object();
    if (limit_at_zero) {
        const double v = value_at_zero(op, f);
        w.field("value_at_zero", v);
        w.end_object();
        emit(g, w.str(), v);
        return 0;
    }
    const double v = apply(op, f, t);
    w.field("value", v);
    if (check_limit_def) {
        if (op.kind != OperatorKind::TruncatedV || !op.ml)
            throw InvalidParameter("--check-limit-def requires a truncated-v operator");
        const LimitResult lim = apply_limit_def(*op.ml, alpha, f, t);
        w.field("limit_def_value", lim.value);
        w.field("difference", std::fabs(v - lim.value));
    }
    w.end_object();
    emit(g, w.str(), v);
    return 0;
}

int cmd_christoffel(const GlobalOpts& g, const std::string& metric_spec,
                    const std::string& point_spec) {
    const MetricVariant m = parse_metric_spec(load_metric_json(metric_spec));
    const Point x = parse_csv_doubles(point_spec);
    const ChristoffelValues c = std::visit(
        [&](const auto& mm) -> ChristoffelValues {
            using M = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<M, DiagonalMetric>)
                return christoffel_diagonal(mm, x);
            else
                return christoffel_general(mm, x);
        },
        m);
    emit(g, christoffel_report(c), 0.0);
    return 0;
}

int cmd_riemann(const GlobalOpts& g, const std::string& metric_spec,
                const std::string& point_spec) {
    const MetricVariant m = parse_metric_spec(load_metric_json(metric_spec));
    const Point x = parse_csv_doubles(point_spec);
    const RiemannValues r = std::visit(
        [&](const auto& mm) { return riemann(mm, x, riemann_mode(g)); }, m);
    emit(g, riemann_report(r, g.tol), r.max_abs());
    return 0;
}

int cmd_flatness(const GlobalOpts& g, const std::string& metric_spec,
                 const std::string& grid_spec, const std::string& sweep_spec) {
    json mj = load_metric_json(metric_spec);
    auto scan_one = [&](double alpha_override, bool use_override) {
        json mcopy = mj;
        if (use_override) mcopy["alpha"] = alpha_override;
        const MetricVariant m = parse_metric_spec(mcopy);
        return std::visit(
            [&](const auto& mm) {
                const std::vector<std::vector<double>> axes(mm.n, parse_axis_spec(grid_spec));
                return flatness_scan(mm, axes, g.tol, riemann_mode(g));
            },
            m);
    };

    if (sweep_spec.empty()) {
        const FlatnessReport rep = scan_one(0.0, false);
        emit(g, flatness_report_json(rep), rep.max_abs_R);
        return rep.pass ? 0 : 3;
    }

    double a0, a1, da;
    if (std::sscanf(sweep_spec.c_str(), "%lf:%lf:%lf", &a0, &a1, &da) != 3 || !(da > 0.0))
        throw CLI::ValidationError("--alpha-sweep must be start:stop:step");
    JsonWriter w;
    w.begin_object();
    w.begin_array("sweep");
    bool all_pass = true;
    double worst = 0.0;
    for (double a = a0; a <= a1 + 0.5 * da; a += da) {
        const double alpha = std::min(a, 1.0);
        const FlatnessReport rep = scan_one(alpha, true);
        all_pass = all_pass && rep.pass;
        worst = std::max(worst, rep.max_abs_R);
        w.begin_object();
        w.field("alpha", alpha);
        w.field("max_abs_R", rep.max_abs_R);
        w.field("argmax_point", rep.argmax_point);
        w.field("pass", rep.pass);
        w.end_object();
    }
    w.end_array();
    w.field("pass", all_pass);
    w.end_object();
    emit(g, w.str(), worst);
    return all_pass ? 0 : 3;
}

int cmd_geodesic(const GlobalOpts&, const std::string& metric_spec, const std::string& x0_spec,
                 const std::string& v0_spec, double T, int steps) {
    const MetricVariant m = parse_metric_spec(load_metric_json(metric_spec));
    const Point x0 = parse_csv_doubles(x0_spec);
    const std::vector<double> v0 = parse_csv_doubles(v0_spec);
    const std::vector<Point> path = std::visit(
        [&](const auto& mm) { return geodesic_integrate(mm, x0, v0, T, steps); }, m);
    // CSV path regardless of --output json: a path is a per-point dump.
    std::printf("t");
    for (std::size_t i = 0; i < x0.size(); ++i) std::printf(",x%zu", i + 1);
    std::printf("\n");
    for (std::size_t s = 0; s < path.size(); ++s) {
        std::printf("%.17g", T * static_cast<double>(s) / steps);
        for (double c : path[s]) std::printf(",%.17g", c);
        std::printf("\n");
    }
    return 0;
}

int cmd_isometry(const GlobalOpts& g, const std::string& metric_spec,
                 const std::string& base_spec, const std::string& x_spec) {
    const MetricVariant m = parse_metric_spec(load_metric_json(metric_spec));
    const auto* dm = std::get_if<DiagonalMetric>(&m);
    if (!dm) throw InvalidParameter("isometry map requires a diagonal metric");
    const Point base = parse_csv_doubles(base_spec);
    const Point x = parse_csv_doubles(x_spec);
    const Point mapped = isometry_map(*dm, base, x);
    JsonWriter w;
    w.begin_object();
    w.field("mapped", mapped);
    w.end_object();
    emit(g, w.str(), mapped.empty() ? 0.0 : mapped[0]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local fractional derivatives and the flat alpha-metric on R_+^n"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--output", g.output, "json|csv|pretty")->capture_default_str();
    app.add_option("--tol", g.tol, "numeric tolerance")->capture_default_str();
    app.add_option("--mode", g.mode, "closed-form|finite-difference")->capture_default_str();
    app.add_option("--config", g.config_path, "JSON config file mirroring flag names");

    MLParams mp;
    double ml_z = 0.0;
    bool ml_h = false;
    CLI::App* ml = app.add_subcommand("ml", "evaluate the truncated Mittag-Leffler series");
    ml->add_option("--gamma", mp.gamma)->capture_default_str();
    ml->add_option("--beta", mp.beta)->capture_default_str();
    ml->add_option("--rho", mp.rho)->capture_default_str();
    ml->add_option("--delta", mp.delta)->capture_default_str();
    ml->add_option("--p", mp.p)->capture_default_str();
    ml->add_option("--q", mp.q)->capture_default_str();
    ml->add_option("--trunc", mp.trunc)->capture_default_str();
    ml->add_option("--z", ml_z)->capture_default_str();
    ml->add_flag("--h-function", ml_h, "evaluate Gamma(beta) * series instead");

    std::string op_spec = "conformable", f_text = "t", point_spec = "1";
    double alpha = 1.0, t_value = 1.0;
    bool limit_at_zero = false, check_limit_def = false;
    CLI::App* deriv = app.add_subcommand("deriv", "apply a local fractional derivative");
    deriv->add_option("--op", op_spec, "operator spec")->capture_default_str();
    deriv->add_option("--alpha", alpha)->capture_default_str();
    deriv->add_option("--f", f_text, "scalar function of t")->capture_default_str();
    deriv->add_option("--t", t_value)->capture_default_str();
    deriv->add_flag("--limit-at-zero", limit_at_zero, "value at 0 via the right limit");
    deriv->add_flag("--check-limit-def", check_limit_def,
                    "also evaluate the limit definition (truncated-v only)");

    std::string metric_spec, grid_spec = "0.5:5:5", sweep_spec;
    std::string x0_spec = "1,1", v0_spec = "1,0", base_spec = "1,1", x_spec = "2,2";
    double duration = 1.0;
    int steps = 1000;

    CLI::App* chris = app.add_subcommand("christoffel", "Christoffel symbols at a point");
    chris->add_option("--metric", metric_spec, "metric JSON (inline or file)")->required();
    chris->add_option("--point", point_spec)->capture_default_str();

    CLI::App* riem = app.add_subcommand("riemann", "Riemann components at a point");
    riem->add_option("--metric", metric_spec, "metric JSON (inline or file)")->required();
    riem->add_option("--point", point_spec)->capture_default_str();

    CLI::App* flat = app.add_subcommand("flatness", "max |R| over a grid");
    flat->add_option("--metric", metric_spec, "metric JSON (inline or file)")->required();
    flat->add_option("--grid", grid_spec, "lo:hi:count per axis")->capture_default_str();
    flat->add_option("--alpha-sweep", sweep_spec, "start:stop:step over alpha");

    CLI::App* geo = app.add_subcommand("geodesic", "integrate the geodesic equation (CSV)");
    geo->add_option("--metric", metric_spec, "metric JSON (inline or file)")->required();
    geo->add_option("--x0", x0_spec)->capture_default_str();
    geo->add_option("--v0", v0_spec)->capture_default_str();
    geo->add_option("--T", duration)->capture_default_str();
    geo->add_option("--steps", steps)->capture_default_str();

    CLI::App* iso = app.add_subcommand("isometry", "map points through the local isometry");
    iso->add_option("--metric", metric_spec, "metric JSON (inline or file)")->required();
    iso->add_option("--base", base_spec)->capture_default_str();
    iso->add_option("--x", x_spec)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        if (!g.config_path.empty()) {
            std::ifstream in(g.config_path);
            if (!in) {
                std::fprintf(stderr, "error: cannot open config file %s\n", g.config_path.c_str());
                return 1;
            }
            g.config = json::parse(in);
            merge_config(g, &app, "--output", g.output);
            merge_config(g, &app, "--tol", g.tol);
            merge_config(g, &app, "--mode", g.mode);
        }

        const CLI::App* sub = app.get_subcommands().front();
        if (!g.config.is_null()) {
            merge_config(g, sub, "--metric", metric_spec);
            merge_config(g, sub, "--grid", grid_spec);
            merge_config(g, sub, "--alpha", alpha);
            merge_config(g, sub, "--op", op_spec);
            merge_config(g, sub, "--f", f_text);
            merge_config(g, sub, "--t", t_value);
            merge_config(g, sub, "--point", point_spec);
            merge_config(g, sub, "--z", ml_z);
            merge_config(g, sub, "--gamma", mp.gamma);
            merge_config(g, sub, "--beta", mp.beta);
            merge_config(g, sub, "--rho", mp.rho);
            merge_config(g, sub, "--delta", mp.delta);
            merge_config(g, sub, "--p", mp.p);
            merge_config(g, sub, "--q", mp.q);
            merge_config(g, sub, "--trunc", mp.trunc);
        }

        if (ml->parsed()) return cmd_ml(g, mp, ml_z, ml_h);
        if (deriv->parsed())
            return cmd_deriv(g, op_spec, alpha, f_text, t_value, limit_at_zero, check_limit_def);
        if (chris->parsed()) return cmd_christoffel(g, metric_spec, point_spec);
        if (riem->parsed()) return cmd_riemann(g, metric_spec, point_spec);
        if (flat->parsed()) return cmd_flatness(g, metric_spec, grid_spec, sweep_spec);
        if (geo->parsed()) return cmd_geodesic(g, metric_spec, x0_spec, v0_spec, duration, steps);
        if (iso->parsed()) return cmd_isometry(g, metric_spec, base_spec, x_spec);
        std::fprintf(stderr, "error: no subcommand\n");
        return 1;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "json error: %s\n", e.what());
        return 1;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const DomainExit& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const NonConvergence& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const UnboundParameter& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
