#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fraccurv/common.hpp"
#include "fraccurv/fracderiv.hpp"
#include "fraccurv/geometry.hpp"

namespace fraccurv {

using MetricVariant = std::variant<DiagonalMetric, GeneralMetric>;

// Metric specification JSON:
//   {"type":"diagonal","n":2,"alpha":0.5,"coeff":["t^(1-a)","t^(1-a)"],
//    "params":{},"domain":[0,1e6]}
//   {"type":"general","n":2,"components":[["1","0"],["0","sin(x1)^2"]]}
inline MetricVariant parse_metric_spec(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw InvalidParameter("metric spec must be an object with a \"type\" field");
    const std::string type = j.at("type").get<std::string>();
    const int n = j.at("n").get<int>();
    if (type == "diagonal") {
        const double alpha = j.value("alpha", 1.0);
        std::map<std::string, double> params{{"a", alpha}};
        if (j.contains("params"))
            for (auto& [k, v] : j.at("params").items()) params[k] = v.get<double>();
        double lo = 0.0, hi = 1.0e6;
        if (j.contains("domain")) {
            lo = j.at("domain").at(0).get<double>();
            hi = j.at("domain").at(1).get<double>();
        }
        std::vector<CoefficientFunction> cs;
        for (const auto& c : j.at("coeff"))
            cs.emplace_back(alpha, Expr::parse(c.get<std::string>()), params, lo, hi);
        return DiagonalMetric(n, std::move(cs));
    }
    if (type == "general") {
        std::set<std::string> allowed;
        for (int i = 1; i <= n; ++i) allowed.insert("x" + std::to_string(i));
        std::vector<std::vector<Expr>> comp;
        for (const auto& row : j.at("components")) {
            std::vector<Expr> r;
            for (const auto& c : row) {
                Expr e = Expr::parse(c.get<std::string>());
                e.check_idents(allowed);
                r.push_back(std::move(e));
            }
            comp.push_back(std::move(r));
        }
        return GeneralMetric(n, std::move(comp));
    }
    throw InvalidParameter("unknown metric type: " + type);
}

// Operator specification strings:
//   conformable | alternative | truncated-m:beta=<v>
//   | truncated-v:gamma=<v>,beta=<v>,rho=<v>,delta=<v>,p=<v>,q=<v>,trunc=<n>
//   | custom:<expression>
inline LocalFractionalOperator parse_operator_spec(const std::string& spec, double alpha,
                                                   double lo = 0.0, double hi = 1.0e6) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string tail = (colon == std::string::npos) ? "" : spec.substr(colon + 1);

    auto parse_kv = [&]() {
        std::map<std::string, double> kv;
        std::size_t pos = 0;
        while (pos < tail.size()) {
            auto comma = tail.find(',', pos);
            if (comma == std::string::npos) comma = tail.size();
            const std::string item = tail.substr(pos, comma - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw InvalidParameter("operator spec: expected key=value, got '" + item + "'");
            try {
                kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw InvalidParameter("operator spec: bad number in '" + item + "'");
            }
            pos = comma + 1;
        }
        return kv;
    };

    if (head == "conformable")
        return make_operator(OperatorKind::Conformable, alpha, {}, std::nullopt, lo, hi);
    if (head == "alternative")
        return make_operator(OperatorKind::Alternative, alpha, {}, std::nullopt, lo, hi);
    if (head == "truncated-m")
        return make_operator(OperatorKind::TruncatedM, alpha, parse_kv(), std::nullopt, lo, hi);
    if (head == "truncated-v") {
        const auto kv = parse_kv();
        auto need = [&](const char* k) {
            auto it = kv.find(k);
            if (it == kv.end())
                throw InvalidParameter(std::string("truncated-v spec missing '") + k + "'");
            return it->second;
        };
        MLParams mp;
        mp.gamma = need("gamma");
        mp.beta = need("beta");
        mp.rho = need("rho");
        mp.delta = need("delta");
        mp.p = need("p");
        mp.q = need("q");
        mp.trunc = static_cast<int>(need("trunc"));
        return make_operator(OperatorKind::TruncatedV, alpha, {}, mp, lo, hi);
    }
    if (head == "custom") {
        if (tail.empty()) throw InvalidParameter("custom operator spec needs an expression");
        return make_custom_operator(
            CoefficientFunction(alpha, Expr::parse(tail), {{"a", alpha}}, lo, hi));
    }
    throw InvalidParameter("unknown operator kind: " + head);
}

}  // namespace fraccurv
