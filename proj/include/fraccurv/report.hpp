#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "fraccurv/geometry.hpp"

namespace fraccurv {

// Minimal JSON emitter with deterministic output: keys appear in insertion
// order and every double is printed with 17 significant digits, so identical
// inputs give byte-identical reports.
class JsonWriter {
public:
    static std::string num(double x) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }

    JsonWriter& begin_object() {
        open("{");
        return *this;
    }
    JsonWriter& end_object() {
        close("}");
        return *this;
    }
    JsonWriter& begin_array(const std::string& key = {}) {
        if (!key.empty()) write_key(key);
        open("[");
        return *this;
    }
    JsonWriter& end_array() {
        close("]");
        return *this;
    }

    JsonWriter& field(const std::string& key, double v) {
        write_key(key);
        out_ += num(v);
        return *this;
    }
    JsonWriter& field(const std::string& key, int v) {
        write_key(key);
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& field(const std::string& key, bool v) {
        write_key(key);
        out_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& field(const std::string& key, const std::string& v) {
        write_key(key);
        out_ += '"';
        for (char c : v) {
            if (c == '"' || c == '\\') out_ += '\\';
            out_ += c;
        }
        out_ += '"';
        return *this;
    }
    JsonWriter& field(const std::string& key, const std::vector<double>& v) {
        begin_array(key);
        for (double x : v) element(x);
        return end_array();
    }

    JsonWriter& element(double v) {
        sep();
        out_ += num(v);
        return *this;
    }

    // Raw nested value under a key (caller supplies valid JSON text).
    JsonWriter& key(const std::string& k) {
        write_key(k);
        return *this;
    }

    std::string str() const { return out_; }

private:
    void sep() {
        if (!out_.empty()) {
            const char last = out_.back();
            if (last != '{' && last != '[' && last != ':') out_ += ',';
        }
    }
    void open(const char* b) {
        sep();
        out_ += b;
    }
    void close(const char* b) { out_ += b; }
    void write_key(const std::string& k) {
        sep();
        out_ += '"';
        out_ += k;
        out_ += "\":";
    }

    std::string out_;
};

inline std::string riemann_report(const RiemannValues& r, double tol) {
    JsonWriter w;
    w.begin_object();
    w.field("point", r.point);
    w.field("max_abs_R", r.max_abs());
    w.field("pass", r.max_abs() <= tol);
    const int n = r.values.n;
    w.begin_array("nonzero");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    if (std::fabs(r.values(i, j, k, l)) > tol) {
                        w.begin_object();
                        w.field("i", i + 1).field("j", j + 1).field("k", k + 1).field("l", l + 1);
                        w.field("R", r.values(i, j, k, l));
                        w.end_object();
                    }
    w.end_array();
    w.end_object();
    return w.str();
}

inline std::string christoffel_report(const ChristoffelValues& c) {
    JsonWriter w;
    w.begin_object();
    w.field("point", c.point);
    const int n = c.values.n;
    w.begin_array("nonzero");
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (c.values(k, i, j) != 0.0) {
                    w.begin_object();
                    w.field("k", k + 1).field("i", i + 1).field("j", j + 1);
                    w.field("Gamma", c.values(k, i, j));
                    w.end_object();
                }
    w.end_array();
    w.end_object();
    return w.str();
}

inline std::string flatness_report_json(const FlatnessReport& rep) {
    JsonWriter w;
    w.begin_object();
    w.field("max_abs_R", rep.max_abs_R);
    w.field("argmax_point", rep.argmax_point);
    w.field("pass", rep.pass);
    w.field("tol", rep.tol);
    w.field("points_scanned", static_cast<int>(rep.points_scanned));
    w.end_object();
    return w.str();
}

}  // namespace fraccurv
