#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fraccurv/common.hpp"
#include "fraccurv/expr.hpp"
#include "fraccurv/fracderiv.hpp"
#include "fraccurv/jet.hpp"
#include "fraccurv/linalg.hpp"
#include "fraccurv/quadrature.hpp"

namespace fraccurv {

using Point = std::vector<double>;

// Dense rank-3 / rank-4 component arrays, all indices 0-based.
struct Tensor3 {
    int n = 0;
    std::vector<double> a;
    explicit Tensor3(int dim = 0) : n(dim), a(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}
    double& operator()(int i, int j, int k) {
        return a[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
    double operator()(int i, int j, int k) const {
        return a[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
};

struct Tensor4 {
    int n = 0;
    std::vector<double> a;
    explicit Tensor4(int dim = 0)
        : n(dim), a(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}
    double& operator()(int i, int j, int k, int l) {
        return a[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return a[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
};

// Gamma^k_ij at a point; values(k, i, j), symmetric in (i, j).
struct ChristoffelValues {
    Point point;
    Tensor3 values;
};

// R^i_jkl at a point, indexed as R(partial_k, partial_l) partial_j
// = sum_i R^i_jkl partial_i; values(i, j, k, l).
struct RiemannValues {
    Point point;
    Tensor4 values;

    double max_abs() const {
        double m = 0.0;
        for (double x : values.a) m = std::max(m, std::fabs(x));
        return m;
    }
};

enum class RiemannMode { ClosedFormJets, FiniteDifference };

// The alpha-metric on a box in R_+^n: g_ij = delta_ij / c_i(x_i)^2.
// One coefficient function per axis, all sharing the same alpha.
struct DiagonalMetric {
    int n;
    std::vector<CoefficientFunction> coeffs;

    DiagonalMetric(int dim, std::vector<CoefficientFunction> cs)
        : n(dim), coeffs(std::move(cs)) {
        if (n < 2) throw InvalidParameter("metric dimension must be >= 2");
        if (static_cast<int>(coeffs.size()) == 1)
            coeffs.resize(n, coeffs[0]);
        if (static_cast<int>(coeffs.size()) != n)
            throw InvalidParameter("need one coefficient function per axis");
    }

    void check_point(const Point& x) const {
        if (static_cast<int>(x.size()) != n)
            throw InvalidParameter("point dimension mismatch");
        for (int i = 0; i < n; ++i)
            if (!coeffs[i].contains(x[i]))
                throw DomainError("coordinate " + std::to_string(i + 1) + " outside domain");
    }

    // Per-axis coefficient jets; rejects near-degenerate points where the
    // metric blows up.
    std::vector<Jet2> coeff_jets(const Point& x) const {
        check_point(x);
        std::vector<Jet2> js;
        js.reserve(n);
        for (int i = 0; i < n; ++i) {
            Jet2 j = coeffs[i].jet(x[i]);
            if (j.v < 1.0e-12)
                throw DomainError("degenerate metric: coefficient below 1e-12 at axis "
                                  + std::to_string(i + 1));
            js.push_back(j);
        }
        return js;
    }
};

// An arbitrary symmetric metric field; components are expressions in the
// coordinates x1..xn, jet-evaluable to order 2 in every direction pair.
// Positive definiteness is checked at each queried point.
struct GeneralMetric {
    int n;
    std::vector<std::vector<Expr>> comp;  // upper triangle authoritative

    GeneralMetric(int dim, std::vector<std::vector<Expr>> components)
        : n(dim), comp(std::move(components)) {
        if (n < 2) throw InvalidParameter("metric dimension must be >= 2");
        if (static_cast<int>(comp.size()) != n)
            throw InvalidParameter("component matrix must be n x n");
        for (auto& row : comp)
            if (static_cast<int>(row.size()) != n)
                throw InvalidParameter("component matrix must be n x n");
        // Symmetry is structural: mirror the upper triangle.
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) comp[i][j] = comp[j][i];
    }

    std::string coord_name(int i) const { return "x" + std::to_string(i + 1); }

    // Component (i, j) as a bivariate jet in directions (u, w) = axes (du, dw).
    Jet22 comp_jet22(int i, int j, const Point& x, int du, int dw) const {
        std::map<std::string, Jet22> env;
        for (int k = 0; k < n; ++k) {
            Jet22 v(x[k]);
            if (k == du) v.du = 1.0;
            if (k == dw) v.dw = 1.0;
            env[coord_name(k)] = v;
        }
        return comp[i][j].eval(env);
    }

    double comp_value(int i, int j, const Point& x) const {
        return comp_jet22(i, j, x, -1, -1).v;
    }
};

// ---------------------------------------------------------------------------
// Metric components

inline std::pair<Mat, Mat> metric_at(const DiagonalMetric& m, const Point& x) {
    const auto cs = m.coeff_jets(x);
    Mat g(m.n), ginv(m.n);
    for (int i = 0; i < m.n; ++i) {
        const double c = cs[i].v;
        g(i, i) = 1.0 / (c * c);
        ginv(i, i) = c * c;
    }
    return {g, ginv};
}

inline std::pair<Mat, Mat> metric_at(const GeneralMetric& m, const Point& x) {
    if (static_cast<int>(x.size()) != m.n) throw InvalidParameter("point dimension mismatch");
    Mat g(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = i; j < m.n; ++j) g(i, j) = g(j, i) = m.comp_value(i, j, x);
    return {g, spd_inverse(g)};
}

// ---------------------------------------------------------------------------
// Christoffel symbols

namespace detail {

// Eq.-style assembly Gamma^k_ij = 1/2 sum_m g^{km} (d_i g_jm + d_j g_im - d_m g_ij)
// from the inverse metric and the first partials dg(k, i, j) = d_k g_ij.
inline Tensor3 christoffel_from_partials(const Mat& ginv, const Tensor3& dg) {
    const int n = ginv.n;
    Tensor3 G(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int m = 0; m < n; ++m)
                    s += ginv(k, m) * (dg(i, j, m) + dg(j, i, m) - dg(m, i, j));
                G(k, i, j) = G(k, j, i) = 0.5 * s;
            }
    return G;
}

// Metric data for the general route: g, dg(k,i,j) = d_k g_ij and
// d2g[(k,l)](i,j) = d_k d_l g_ij, harvested from bivariate jets.
struct MetricJets {
    Mat g;
    Tensor3 dg;
    std::vector<Mat> d2g;  // indexed k * n + l
};

inline MetricJets metric_jets(const GeneralMetric& m, const Point& x, bool second) {
    const int n = m.n;
    MetricJets out{Mat(n), Tensor3(n), {}};
    if (second) out.d2g.assign(static_cast<std::size_t>(n) * n, Mat(n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            // One bivariate jet per direction pair (u <= w) covers the value,
            // both first partials and all second partials of g_ij.
            for (int u = 0; u < n; ++u)
                for (int w = u; w < n; ++w) {
                    if (!second && !(u == w)) continue;
                    const Jet22 jv = m.comp_jet22(i, j, x, u, w);
                    out.g(i, j) = out.g(j, i) = jv.v;
                    out.dg(u, i, j) = out.dg(u, j, i) = jv.du;
                    out.dg(w, i, j) = out.dg(w, j, i) = jv.dw;
                    if (second) {
                        out.d2g[u * n + u](i, j) = out.d2g[u * n + u](j, i) = jv.duu;
                        out.d2g[w * n + w](i, j) = out.d2g[w * n + w](j, i) = jv.dww;
                        out.d2g[u * n + w](i, j) = out.d2g[u * n + w](j, i) = jv.duw;
                        out.d2g[w * n + u](i, j) = out.d2g[w * n + u](j, i) = jv.duw;
                    }
                }
        }
    return out;
}

inline MetricJets metric_jets(const DiagonalMetric& m, const Point& x, bool /*second*/) {
    const int n = m.n;
    const auto cs = m.coeff_jets(x);
    MetricJets out{Mat(n), Tensor3(n), {}};
    out.d2g.assign(static_cast<std::size_t>(n) * n, Mat(n));
    for (int i = 0; i < n; ++i) {
        const double c = cs[i].v, c1 = cs[i].d1, c2 = cs[i].d2;
        out.g(i, i) = 1.0 / (c * c);
        // d/dx_i (c^-2) = -2 c' c^-3 ; d2/dx_i2 = 6 c'^2 c^-4 - 2 c'' c^-3
        out.dg(i, i, i) = -2.0 * c1 / (c * c * c);
        out.d2g[i * n + i](i, i) = 6.0 * c1 * c1 / (c * c * c * c) - 2.0 * c2 / (c * c * c);
    }
    return out;
}

}  // namespace detail

// General-formula Christoffel symbols from metric partials (works for both
// metric kinds; for DiagonalMetric it deliberately routes through the dense
// formula as a cross-check of the closed form).
template <class Metric>
ChristoffelValues christoffel_general(const Metric& m, const Point& x) {
    const auto mj = detail::metric_jets(m, x, /*second=*/false);
    const Mat ginv = spd_inverse(mj.g);
    return {x, detail::christoffel_from_partials(ginv, mj.dg)};
}

// Closed form for the diagonal alpha-metric: Gamma^i_ii = -c_i'/c_i, every
// other component exactly zero.
inline ChristoffelValues christoffel_diagonal(const DiagonalMetric& m, const Point& x) {
    const auto cs = m.coeff_jets(x);
    Tensor3 G(m.n);
    for (int i = 0; i < m.n; ++i) G(i, i, i) = -cs[i].d1 / cs[i].v;
    return {x, G};
}

// ---------------------------------------------------------------------------
// Riemann curvature

namespace detail {

// R^i_jkl = d_l Gamma^i_kj - d_k Gamma^i_lj
//           + sum_m Gamma^i_lm Gamma^m_kj - sum_m Gamma^i_km Gamma^m_lj
// with dG(l, i, k, j) = d_l Gamma^i_kj.
inline Tensor4 riemann_from(const Tensor3& G, const Tensor4& dG) {
    const int n = G.n;
    Tensor4 R(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = dG(l, i, k, j) - dG(k, i, l, j);
                    for (int m = 0; m < n; ++m)
                        s += G(i, l, m) * G(m, k, j) - G(i, k, m) * G(m, l, j);
                    R(i, j, k, l) = s;
                }
    return R;
}

inline void closed_form_gamma(const DiagonalMetric& m, const Point& x, Tensor3& G,
                              Tensor4& dG) {
    const auto cs = m.coeff_jets(x);
    G = Tensor3(m.n);
    dG = Tensor4(m.n);
    for (int i = 0; i < m.n; ++i) {
        const double r = cs[i].d1 / cs[i].v;
        G(i, i, i) = -r;
        // d/dx_i (-c'/c) = -(c''/c - (c'/c)^2)
        dG(i, i, i, i) = -(cs[i].d2 / cs[i].v - r * r);
    }
}

inline void closed_form_gamma(const GeneralMetric& m, const Point& x, Tensor3& G,
                              Tensor4& dG) {
    const int n = m.n;
    const auto mj = metric_jets(m, x, /*second=*/true);
    const Mat ginv = spd_inverse(mj.g);
    G = christoffel_from_partials(ginv, mj.dg);
    // d_l g^{km} = - sum_{ab} g^{ka} (d_l g_ab) g^{bm}
    std::vector<Mat> dginv(n, Mat(n));
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int mm = 0; mm < n; ++mm) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        s -= ginv(k, a) * mj.dg(l, a, b) * ginv(b, mm);
                dginv[l](k, mm) = s;
            }
    dG = Tensor4(n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int mm = 0; mm < n; ++mm) {
                        const double bracket = mj.dg(i, j, mm) + mj.dg(j, i, mm) - mj.dg(mm, i, j);
                        const double dbracket = mj.d2g[l * n + i](j, mm)
                                                + mj.d2g[l * n + j](i, mm)
                                                - mj.d2g[l * n + mm](i, j);
                        s += dginv[l](k, mm) * bracket + ginv(k, mm) * dbracket;
                    }
                    dG(l, k, i, j) = 0.5 * s;
                }
}

}  // namespace detail

// Riemann components. ClosedFormJets differentiates the Christoffel symbols
// analytically through the jet machinery; FiniteDifference central-differences
// christoffel_general with step h and serves as the independent oracle.
template <class Metric>
RiemannValues riemann(const Metric& m, const Point& x,
                      RiemannMode mode = RiemannMode::ClosedFormJets, double h = 0.0) {
    if (mode == RiemannMode::ClosedFormJets) {
        Tensor3 G;
        Tensor4 dG;
        detail::closed_form_gamma(m, x, G, dG);
        return {x, detail::riemann_from(G, dG)};
    }
    const int n = static_cast<int>(x.size());
    const Tensor3 G = christoffel_general(m, x).values;
    Tensor4 dG(n);
    for (int l = 0; l < n; ++l) {
        const double step = (h > 0.0) ? h : 1.0e-4 * std::max(1.0, std::fabs(x[l]));
        Point xp = x, xm = x;
        xp[l] += step;
        xm[l] -= step;
        const Tensor3 Gp = christoffel_general(m, xp).values;
        const Tensor3 Gm = christoffel_general(m, xm).values;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    dG(l, k, i, j) = (Gp(k, i, j) - Gm(k, i, j)) / (2.0 * step);
    }
    return {x, detail::riemann_from(G, dG)};
}

// ---------------------------------------------------------------------------
// Flatness scan

struct FlatnessReport {
    double max_abs_R = 0.0;
    Point argmax_point;
    bool pass = false;
    double tol = 0.0;
    std::size_t points_scanned = 0;
};

// Max |R^i_jkl| over the cartesian grid, lexicographic iteration order,
// argmax ties broken by the lexicographically smallest grid index.
template <class Metric>
FlatnessReport flatness_scan(const Metric& m,
                             const std::vector<std::vector<double>>& axes, double tol,
                             RiemannMode mode = RiemannMode::ClosedFormJets) {
    if (static_cast<int>(axes.size()) != m.n)
        throw InvalidParameter("grid must supply one point list per axis");
    if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");
    FlatnessReport rep;
    rep.tol = tol;
    std::vector<std::size_t> idx(axes.size(), 0);
    Point x(axes.size());
    for (;;) {
        for (std::size_t i = 0; i < axes.size(); ++i) x[i] = axes[i][idx[i]];
        try {
            const double r = riemann(m, x, mode).max_abs();
            if (r > rep.max_abs_R) {
                rep.max_abs_R = r;
                rep.argmax_point = x;
            }
        } catch (const DomainError& e) {
            std::string where = "(";
            for (std::size_t i = 0; i < x.size(); ++i)
                where += (i ? ", " : "") + std::to_string(x[i]);
            throw DomainError(std::string(e.what()) + " at grid point " + where + ")");
        }
        ++rep.points_scanned;
        if (rep.argmax_point.empty()) rep.argmax_point = x;
        std::size_t d = axes.size();
        while (d > 0) {
            --d;
            if (++idx[d] < axes[d].size()) break;
            idx[d] = 0;
            if (d == 0) {
                rep.pass = rep.max_abs_R <= tol;
                return rep;
            }
        }
    }
}

inline std::vector<double> uniform_axis(double lo, double hi, int count) {
    if (count < 1 || !(lo < hi)) throw InvalidParameter("bad grid axis");
    std::vector<double> pts(count);
    if (count == 1) {
        pts[0] = 0.5 * (lo + hi);
        return pts;
    }
    for (int i = 0; i < count; ++i) pts[i] = lo + (hi - lo) * i / (count - 1);
    return pts;
}

// ---------------------------------------------------------------------------
// Local isometry and geodesics

// phi_i(x_i) = integral_{base_i}^{x_i} ds / c_i(s); the Jacobian of phi is
// diag(1/c_i), so phi pulls the Euclidean metric back to the alpha-metric.
inline Point isometry_map(const DiagonalMetric& m, const Point& base, const Point& x,
                          double abstol = 1.0e-10) {
    if (static_cast<int>(base.size()) != m.n || static_cast<int>(x.size()) != m.n)
        throw InvalidParameter("point dimension mismatch");
    Point out(m.n);
    for (int i = 0; i < m.n; ++i) {
        const auto& c = m.coeffs[i];
        auto f = [&c](double s) { return 1.0 / c.value(s); };
        double a = base[i];
        double b = x[i];
        double sign = 1.0;
        if (a > b) {
            std::swap(a, b);
            sign = -1.0;
        }
        // Split off a geometrically graded prefix when the lower endpoint sits
        // many orders of magnitude below the upper one; bisection alone cannot
        // resolve an integrable power singularity at such an endpoint.
        double acc = 0.0;
        while (a > 0.0 && b / a > 16.0) {
            const double split = a * 16.0;
            acc += integrate(f, a, split, abstol);
            a = split;
        }
        acc += integrate(f, a, b, abstol);
        out[i] = sign * acc;
    }
    return out;
}

// Fixed-step RK4 integration of the geodesic equation
//   x''^k + Gamma^k_ij x'^i x'^j = 0.
// Returns steps+1 points including both endpoints; leaving the metric's
// domain raises DomainExit carrying the partial path.
template <class Metric>
std::vector<Point> geodesic_integrate(const Metric& m, const Point& x0,
                                      const std::vector<double>& v0, double T, int steps) {
    const int n = static_cast<int>(x0.size());
    if (static_cast<int>(v0.size()) != n) throw InvalidParameter("velocity dimension mismatch");
    if (steps < 1) throw InvalidParameter("steps must be positive");

    auto christoffel_at = [&](const Point& x) {
        if constexpr (std::is_same_v<Metric, DiagonalMetric>)
            return christoffel_diagonal(m, x).values;
        else
            return christoffel_general(m, x).values;
    };

    // State y = (x, v); y' = (v, -Gamma v v).
    auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
        Point x(y.begin(), y.begin() + n);
        const Tensor3 G = christoffel_at(x);
        for (int i = 0; i < n; ++i) dy[i] = y[n + i];
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) acc -= G(k, i, j) * y[n + i] * y[n + j];
            dy[n + k] = acc;
        }
    };

    std::vector<Point> path;
    path.reserve(steps + 1);
    path.push_back(x0);
    std::vector<double> y(2 * n);
    std::copy(x0.begin(), x0.end(), y.begin());
    std::copy(v0.begin(), v0.end(), y.begin() + n);
    const double dt = T / steps;
    std::vector<double> k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), tmp(2 * n);

    for (int s = 0; s < steps; ++s) {
        try {
            rhs(y, k1);
            for (int i = 0; i < 2 * n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
            rhs(tmp, k2);
            for (int i = 0; i < 2 * n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
            rhs(tmp, k3);
            for (int i = 0; i < 2 * n; ++i) tmp[i] = y[i] + dt * k3[i];
            rhs(tmp, k4);
            for (int i = 0; i < 2 * n; ++i)
                y[i] += dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        } catch (const DomainError& e) {
            throw DomainExit(std::string("geodesic left the metric domain: ") + e.what(),
                             std::move(path));
        }
        path.emplace_back(y.begin(), y.begin() + n);
    }
    return path;
}

}  // namespace fraccurv
