#include "pfde/reaction.hpp"

#include <cmath>
#include <cstring>

namespace pfde {

std::string to_string(Catalog c) {
    switch (c) {
        case Catalog::Linear: return "linear";
        case Catalog::DelayedLogistic: return "delayed_logistic";
        case Catalog::CooperativeLV: return "cooperative_lv";
        case Catalog::Custom: return "custom";
    }
    return "?";
}

Catalog catalog_from_string(const std::string& name) {
    if (name == "linear") return Catalog::Linear;
    if (name == "delayed_logistic") return Catalog::DelayedLogistic;
    if (name == "cooperative_lv") return Catalog::CooperativeLV;
    if (name == "custom") return Catalog::Custom;
    throw ConfigError("unknown reaction catalog id '" + name + "'");
}

namespace {

void check_tables(const std::vector<CoeffTable>& tabs, std::size_t expected_count,
                  std::size_t driver_dim, const char* what) {
    if (!tabs.empty() && tabs.size() != expected_count)
        throw ConfigError(std::string("coefficient table '") + what + "' has wrong size");
    for (const CoeffTable& t : tabs)
        for (const CoeffTerm& term : t.terms)
            if (term.modes.size() != driver_dim)
                throw ConfigError(std::string("coefficient term in '") + what +
                                  "' has mode count != driver dimension");
}

double mono(const double* v, const std::vector<int>& pow) {
    double p = 1.0;
    for (std::size_t j = 0; j < pow.size(); ++j)
        for (int q = 0; q < pow[j]; ++q) p *= v[j];
    return p;
}

// d/dv_j of the monomial prod v^pow
double mono_deriv(const double* v, const std::vector<int>& pow, std::size_t j) {
    if (pow[j] == 0) return 0.0;
    double p = pow[j];
    for (std::size_t m = 0; m < pow.size(); ++m) {
        int q = pow[m] - (m == j ? 1 : 0);
        for (int r = 0; r < q; ++r) p *= v[m];
    }
    return p;
}

}  // namespace

void ReactionTerm::validate(std::size_t driver_dim) const {
    if (n < 1) throw ConfigError("reaction dimension must be >= 1");
    const auto nn = static_cast<std::size_t>(n) * n;
    switch (catalog) {
        case Catalog::Linear:
            check_tables(A, nn, driver_dim, "A");
            check_tables(B, nn, driver_dim, "B");
            break;
        case Catalog::DelayedLogistic:
            check_tables(a, static_cast<std::size_t>(n), driver_dim, "a");
            check_tables(b, static_cast<std::size_t>(n), driver_dim, "b");
            if (a.empty()) throw ConfigError("delayed_logistic requires table 'a'");
            break;
        case Catalog::CooperativeLV:
            check_tables(a, static_cast<std::size_t>(n), driver_dim, "a");
            check_tables(b, static_cast<std::size_t>(n), driver_dim, "b");
            check_tables(c, nn, driver_dim, "c");
            check_tables(e, nn, driver_dim, "e");
            if (a.empty()) throw ConfigError("cooperative_lv requires table 'a'");
            break;
        case Catalog::Custom:
            for (const CustomTerm& t : terms) {
                if (t.target < 0 || t.target >= n)
                    throw ConfigError("custom term target out of range");
                if (t.ypow.size() != static_cast<std::size_t>(n) ||
                    t.dpow.size() != static_cast<std::size_t>(n))
                    throw ConfigError("custom term exponent vectors must have length n");
                for (int q : t.ypow)
                    if (q < 0) throw ConfigError("custom term exponents must be nonnegative");
                for (int q : t.dpow)
                    if (q < 0) throw ConfigError("custom term exponents must be nonnegative");
                for (const CoeffTerm& term : t.coef.terms)
                    if (term.modes.size() != driver_dim)
                        throw ConfigError("custom term coefficient has mode count != driver dimension");
            }
            break;
    }
}

void ReactionTerm::eval(const DriverState& omega, double x, const double* y, const double* yd,
                        double* f) const {
    for (int i = 0; i < n; ++i) f[i] = 0.0;
    switch (catalog) {
        case Catalog::Linear: {
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (!A.empty()) s += A[i * n + j].eval(omega, x) * y[j];
                    if (!B.empty()) s += B[i * n + j].eval(omega, x) * yd[j];
                }
                f[i] = s;
            }
            break;
        }
        case Catalog::DelayedLogistic: {
            for (int i = 0; i < n; ++i) {
                double ai = a[i].eval(omega, x);
                double bi = b.empty() ? 0.0 : b[i].eval(omega, x);
                f[i] = y[i] * (ai - bi * yd[i]);
            }
            break;
        }
        case Catalog::CooperativeLV: {
            for (int i = 0; i < n; ++i) {
                double ai = a[i].eval(omega, x);
                double bi = b.empty() ? 0.0 : b[i].eval(omega, x);
                double s = y[i] * (ai - bi * y[i]);
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    if (!c.empty()) s += c[i * n + j].eval(omega, x) * y[j];
                    if (!e.empty()) s += e[i * n + j].eval(omega, x) * yd[j];
                }
                f[i] = s;
            }
            break;
        }
        case Catalog::Custom: {
            for (const CustomTerm& t : terms)
                f[t.target] += t.coef.eval(omega, x) * mono(y, t.ypow) * mono(yd, t.dpow);
            break;
        }
    }
}

void ReactionTerm::jacobians(const DriverState& omega, double x, const double* y,
                             const double* yd, double* dy, double* dyd) const {
    const auto nn = static_cast<std::size_t>(n) * n;
    std::memset(dy, 0, nn * sizeof(double));
    std::memset(dyd, 0, nn * sizeof(double));
    switch (catalog) {
        case Catalog::Linear: {
            for (std::size_t k = 0; k < nn; ++k) {
                if (!A.empty()) dy[k] = A[k].eval(omega, x);
                if (!B.empty()) dyd[k] = B[k].eval(omega, x);
            }
            break;
        }
        case Catalog::DelayedLogistic: {
            for (int i = 0; i < n; ++i) {
                double ai = a[i].eval(omega, x);
                double bi = b.empty() ? 0.0 : b[i].eval(omega, x);
                dy[i * n + i] = ai - bi * yd[i];
                dyd[i * n + i] = -bi * y[i];
            }
            break;
        }
        case Catalog::CooperativeLV: {
            for (int i = 0; i < n; ++i) {
                double ai = a[i].eval(omega, x);
                double bi = b.empty() ? 0.0 : b[i].eval(omega, x);
                dy[i * n + i] = ai - 2.0 * bi * y[i];
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    if (!c.empty()) dy[i * n + j] = c[i * n + j].eval(omega, x);
                    if (!e.empty()) dyd[i * n + j] = e[i * n + j].eval(omega, x);
                }
            }
            break;
        }
        case Catalog::Custom: {
            for (const CustomTerm& t : terms) {
                double cf = t.coef.eval(omega, x);
                double my = mono(y, t.ypow);
                double md = mono(yd, t.dpow);
                for (int j = 0; j < n; ++j) {
                    dy[t.target * n + j] += cf * md * mono_deriv(y, t.ypow, j);
                    dyd[t.target * n + j] += cf * my * mono_deriv(yd, t.dpow, j);
                }
            }
            break;
        }
    }
}

std::vector<double> eval_reaction(const ReactionTerm& r, const DriverState& omega, double x,
                                  const std::vector<double>& y, const std::vector<double>& yd) {
    std::vector<double> f(r.n);
    r.eval(omega, x, y.data(), yd.data(), f.data());
    return f;
}

void eval_jacobians(const ReactionTerm& r, const DriverState& omega, double x,
                    const std::vector<double>& y, const std::vector<double>& yd,
                    std::vector<double>& dy, std::vector<double>& dyd) {
    dy.assign(static_cast<std::size_t>(r.n) * r.n, 0.0);
    dyd.assign(static_cast<std::size_t>(r.n) * r.n, 0.0);
    r.jacobians(omega, x, y.data(), yd.data(), dy.data(), dyd.data());
}

}  // namespace pfde
