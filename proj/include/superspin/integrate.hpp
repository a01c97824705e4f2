#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "superspin/common.hpp"

namespace superspin {

enum class Method { Rk4, Rkc };

struct IntegratorConfig {
    Method method = Method::Rk4;
    double dt = 1e-3;           // step (units 1/gamma); rkc treats it as macro step
    double t_max = 10.0;
    int n_samples = 400;        // uniformly spaced records over [0, t_max]
    double tol_trace = 1e-8;    // max allowed trace drift before step halving
    double tol_pos = 1e-8;      // max allowed negative eigenvalue
    int pos_eig_stride = 0;     // full positivity eigencheck every k-th sample (0 = final only)
    double freeze_tol = 1e-14;  // block population below which a drained manifold is dropped
    int max_halvings = 12;

    void validate() const {
        if (dt <= 0 || t_max <= 0 || tol_trace <= 0 || tol_pos <= 0)
            throw ConfigError("integrator requires dt, t_max and tolerances > 0");
        if (n_samples < 2) throw ConfigError("integrator requires n_samples >= 2");
    }
};

namespace steppers {

using Rhs = std::function<void(const std::vector<double>&, std::vector<double>&)>;

inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static) if (n > (1 << 15))
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// y = a*u + b*v
inline void lincomb(std::vector<double>& y, double a, const std::vector<double>& u,
                    double b, const std::vector<double>& v) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static) if (n > (1 << 15))
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = a * u[i] + b * v[i];
}

struct Rk4Work {
    std::vector<double> k, ytmp, acc;
    void resize(std::size_t n) {
        k.resize(n);
        ytmp.resize(n);
        acc.resize(n);
    }
};

inline void rk4_step(std::vector<double>& y, double dt, const Rhs& rhs, Rk4Work& w) {
    w.resize(y.size());
    rhs(y, w.k);
    lincomb(w.acc, 1.0, y, dt / 6.0, w.k);
    lincomb(w.ytmp, 1.0, y, dt / 2.0, w.k);
    rhs(w.ytmp, w.k);
    axpy(dt / 3.0, w.k, w.acc);
    lincomb(w.ytmp, 1.0, y, dt / 2.0, w.k);
    rhs(w.ytmp, w.k);
    axpy(dt / 3.0, w.k, w.acc);
    lincomb(w.ytmp, 1.0, y, dt, w.k);
    rhs(w.ytmp, w.k);
    lincomb(y, 1.0, w.acc, dt / 6.0, w.k);
}

// Damped Runge-Kutta-Chebyshev coefficients (second order). The stability
// interval along the negative real axis has length beta = (1 + w0)/w1, which
// grows like 0.65 s^2; stage counts are chosen from the generator's rate
// bound so stiff decay never limits the macro step.
struct RkcCoeffs {
    int s;
    double w0, w1;
    std::vector<double> b, T, Tp, Tpp;

    explicit RkcCoeffs(int stages) : s(stages) {
        const double eps = 2.0 / 13.0;
        w0 = 1.0 + eps / (double(s) * s);
        T.resize(s + 1);
        Tp.resize(s + 1);
        Tpp.resize(s + 1);
        T[0] = 1; Tp[0] = 0; Tpp[0] = 0;
        T[1] = w0; Tp[1] = 1; Tpp[1] = 0;
        for (int j = 2; j <= s; ++j) {
            T[j] = 2 * w0 * T[j - 1] - T[j - 2];
            Tp[j] = 2 * T[j - 1] + 2 * w0 * Tp[j - 1] - Tp[j - 2];
            Tpp[j] = 4 * Tp[j - 1] + 2 * w0 * Tpp[j - 1] - Tpp[j - 2];
        }
        w1 = Tp[s] / Tpp[s];
        b.resize(s + 1);
        for (int j = 2; j <= s; ++j) b[j] = Tpp[j] / (Tp[j] * Tp[j]);
        b[0] = b[1] = b[2];
    }

    double beta() const { return (1.0 + w0) / w1; }
};

inline int rkc_stages(double dt, double rate_bound) {
    for (int s = 2; s <= 512; ++s) {
        if (RkcCoeffs(s).beta() >= dt * rate_bound) return s;
    }
    throw IntegrationError("stabilized stepper needs more than 512 stages; reduce dt",
                           dt);
}

struct RkcWork {
    std::vector<double> f0, f, ya, yb;
    void resize(std::size_t n) {
        f0.resize(n);
        f.resize(n);
        ya.resize(n);
        yb.resize(n);
    }
};

inline void rkc2_step(std::vector<double>& y, double dt, int s, const Rhs& rhs,
                      RkcWork& w) {
    const RkcCoeffs c(s);
    w.resize(y.size());
    rhs(y, w.f0);
    // Y1 in ya, Y0 stays in y (and yb starts as Y0).
    w.yb = y;
    lincomb(w.ya, 1.0, y, dt * c.b[1] * c.w1, w.f0);
    for (int j = 2; j <= s; ++j) {
        const double mu = 2 * c.b[j] * c.w0 / c.b[j - 1];
        const double nu = -c.b[j] / c.b[j - 2];
        const double mut = 2 * c.b[j] * c.w1 / c.b[j - 1];
        const double a_prev = 1.0 - c.b[j - 1] * c.T[j - 1];
        const double gt = -a_prev * mut;
        rhs(w.ya, w.f);
        // yb <- (1-mu-nu) y0 + mu ya + nu yb + dt(mut f + gt f0), then swap.
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
        const double c0 = 1.0 - mu - nu;
        double* yb = w.yb.data();
        const double* ya = w.ya.data();
        const double* y0 = y.data();
        const double* f = w.f.data();
        const double* f0 = w.f0.data();
#pragma omp parallel for schedule(static) if (n > (1 << 15))
        for (std::ptrdiff_t i = 0; i < n; ++i)
            yb[i] = c0 * y0[i] + mu * ya[i] + nu * yb[i] + dt * (mut * f[i] + gt * f0[i]);
        std::swap(w.ya, w.yb);
    }
    std::swap(y, w.ya);
}

}  // namespace steppers

}  // namespace superspin
