#include "superspin/evolution.hpp"

#include <algorithm>

namespace superspin {

namespace {

double sample_time(const IntegratorConfig& cfg, int i) {
    return cfg.t_max * double(i) / double(cfg.n_samples - 1);
}

void symmetrize_blocks(BlockState& y, int m_hi) {
    for (int m = 0; m <= m_hi; ++m) {
        auto b = y.block(m);
        for (int c = 1; c < b.cols(); ++c)
            for (int r = 0; r < c; ++r) {
                const double avg = 0.5 * (b(r, c) + b(c, r));
                b(r, c) = avg;
                b(c, r) = avg;
            }
    }
}

int top_occupied_block(const BlockState& y, double tol) {
    int hi = 0;
    for (int m = 0; m <= y.basis->part.N; ++m) {
        const auto b = y.block(m);
        if (b.size() > 0 && b.cwiseAbs().maxCoeff() > tol) hi = m;
    }
    return hi;
}

// Smallest eigenvalue over the active blocks.
double min_block_eigenvalue(const BlockState& y, int m_hi) {
    double lo = 0;
    for (int m = 0; m <= m_hi; ++m) {
        const auto b = y.block(m);
        if (b.rows() == 0) continue;
        if (b.rows() == 1) {
            lo = std::min(lo, b(0, 0));
            continue;
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(b, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
}

}  // namespace

BlockEvolveResult evolve_blocks(const BlockState& state0, const BlockGenerator& gen,
                                const BlockObservables& obs, IntegratorConfig cfg,
                                const BlockObserver& observer) {
    cfg.validate();
    const auto basis = gen.basis();
    if (state0.basis->D != basis->D)
        throw DimensionError("initial state does not match the generator basis");
    const int N = basis->part.N;

    BlockState y = state0;
    int m_hi = top_occupied_block(y, 0.0);
    for (int m = m_hi + 1; m <= N; ++m) y.block(m).setZero();

    double t = 0;
    double dt = cfg.dt;
    double rate_margin = 2.2;
    int halvings = 0;

    BlockState snapshot = y;
    double t_snap = 0;
    int m_hi_snap = m_hi;

    steppers::Rk4Work rk4w;
    steppers::RkcWork rkcw;

    auto rhs = [&](const std::vector<double>& yv, std::vector<double>& dydt) {
        dydt.resize(yv.size());
        gen.apply(yv.data(), dydt.data(), m_hi);
    };

    ObservableSeries series;
    series.reserve(cfg.n_samples);

    int i = 0;
    while (i < cfg.n_samples) {
        const double target = sample_time(cfg, i);
        bool stepped = false;
        while (t < target - 1e-12 * cfg.t_max) {
            const double h = std::min(dt, target - t);
            if (cfg.method == Method::Rk4) {
                steppers::rk4_step(y.data, h, rhs, rk4w);
            } else {
                const double bound = rate_margin * gen.max_rate(0, m_hi) + 1.0;
                const int s = steppers::rkc_stages(h, bound);
                steppers::rkc2_step(y.data, h, s, rhs, rkcw);
            }
            t += h;
            stepped = true;
        }
        if (stepped) symmetrize_blocks(y, m_hi);

        bool breach = false;
        std::string why;
        const double tr = y.trace();
        if (std::abs(tr - 1.0) > cfg.tol_trace * std::max(1.0, t)) {
            breach = true;
            why = "trace drifted to " + std::to_string(tr);
        }
        if (!breach) {
            for (int m = 0; m <= m_hi && !breach; ++m) {
                const auto b = y.block(m);
                if (b.rows() > 0 && b.diagonal().minCoeff() < -cfg.tol_pos) {
                    breach = true;
                    why = "negative population on manifold " + std::to_string(m);
                }
            }
        }
        const bool eig_check =
            (cfg.pos_eig_stride > 0 && i % cfg.pos_eig_stride == 0) ||
            i == cfg.n_samples - 1;
        if (!breach && eig_check) {
            const double lo = min_block_eigenvalue(y, m_hi);
            if (lo < -cfg.tol_pos) {
                breach = true;
                why = "negative eigenvalue " + std::to_string(lo);
            }
        }

        if (breach) {
            if (i == 0 || halvings >= cfg.max_halvings)
                throw IntegrationError("integration tolerance breached (" + why + ")", t);
            ++halvings;
            dt *= 0.5;
            if (cfg.method == Method::Rkc) rate_margin *= 1.5;
            y = snapshot;
            t = t_snap;
            m_hi = m_hi_snap;
            continue;  // redo the span up to sample i
        }

        series.push_back(obs.record(t, y));
        if (observer) observer(i, t, y);

        // Drop drained manifolds from the top of the cascade; they are never
        // repopulated because excitations only flow downward.
        while (m_hi > 0 && y.block_trace(m_hi) < cfg.freeze_tol &&
               y.block(m_hi).cwiseAbs().maxCoeff() < 10 * cfg.freeze_tol) {
            y.block(m_hi).setZero();
            --m_hi;
        }

        snapshot = y;
        t_snap = t;
        m_hi_snap = m_hi;
        ++i;
    }

    return {std::move(series), std::move(y)};
}

DenseEvolveResult evolve_dense(const SuperspinState& state0, const DenseLindblad& gen,
                               const DenseObservables& obs, IntegratorConfig cfg,
                               const DenseObserver& observer) {
    cfg.validate();
    const auto basis = gen.basis();
    if (state0.basis->D != basis->D)
        throw DimensionError("initial state does not match the generator basis");

    MatrixXcd rho = state0.rho;
    double t = 0;
    double dt = cfg.dt;
    int halvings = 0;
    MatrixXcd snapshot = rho;
    double t_snap = 0;

    MatrixXcd k1, k2, k3, k4, tmp;
    ObservableSeries series;
    series.reserve(cfg.n_samples);

    int i = 0;
    while (i < cfg.n_samples) {
        const double target = sample_time(cfg, i);
        bool stepped = false;
        while (t < target - 1e-12 * cfg.t_max) {
            const double h = std::min(dt, target - t);
            gen.apply(rho, k1);
            tmp = rho + 0.5 * h * k1;
            gen.apply(tmp, k2);
            tmp = rho + 0.5 * h * k2;
            gen.apply(tmp, k3);
            tmp = rho + h * k3;
            gen.apply(tmp, k4);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            rho = 0.5 * (rho + rho.adjoint()).eval();
            t += h;
            stepped = true;
        }
        (void)stepped;

        bool breach = false;
        std::string why;
        const double tr = rho.trace().real();
        if (std::abs(tr - 1.0) > cfg.tol_trace * std::max(1.0, t)) {
            breach = true;
            why = "trace drifted to " + std::to_string(tr);
        }
        const bool eig_check =
            (cfg.pos_eig_stride > 0 && i % cfg.pos_eig_stride == 0) ||
            i == cfg.n_samples - 1;
        if (!breach && eig_check) {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -cfg.tol_pos) {
                breach = true;
                why = "negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff());
            }
        }

        if (breach) {
            if (i == 0 || halvings >= cfg.max_halvings)
                throw IntegrationError("integration tolerance breached (" + why + ")", t);
            ++halvings;
            dt *= 0.5;
            rho = snapshot;
            t = t_snap;
            continue;
        }

        series.push_back(obs.record(t, rho));
        if (observer) observer(i, t, rho);
        snapshot = rho;
        t_snap = t;
        ++i;
    }

    SuperspinState final{state0.basis, std::move(rho)};
    return {std::move(series), std::move(final)};
}

double average_inverse_squeezing(const BlockState& state, const BlockObservables& obs,
                                 double darkness_threshold, bool require_stationary) {
    const auto& basis = *state.basis;
    const int N = basis.part.N;
    if (require_stationary) {
        const double rate = obs.emission_rate(state);
        if (rate > darkness_threshold * N * obs.gamma())
            throw PreconditionError(
                "average inverse squeezing requires a stationary (dark) state; "
                "emission rate " + std::to_string(rate) + " exceeds threshold");
    }
    double acc = 0;
    for (int m = 1; m <= N / 3; ++m) {
        const double pm = state.block_trace(m);
        if (pm < 1e-15) continue;
        // Within a manifold Sz is sharp, so xi_D = N/4 / <Sx^2+Sy^2>.
        const double perp = obs.spsm_block_trace(state, m) / pm - (m - 0.5 * N);
        if (perp < 1e-12) continue;
        const double xi_inv = 4.0 * perp / N;
        acc += pm * xi_inv;
    }
    return acc;
}

}  // namespace superspin
