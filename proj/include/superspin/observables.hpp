#pragma once

#include <cmath>
#include <vector>

#include "superspin/lindblad.hpp"

namespace superspin {

// One time sample of the scalar observables tracked during evolution.
struct ObservableRecord {
    double t = 0;
    double emission_rate = 0;  // R = sum_ab G~_ab <J_a+ J_b->, units gamma
    double Sz = 0;             // m_s
    double S2 = 0;
    double spin_length = 0;    // s solved from <S^2> = s(s+1)
    double var_Sz = 0;
    double xi_D = 0;
    VectorXd populations;      // Tr(P_m rho), m = 0..N

    void check_invariants(int N, double tol = 1e-7) const {
        if (emission_rate < -tol * std::max(1.0, double(N)))
            throw NumericalStateError("emission rate is negative: " +
                                      std::to_string(emission_rate));
        if (spin_length > 0.5 * N + 1e-6)
            throw NumericalStateError("spin length exceeds N/2: " +
                                      std::to_string(spin_length));
        if (std::abs(populations.sum() - 1.0) > tol)
            throw NumericalStateError("manifold populations sum to " +
                                      std::to_string(populations.sum()));
    }
};

using ObservableSeries = std::vector<ObservableRecord>;

inline double spin_length_from_s2(double s2, double tol = 1e-9) {
    if (s2 < -tol)
        throw NumericalStateError("<S^2> = " + std::to_string(s2) + " is negative");
    return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(s2, 0.0)));
}

struct SqueezingReport {
    double xi_D;
    long depth_bound;  // entanglement depth >= ceil(1/xi_D) - 2
};

inline long entanglement_depth_bound(double xi_inv) {
    const double r = std::round(xi_inv);
    if (std::abs(xi_inv - r) < 1e-9) return static_cast<long>(r) - 2;
    return static_cast<long>(std::ceil(xi_inv)) - 2;
}

// xi_D = N ((dSz)^2 + 1/4) / <Sx^2 + Sy^2> from the three moments.
inline SqueezingReport dicke_squeezing_from_moments(int N, double var_sz,
                                                    double perp2) {
    if (perp2 < 1e-12 * std::max(1, N))
        throw NumericalStateError(
            "Dicke squeezing undefined: <Sx^2+Sy^2> = " + std::to_string(perp2));
    const double xi = N * (var_sz + 0.25) / perp2;
    return {xi, entanglement_depth_bound(1.0 / xi)};
}

inline double expval(const SpMatD& op, const MatrixXcd& rho) {
    double v = 0;
    for (int c = 0; c < op.outerSize(); ++c)
        for (SpMatD::InnerIterator it(op, c); it; ++it)
            v += it.value() * rho(c, it.row()).real();
    return v;
}

// Observable evaluation on manifold-blocked states. Sz is constant on each
// manifold, so only <S+S-> and the rate operator need per-block matrices.
class BlockObservables {
public:
    BlockObservables(const CollectiveOps& ops, const MatrixXd& gamma_reduced) {
        basis_ = ops.basis;
        gamma_ = gamma_reduced.diagonal().maxCoeff();
        const auto& b = *basis_;
        const SpMatD K = rate_operator(ops, gamma_reduced);
        for (int m = 0; m <= b.part.N; ++m) {
            K_.push_back(detail::Csc(detail::manifold_block(K, b, m, m)));
            spsm_.push_back(detail::Csc(detail::manifold_block(ops.SpSm, b, m, m)));
        }
    }

    std::shared_ptr<const Basis> basis() const { return basis_; }
    double gamma() const { return gamma_; }

    // Tr((S+S-)_m rho_m), unnormalized.
    double spsm_block_trace(const BlockState& s, int m) const {
        const auto& A = spsm_[m];
        double v = 0;
        auto blk = s.block(m);
        for (int c = 0; c < A.cols; ++c)
            for (int q = A.colptr[c]; q < A.colptr[c + 1]; ++q)
                v += A.val[q] * blk(c, A.rowind[q]);
        return v;
    }

    double emission_rate(const BlockState& s) const { return block_trace_prod(K_, s); }
    double perp2(const BlockState& s) const {
        // <Sx^2+Sy^2> = <S+S-> - <Sz>
        return block_trace_prod(spsm_, s) - sz_mean(s);
    }
    double sz_mean(const BlockState& s) const {
        double v = 0;
        const double half_n = 0.5 * basis_->part.N;
        for (int m = 0; m <= basis_->part.N; ++m)
            v += s.block_trace(m) * (m - half_n);
        return v;
    }

    ObservableRecord record(double t, const BlockState& s) const {
        const int N = basis_->part.N;
        ObservableRecord r;
        r.t = t;
        r.populations = s.populations();
        const double half_n = 0.5 * N;
        double sz = 0, sz2 = 0;
        for (int m = 0; m <= N; ++m) {
            sz += r.populations[m] * (m - half_n);
            sz2 += r.populations[m] * (m - half_n) * (m - half_n);
        }
        r.Sz = sz;
        r.var_Sz = std::max(sz2 - sz * sz, 0.0);
        r.emission_rate = block_trace_prod(K_, s);
        const double perp = block_trace_prod(spsm_, s) - sz;
        r.S2 = perp + sz2;
        r.spin_length = spin_length_from_s2(r.S2);
        r.xi_D = dicke_squeezing_from_moments(N, r.var_Sz, perp).xi_D;
        return r;
    }

private:
    static double block_trace_prod(const std::vector<detail::Csc>& op,
                                   const BlockState& s) {
        double v = 0;
        for (std::size_t m = 0; m < op.size(); ++m) {
            const auto& A = op[m];
            if (A.cols == 0) continue;
            auto blk = s.block(static_cast<int>(m));
            for (int c = 0; c < A.cols; ++c)
                for (int q = A.colptr[c]; q < A.colptr[c + 1]; ++q)
                    v += A.val[q] * blk(c, A.rowind[q]);
        }
        return v;
    }

    std::shared_ptr<const Basis> basis_;
    double gamma_ = 1.0;
    std::vector<detail::Csc> K_, spsm_;
};

// Same observables on dense complex states (reference path).
class DenseObservables {
public:
    DenseObservables(const CollectiveOps& ops, const MatrixXd& gamma_reduced)
        : basis_(ops.basis),
          K_(rate_operator(ops, gamma_reduced)),
          spsm_(ops.SpSm),
          sz_(ops.Sz) {}

    std::shared_ptr<const Basis> basis() const { return basis_; }

    ObservableRecord record(double t, const MatrixXcd& rho) const {
        const int N = basis_->part.N;
        ObservableRecord r;
        r.t = t;
        r.populations = VectorXd::Zero(N + 1);
        double sz = 0, sz2 = 0;
        for (int i = 0; i < basis_->D; ++i) {
            const double pi = rho(i, i).real();
            r.populations[basis_->manifold_of[i]] += pi;
            sz += pi * sz_[i];
            sz2 += pi * sz_[i] * sz_[i];
        }
        r.Sz = sz;
        r.var_Sz = std::max(sz2 - sz * sz, 0.0);
        r.emission_rate = expval(K_, rho);
        const double perp = expval(spsm_, rho) - sz;
        r.S2 = perp + sz2;
        r.spin_length = spin_length_from_s2(r.S2);
        r.xi_D = dicke_squeezing_from_moments(N, r.var_Sz, perp).xi_D;
        return r;
    }

    double emission_rate(const MatrixXcd& rho) const { return expval(K_, rho); }

private:
    std::shared_ptr<const Basis> basis_;
    SpMatD K_, spsm_;
    VectorXd sz_;
};

// Average inverse Dicke squeezing of a stationary state, conditioned on the
// photon count: sum_{m=1}^{floor(N/3)} p_m / xi_{D,m}, with xi_{D,m} evaluated
// on the normalized m-manifold block (where Delta Sz = 0 exactly).
double average_inverse_squeezing(const BlockState& state, const BlockObservables& obs,
                                 double darkness_threshold = 1e-8,
                                 bool require_stationary = true);

}  // namespace superspin
