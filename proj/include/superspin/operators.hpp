#pragma once

#include <vector>

#include "superspin/basis.hpp"
#include "superspin/coupling.hpp"

namespace superspin {

// Collective spin operators of every superspin as sparse matrices over the
// product basis. Ladder matrix elements follow
//   J_- |j,m> = sqrt((j+m)(j-m+1)) |j,m-1>,
// i.e. amplitude sqrt(k (n-k+1)) in occupation numbers k = m + j.
struct CollectiveOps {
    std::shared_ptr<const Basis> basis;
    std::vector<SpMatD> Jm;        // lowering, one per superspin
    std::vector<SpMatD> Jp;        // raising (transpose of Jm)
    std::vector<VectorXd> Jz;      // diagonal of J_az
    VectorXd Sz;                   // diagonal of S_z = sum_a J_az
    SpMatD Sm, Sp;                 // total lowering / raising
    SpMatD SpSm;                   // S_+ S_-
    SpMatD S2;                     // total spin squared

    static CollectiveOps build(std::shared_ptr<const Basis> basis) {
        CollectiveOps ops;
        ops.basis = basis;
        const auto& b = *basis;
        const int p = b.part.p();
        ops.Jm.resize(p);
        ops.Jp.resize(p);
        ops.Jz.resize(p);
        ops.Sz = VectorXd::Zero(b.D);
        std::vector<int> k;
        for (int a = 0; a < p; ++a) {
            const int n = b.part.sizes[a];
            std::vector<Eigen::Triplet<double>> trip;
            trip.reserve(b.D);
            ops.Jz[a] = VectorXd::Zero(b.D);
            for (int idx = 0; idx < b.D; ++idx) {
                const int ka = (idx / b.stride[a]) % b.radix[a];
                ops.Jz[a][idx] = ka - 0.5 * n;
                if (ka > 0) {
                    const double amp = std::sqrt(double(ka) * (n - ka + 1));
                    trip.emplace_back(idx - b.stride[a], idx, amp);
                }
            }
            ops.Jm[a].resize(b.D, b.D);
            ops.Jm[a].setFromTriplets(trip.begin(), trip.end());
            ops.Jp[a] = SpMatD(ops.Jm[a].transpose());
            ops.Sz += ops.Jz[a];
        }
        ops.Sm.resize(b.D, b.D);
        for (int a = 0; a < p; ++a) ops.Sm += ops.Jm[a];
        ops.Sp = SpMatD(ops.Sm.transpose());
        ops.SpSm = (ops.Sp * ops.Sm).pruned();
        // S^2 = (S+S- + S-S+)/2 + Sz^2 = S+S- - Sz + Sz^2
        SpMatD diag(b.D, b.D);
        std::vector<Eigen::Triplet<double>> dd;
        dd.reserve(b.D);
        for (int i = 0; i < b.D; ++i)
            dd.emplace_back(i, i, ops.Sz[i] * ops.Sz[i] - ops.Sz[i]);
        diag.setFromTriplets(dd.begin(), dd.end());
        ops.S2 = (ops.SpSm + diag).pruned();
        return ops;
    }

    // Single-superspin Casimir S_a^2 = J_a+ J_a- + J_az^2 - J_az.
    SpMatD casimir(int a) const {
        SpMatD c = (Jp[a] * Jm[a]).pruned();
        std::vector<Eigen::Triplet<double>> dd;
        for (int i = 0; i < basis->D; ++i)
            dd.emplace_back(i, i, Jz[a][i] * Jz[a][i] - Jz[a][i]);
        SpMatD diag(basis->D, basis->D);
        diag.setFromTriplets(dd.begin(), dd.end());
        return c + diag;
    }
};

// K = sum_ab Gamma~_ab J_a+ J_b-. Its expectation is the photon emission
// rate; -(1/2){K, rho} is the anticommutator part of the dissipator.
inline SpMatD rate_operator(const CollectiveOps& ops, const MatrixXd& gamma_reduced) {
    const int p = ops.basis->part.p();
    if (gamma_reduced.rows() != p || gamma_reduced.cols() != p)
        throw DimensionError("reduced coupling matrix must be p x p");
    SpMatD K(ops.basis->D, ops.basis->D);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
            K += gamma_reduced(a, b) * (ops.Jp[a] * ops.Jm[b]);
    return K.pruned();
}

// Jump channels from the eigendecomposition of the reduced coupling matrix:
// O_nu = sum_a v_nu[a] J_a-, with rate Gamma_nu. The cosine kernel has rank
// <= 2, so at most two channels carry weight.
struct JumpChannels {
    std::vector<double> rates;
    std::vector<VectorXd> vectors;   // weights over superspins
    std::vector<SpMatD> ops;         // O_nu in the product basis
};

inline JumpChannels jump_channels(const CollectiveOps& ops,
                                  const MatrixXd& gamma_reduced,
                                  double rate_cut = 1e-12) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gamma_reduced);
    const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
    JumpChannels ch;
    for (int nu = 0; nu < gamma_reduced.rows(); ++nu) {
        const double rate = es.eigenvalues()[nu];
        if (rate <= rate_cut * std::max(top, 1.0)) continue;
        ch.rates.push_back(rate);
        ch.vectors.push_back(es.eigenvectors().col(nu));
        SpMatD O(ops.basis->D, ops.basis->D);
        for (int a = 0; a < gamma_reduced.rows(); ++a)
            O += es.eigenvectors().col(nu)[a] * ops.Jm[a];
        ch.ops.push_back(O.pruned());
    }
    return ch;
}

}  // namespace superspin
