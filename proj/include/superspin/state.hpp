#pragma once

#include <memory>

#include "superspin/basis.hpp"

namespace superspin {

// Dense density matrix over the superspin product basis. This is the
// general-purpose (serial reference) representation; the block-diagonal
// BlockState below is the production representation for decay dynamics.
struct SuperspinState {
    std::shared_ptr<const Basis> basis;
    MatrixXcd rho;

    static SuperspinState fully_inverted(std::shared_ptr<const Basis> basis) {
        SuperspinState s{basis, MatrixXcd::Zero(basis->D, basis->D)};
        s.rho(basis->D - 1, basis->D - 1) = 1.0;
        return s;
    }

    static SuperspinState ground(std::shared_ptr<const Basis> basis) {
        SuperspinState s{basis, MatrixXcd::Zero(basis->D, basis->D)};
        s.rho(0, 0) = 1.0;
        return s;
    }

    static SuperspinState pure(std::shared_ptr<const Basis> basis, const VectorXcd& psi) {
        if (psi.size() != basis->D)
            throw DimensionError("state vector length does not match basis dimension");
        SuperspinState s{basis, psi * psi.adjoint()};
        return s;
    }

    double trace() const { return rho.trace().real(); }

    // Checks the density-matrix contract: unit trace, Hermiticity and
    // (optionally) positivity down to -tol on the smallest eigenvalue.
    void validate(double tol = 1e-9, bool check_positivity = true) const {
        if (rho.rows() != basis->D || rho.cols() != basis->D)
            throw DimensionError("density matrix dimension does not match basis");
        if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
            throw NumericalStateError("density matrix trace deviates from 1 by " +
                                      std::to_string(std::abs(rho.trace().real() - 1.0)));
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        if (herm > tol)
            throw NumericalStateError("density matrix is not Hermitian (residual " +
                                      std::to_string(herm) + ")");
        if (check_positivity) {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
            if (es.eigenvalues().minCoeff() < -tol)
                throw NumericalStateError("density matrix has eigenvalue " +
                                          std::to_string(es.eigenvalues().minCoeff()));
        }
    }
};

// Excitation-manifold-diagonal density matrix with real symmetric blocks,
// stored in one contiguous buffer (block M is dim_M x dim_M column-major at
// block_offset[M]). The decay dynamics conserve the excitation difference
// between bra and ket, so a state that starts manifold-diagonal (fully
// inverted, ground, any Dicke state) stays manifold-diagonal; with real
// couplings the blocks stay real.
struct BlockState {
    std::shared_ptr<const Basis> basis;
    std::vector<double> data;

    static BlockState zero(std::shared_ptr<const Basis> basis) {
        BlockState s;
        s.basis = basis;
        s.data.assign(basis->block_total, 0.0);
        return s;
    }

    static BlockState fully_inverted(std::shared_ptr<const Basis> basis) {
        BlockState s = zero(basis);
        s.block(basis->part.N)(0, 0) = 1.0;  // top manifold has dimension 1
        return s;
    }

    static BlockState ground(std::shared_ptr<const Basis> basis) {
        BlockState s = zero(basis);
        s.block(0)(0, 0) = 1.0;
        return s;
    }

    // Pure state with real amplitudes supported on a single manifold.
    static BlockState pure(std::shared_ptr<const Basis> basis, const VectorXd& psi) {
        if (psi.size() != basis->D)
            throw DimensionError("state vector length does not match basis dimension");
        int m = -1;
        for (int i = 0; i < basis->D; ++i) {
            if (psi[i] == 0.0) continue;
            if (m < 0) m = basis->manifold_of[i];
            else if (basis->manifold_of[i] != m)
                throw PreconditionError(
                    "block representation requires a fixed excitation number; "
                    "state has support on several manifolds");
        }
        BlockState s = zero(basis);
        if (m < 0) throw PreconditionError("zero state vector");
        auto blk = s.block(m);
        const auto& idx = basis->manifolds[m];
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                blk(r, c) = psi[idx[r]] * psi[idx[c]];
        return s;
    }

    Eigen::Map<MatrixXd> block(int m) {
        return {data.data() + basis->block_offset[m], basis->block_dim[m],
                basis->block_dim[m]};
    }
    Eigen::Map<const MatrixXd> block(int m) const {
        return {data.data() + basis->block_offset[m], basis->block_dim[m],
                basis->block_dim[m]};
    }

    double block_trace(int m) const {
        auto b = block(m);
        return b.diagonal().sum();
    }

    double trace() const {
        double t = 0;
        for (int m = 0; m <= basis->part.N; ++m) t += block_trace(m);
        return t;
    }

    // Manifold populations Tr(P_m rho), m = 0..N.
    VectorXd populations() const {
        VectorXd pop(basis->part.N + 1);
        for (int m = 0; m <= basis->part.N; ++m) pop[m] = block_trace(m);
        return pop;
    }

    MatrixXcd to_dense() const {
        MatrixXcd rho = MatrixXcd::Zero(basis->D, basis->D);
        for (int m = 0; m <= basis->part.N; ++m) {
            const auto& idx = basis->manifolds[m];
            auto blk = block(m);
            for (std::size_t c = 0; c < idx.size(); ++c)
                for (std::size_t r = 0; r < idx.size(); ++r)
                    rho(idx[r], idx[c]) = blk(r, c);
        }
        return rho;
    }

    // Validates that a dense state is manifold-diagonal with real blocks
    // (within tol) and converts. Anything else must use the dense path.
    static BlockState from_dense(const SuperspinState& s, double tol = 1e-12) {
        BlockState out = zero(s.basis);
        const auto& b = *s.basis;
        double off = 0, imag = 0;
        for (int c = 0; c < b.D; ++c) {
            for (int r = 0; r < b.D; ++r) {
                const Complex v = s.rho(r, c);
                if (b.manifold_of[r] != b.manifold_of[c]) {
                    off = std::max(off, std::abs(v));
                    continue;
                }
                imag = std::max(imag, std::abs(v.imag()));
                out.block(b.manifold_of[c])(b.pos_in_manifold[r], b.pos_in_manifold[c]) =
                    v.real();
            }
        }
        if (off > tol)
            throw PreconditionError(
                "state has coherences between excitation manifolds (max " +
                std::to_string(off) + "); use the dense evolution path");
        if (imag > tol)
            throw PreconditionError(
                "state has imaginary parts beyond tolerance (max " +
                std::to_string(imag) + "); the block engine stores real blocks");
        return out;
    }
};

}  // namespace superspin
