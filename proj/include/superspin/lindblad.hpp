#pragma once

#include <vector>

#include "superspin/operators.hpp"
#include "superspin/state.hpp"

namespace superspin {

// Serial reference implementation of the superspin dissipator
//   L[rho] = sum_ab (G~_ab/2) (2 J_b- rho J_a+ - {J_a+ J_b-, rho})
// acting on dense complex density matrices. Kept deliberately simple; the
// OpenMP block engine below is checked against it.
class DenseLindblad {
public:
    DenseLindblad(const CollectiveOps& ops, const MatrixXd& gamma_reduced)
        : basis_(ops.basis) {
        const SpMatD K = rate_operator(ops, gamma_reduced);
        K_ = K.cast<Complex>();
        auto ch = jump_channels(ops, gamma_reduced);
        for (std::size_t nu = 0; nu < ch.rates.size(); ++nu) {
            rates_.push_back(ch.rates[nu]);
            jump_.push_back(ch.ops[nu].cast<Complex>());
        }
    }

    std::shared_ptr<const Basis> basis() const { return basis_; }
    const SpMatC& rate_op() const { return K_; }

    void apply(const MatrixXcd& rho, MatrixXcd& drho) const {
        if (rho.rows() != basis_->D || rho.cols() != basis_->D)
            throw DimensionError("density matrix does not match the generator basis");
        drho.noalias() = Complex(-0.5) * (K_ * rho);
        drho.noalias() += Complex(-0.5) * (rho * K_);
        for (std::size_t nu = 0; nu < jump_.size(); ++nu) {
            tmp_.noalias() = jump_[nu] * rho;
            drho.noalias() += rates_[nu] * (tmp_ * jump_[nu].adjoint());
        }
    }

    MatrixXcd operator()(const MatrixXcd& rho) const {
        MatrixXcd d;
        apply(rho, d);
        return d;
    }

private:
    std::shared_ptr<const Basis> basis_;
    SpMatC K_;
    std::vector<double> rates_;
    std::vector<SpMatC> jump_;
    mutable MatrixXcd tmp_;
};

namespace detail {

// Compressed-column storage extracted from an Eigen sparse matrix; the hot
// kernels index the raw arrays directly.
struct Csc {
    int rows = 0, cols = 0;
    std::vector<int> colptr, rowind;
    std::vector<double> val;

    Csc() = default;
    explicit Csc(const SpMatD& m) {
        rows = static_cast<int>(m.rows());
        cols = static_cast<int>(m.cols());
        colptr.assign(m.outerIndexPtr(), m.outerIndexPtr() + m.cols() + 1);
        rowind.assign(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
        val.assign(m.valuePtr(), m.valuePtr() + m.nonZeros());
    }
};

// Restriction of a D x D sparse operator to the (row_manifold, col_manifold)
// block, in manifold-local indices.
inline SpMatD manifold_block(const SpMatD& op, const Basis& b, int m_row, int m_col) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < op.outerSize(); ++c) {
        if (b.manifold_of[c] != m_col) continue;
        for (SpMatD::InnerIterator it(op, c); it; ++it) {
            if (b.manifold_of[it.row()] != m_row) continue;
            trip.emplace_back(b.pos_in_manifold[it.row()], b.pos_in_manifold[c],
                              it.value());
        }
    }
    SpMatD blk(b.block_dim[m_row], b.block_dim[m_col]);
    blk.setFromTriplets(trip.begin(), trip.end());
    return blk;
}

}  // namespace detail

// Manifold-blocked superspin dissipator. The generator couples block M to
// itself (anticommutator with K) and to block M+1 (jump feed), so the RHS of
// each output column depends only on a handful of sparse columns; all
// columns across all blocks are updated in parallel.
class BlockGenerator {
public:
    BlockGenerator(const CollectiveOps& ops, const MatrixXd& gamma_reduced)
        : basis_(ops.basis) {
        const auto& b = *basis_;
        const int N = b.part.N;
        const SpMatD K = rate_operator(ops, gamma_reduced);
        auto ch = jump_channels(ops, gamma_reduced);
        rates_ = ch.rates;
        K_.resize(N + 1);
        max_rate_.assign(N + 1, 0.0);
        feed_.resize(N + 1);
        feed_t_.resize(N + 1);
        for (int m = 0; m <= N; ++m) {
            SpMatD km = detail::manifold_block(K, b, m, m);
            K_[m] = detail::Csc(km);
            for (int i = 0; i < km.rows(); ++i)
                max_rate_[m] = std::max(max_rate_[m], km.coeff(i, i));
            if (m < N) {
                for (const auto& O : ch.ops) {
                    SpMatD f = detail::manifold_block(O, b, m, m + 1);
                    feed_[m].emplace_back(f);
                    feed_t_[m].emplace_back(SpMatD(f.transpose()));
                }
            }
        }
        // Work items: column ranges of roughly even cost.
        for (int m = 0; m <= N; ++m) {
            const int dim = b.block_dim[m];
            if (dim == 0) continue;
            const int chunk = std::max(1, 4096 / std::max(dim, 1));
            for (int c0 = 0; c0 < dim; c0 += chunk)
                tasks_.push_back({m, c0, std::min(c0 + chunk, dim)});
        }
        scratch_rows_ = 0;
        for (int m = 0; m <= N; ++m)
            scratch_rows_ = std::max(scratch_rows_, b.block_dim[m]);
    }

    std::shared_ptr<const Basis> basis() const { return basis_; }
    const std::vector<double>& rates() const { return rates_; }

    // Largest diagonal decay rate over blocks m_lo..m_hi; bounds the spectral
    // radius of the generator (used to pick stable step sizes).
    double max_rate(int m_lo, int m_hi) const {
        double r = 0;
        for (int m = m_lo; m <= m_hi; ++m) r = std::max(r, max_rate_[m]);
        return r;
    }

    // dydt = L[y], restricted to blocks m <= m_hi (blocks above are frozen
    // and must be zero in y; their dydt is zero-filled). Deterministic for
    // any thread count: each output column is written by exactly one thread
    // in a fixed per-column order.
    void apply(const double* y, double* dydt, int m_hi) const;

    void apply(const BlockState& y, BlockState& dydt, int m_hi) const {
        if (y.data.size() != basis_->block_total || dydt.data.size() != basis_->block_total)
            throw DimensionError("block state does not match the generator basis");
        apply(y.data.data(), dydt.data.data(), m_hi);
    }

    void apply(const BlockState& y, BlockState& dydt) const {
        apply(y, dydt, basis_->part.N);
    }

private:
    struct Task {
        int m, c0, c1;
    };

    std::shared_ptr<const Basis> basis_;
    std::vector<double> rates_;
    std::vector<detail::Csc> K_;                     // per manifold
    std::vector<std::vector<detail::Csc>> feed_;     // per manifold, per channel: M+1 -> M
    std::vector<std::vector<detail::Csc>> feed_t_;   // transposes
    std::vector<double> max_rate_;
    std::vector<Task> tasks_;
    int scratch_rows_ = 0;
};

}  // namespace superspin
