#include "superspin/lindblad.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace superspin {

void BlockGenerator::apply(const double* ydat, double* out, int m_hi) const {
    const auto& b = *basis_;
    const int ntask = static_cast<int>(tasks_.size());

#pragma omp parallel
    {
        std::vector<double> scratch(scratch_rows_);
#pragma omp for schedule(dynamic, 1)
        for (int t = 0; t < ntask; ++t) {
            const Task& task = tasks_[t];
            const int m = task.m;
            const int dim = b.block_dim[m];
            const std::size_t off = b.block_offset[m];
            if (m > m_hi) {
                for (int c = task.c0; c < task.c1; ++c)
                    std::fill(out + off + std::size_t(c) * dim,
                              out + off + std::size_t(c + 1) * dim, 0.0);
                continue;
            }
            const detail::Csc& K = K_[m];
            const bool feed = m < b.part.N && m + 1 <= m_hi && b.block_dim[m + 1] > 0;
            const int dim_up = feed ? b.block_dim[m + 1] : 0;
            const std::size_t off_up = feed ? b.block_offset[m + 1] : 0;

            for (int c = task.c0; c < task.c1; ++c) {
                double* oc = out + off + std::size_t(c) * dim;
                std::fill(oc, oc + dim, 0.0);

                // -(1/2) K rho: iterate all columns of K against rho(:,c).
                const double* yc = ydat + off + std::size_t(c) * dim;
                for (int j = 0; j < dim; ++j) {
                    const double v = yc[j];
                    if (v == 0.0) continue;
                    for (int q = K.colptr[j]; q < K.colptr[j + 1]; ++q)
                        oc[K.rowind[q]] -= 0.5 * K.val[q] * v;
                }
                // -(1/2) rho K: column c of K selects columns of rho.
                for (int q = K.colptr[c]; q < K.colptr[c + 1]; ++q) {
                    const double w = -0.5 * K.val[q];
                    const double* yj = ydat + off + std::size_t(K.rowind[q]) * dim;
                    for (int r = 0; r < dim; ++r) oc[r] += w * yj[r];
                }
                if (!feed) continue;

                // + sum_nu Gamma_nu (O rho' O^T)(:,c) with rho' the block above:
                // w = rho' * (row c of O), then accumulate O * w.
                for (std::size_t nu = 0; nu < rates_.size(); ++nu) {
                    const detail::Csc& F = feed_[m][nu];
                    const detail::Csc& Ft = feed_t_[m][nu];
                    double* w = scratch.data();
                    std::fill(w, w + dim_up, 0.0);
                    for (int q = Ft.colptr[c]; q < Ft.colptr[c + 1]; ++q) {
                        const double fv = Ft.val[q];
                        const double* ycol = ydat + off_up + std::size_t(Ft.rowind[q]) * dim_up;
                        for (int r = 0; r < dim_up; ++r) w[r] += fv * ycol[r];
                    }
                    const double rate = rates_[nu];
                    for (int l = 0; l < dim_up; ++l) {
                        const double wv = rate * w[l];
                        if (wv == 0.0) continue;
                        for (int q = F.colptr[l]; q < F.colptr[l + 1]; ++q)
                            oc[F.rowind[q]] += F.val[q] * wv;
                    }
                }
            }
        }
    }
}

}  // namespace superspin
