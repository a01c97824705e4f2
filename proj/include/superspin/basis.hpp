#pragma once

#include <memory>
#include <vector>

#include "superspin/partition.hpp"

namespace superspin {

// Product basis over superspin occupation numbers k_a in {0..n_a}, with
// j_a fixed to its maximal value n_a/2 (the dissipator conserves every
// per-superspin Casimir, and all supported initial states live in the
// maximal sector). Superspin 0 is the slowest-varying digit.
//
// The basis also carries the excitation-manifold decomposition: manifold M
// collects all tuples with sum(k) = M, ordered by ascending global index.
// Block offsets lay the manifold-diagonal part of a density matrix out in
// one contiguous buffer (block M occupies dim_M^2 doubles, column-major).
struct Basis {
    SuperspinPartition part;
    int D = 0;
    std::vector<int> radix;    // n_a + 1
    std::vector<int> stride;   // mixed-radix strides, superspin 0 slowest

    std::vector<int> manifold_of;                 // global index -> M
    std::vector<int> pos_in_manifold;             // global index -> row within block
    std::vector<std::vector<int>> manifolds;      // M -> global indices
    std::vector<int> block_dim;                   // M -> manifold dimension
    std::vector<std::size_t> block_offset;        // M -> offset into flat buffer
    std::size_t block_total = 0;                  // sum of dim_M^2

    static std::shared_ptr<const Basis> make(const SuperspinPartition& part) {
        auto b = std::make_shared<Basis>();
        b->part = part;
        const int p = part.p();
        b->radix.resize(p);
        b->stride.resize(p);
        long long D = 1;
        for (int a = 0; a < p; ++a) {
            b->radix[a] = part.sizes[a] + 1;
            D *= b->radix[a];
        }
        if (D > (1LL << 31))
            throw DimensionError("superspin basis too large: D = " + std::to_string(D));
        b->D = static_cast<int>(D);
        int s = 1;
        for (int a = p - 1; a >= 0; --a) {
            b->stride[a] = s;
            s *= b->radix[a];
        }
        const int N = part.N;
        b->manifold_of.resize(b->D);
        b->pos_in_manifold.resize(b->D);
        b->manifolds.assign(N + 1, {});
        std::vector<int> k(p, 0);
        for (int idx = 0; idx < b->D; ++idx) {
            int m = 0;
            for (int a = 0; a < p; ++a) m += k[a];
            b->manifold_of[idx] = m;
            b->pos_in_manifold[idx] = static_cast<int>(b->manifolds[m].size());
            b->manifolds[m].push_back(idx);
            for (int a = p - 1; a >= 0; --a) {
                if (++k[a] < b->radix[a]) break;
                k[a] = 0;
            }
        }
        b->block_dim.resize(N + 1);
        b->block_offset.resize(N + 1);
        std::size_t off = 0;
        for (int m = 0; m <= N; ++m) {
            b->block_dim[m] = static_cast<int>(b->manifolds[m].size());
            b->block_offset[m] = off;
            off += static_cast<std::size_t>(b->block_dim[m]) * b->block_dim[m];
        }
        b->block_total = off;
        return b;
    }

    int index(const std::vector<int>& k) const {
        int idx = 0;
        for (std::size_t a = 0; a < k.size(); ++a) idx += k[a] * stride[a];
        return idx;
    }

    void occupations(int idx, std::vector<int>& k) const {
        k.resize(radix.size());
        for (std::size_t a = 0; a < radix.size(); ++a) {
            k[a] = (idx / stride[a]) % radix[a];
        }
    }

    std::vector<int> occupations(int idx) const {
        std::vector<int> k;
        occupations(idx, k);
        return k;
    }

    int fully_inverted_index() const { return D - 1; }
    int ground_index() const { return 0; }
};

}  // namespace superspin
