#pragma once

#include <vector>

#include "superspin/operators.hpp"

namespace superspin {

// Exchange-symmetric subspace of one excitation manifold for p = 3 equal
// superspins: one basis vector per occupation multiset {n1 >= n2 >= n3},
// symmetrized with equal real amplitudes over the distinct permutations.
// Valid at kd = 2pi/3 where n is even, so no ladder signs enter.
struct SymmetricBasis {
    int m = 0;
    std::vector<std::array<int, 3>> multisets;  // descending triples
    MatrixXd vectors;                           // D x dim, columns orthonormal

    static SymmetricBasis build(const Basis& basis, int m);
};

struct DarkStateReport {
    int m = 0;
    VectorXd amplitudes;      // over the full product basis, unit norm
    double residual = 0;      // ||O_+ psi|| + ||O_- psi||
    double emission_rate = 0; // under the full dissipator
    double fidelity_dicke = 0;
    double xi_D = 0;
};

// The two rate-carrying jump operators at kd = 2pi/3 (rates 3*gamma/2 each):
//   O_+ = sqrt(1/6) (-J_1- + 2 J_2- - J_3-),  O_- = sqrt(1/2) (J_1- - J_3-).
struct SymmetricJumpOps {
    SpMatD O_plus, O_minus;
    double rate = 1.5;  // in units of gamma
};

SymmetricJumpOps symmetric_jump_ops(const CollectiveOps& ops);

// Dicke state |N/2, m - N/2> in the (signed) product basis: multivariate
// hypergeometric amplitudes sqrt(prod_a C(n_a,k_a) / C(N,m)).
VectorXd dicke_state(const Basis& basis, int m);

double fidelity_vs_dicke(const VectorXd& psi, const Basis& basis, int m);

// Joint nullspace of {O_+, O_-} inside the superspin-exchange-symmetric
// subspace of manifold m. Unique for 1 <= m <= N/3 and empty above.
std::vector<DarkStateReport> find_dark_states(const CollectiveOps& ops, int m);

// Nullspace of the rate-carrying jump channels over the full manifold block,
// with no exchange-symmetry restriction; the generic search for other kd.
std::vector<VectorXd> find_dark_states_general(const CollectiveOps& ops,
                                               const MatrixXd& gamma_reduced, int m);

// Directional emission rates of the m-excitation Dicke state and the
// combinatorial bound (m-1)^2 m / (N (N-m+1)). Requires the phase-sum
// condition: n N / p must be even.
struct DickeDecayCheck {
    double rate_left = 0;
    double rate_right = 0;
    double bound = 0;
};

DickeDecayCheck dicke_decay_bound_check(int N, int m, const Spacing& spacing);

}  // namespace superspin
