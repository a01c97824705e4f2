#pragma once

#include <optional>
#include <vector>

#include "superspin/partition.hpp"

namespace superspin {

// Dissipative couplings between qubits, in units of the single-qubit decay
// rate gamma_1d. For commensurate spacings without disorder the p x p
// reduced matrix (the first p x p block of Gamma) drives the superspin
// dissipator; it is unavailable for disordered chains.
struct CouplingModel {
    MatrixXd Gamma;                  // N x N, symmetric
    std::optional<MatrixXd> Jcoh;    // N x N coherent couplings (waveguide only)
    double gamma_1d = 1.0;
    bool disordered = false;

    const MatrixXd& reduced() const {
        if (disordered)
            throw SymmetryError(
                "reduced coupling matrix requested for a disordered chain; "
                "positional disorder breaks the superspin reduction");
        return gamma_reduced_;
    }

    MatrixXd gamma_reduced_;  // p x p block, valid only when !disordered
};

// Gamma_ij = gamma * cos(kd |x_i - x_j|) with x_j = j + eps_j.
// The cosine kernel is a rank-<=2 Gram matrix, so Gamma (and any principal
// block of it) is positive semidefinite for every spacing and disorder draw.
inline CouplingModel waveguide_coupling(
    int N, const Spacing& spacing, double gamma_1d = 1.0,
    const std::vector<double>* disorder = nullptr) {
    if (N < 1) throw ConfigError("waveguide_coupling requires N >= 1");
    if (disorder && static_cast<int>(disorder->size()) != N)
        throw DimensionError("disorder vector length must equal N");
    const double kd = spacing.kd();
    CouplingModel model;
    model.gamma_1d = gamma_1d;
    model.disordered = disorder != nullptr;
    model.Gamma.resize(N, N);
    for (int i = 0; i < N; ++i) {
        const double xi = i + (disorder ? (*disorder)[i] : 0.0);
        for (int j = 0; j <= i; ++j) {
            const double xj = j + (disorder ? (*disorder)[j] : 0.0);
            const double g = gamma_1d * std::cos(kd * std::abs(xi - xj));
            model.Gamma(i, j) = g;
            model.Gamma(j, i) = g;
        }
    }
    if (!model.disordered) {
        const int p = std::min(spacing.p, N);
        model.gamma_reduced_ = model.Gamma.topLeftCorner(p, p);
        // The reduction is only meaningful with at least one full period.
        if (spacing.p > N)
            throw ConfigError("superspin reduction needs N >= p (got N=" +
                              std::to_string(N) + ", p=" + std::to_string(spacing.p) + ")");
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(model.gamma_reduced_);
        if (es.eigenvalues().minCoeff() < -1e-12 * gamma_1d)
            throw NumericalStateError(
                "reduced coupling matrix has a negative eigenvalue beyond tolerance: " +
                std::to_string(es.eigenvalues().minCoeff()));
    }
    return model;
}

// J_ij = (gamma/2) sin(kd |i-j|), zero diagonal. Only the full-Hilbert
// reference consumes this; the sine couplings break the superspin symmetry.
inline MatrixXd waveguide_hamiltonian(int N, const Spacing& spacing,
                                      double gamma_1d = 1.0) {
    const double kd = spacing.kd();
    MatrixXd J = MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j) J(i, j) = 0.5 * gamma_1d * std::sin(kd * std::abs(i - j));
    return J;
}

namespace ring {

// Ring resonator of circumference L near a resonance omega_r with coupling
// linewidth kappa_c. Units c = 1. The formula is a narrow-linewidth,
// near-resonance approximation; validity() exposes the two smallness
// parameters (delta_k*L and Delta*L) without enforcing them.
struct RingParams {
    double L;          // ring circumference
    double omega_r;    // resonance frequency (k_r = omega_r since c = 1)
    double kappa_c;    // coupling linewidth
    double mode_area;  // effective mode area A
};

inline Complex greens_function(double z, double z_src, double omega,
                               const RingParams& ring) {
    if (ring.kappa_c <= 0 || ring.L <= 0)
        throw ConfigError("ring resonator requires kappa_c > 0 and L > 0");
    const double k_r = ring.omega_r;
    const double delta_omega = omega - ring.omega_r;
    const Complex lorentz(delta_omega, 0.5 * ring.kappa_c);
    return (-ring.mode_area / (omega * ring.L)) *
           std::cos(k_r * (z - z_src)) / lorentz;
}

struct Validity {
    double delta_kL;  // loss per round trip, kappa_c L / 2
    double DeltaL;    // detuning phase per round trip
};

inline Validity validity(double omega, const RingParams& ring) {
    return {0.5 * ring.kappa_c * ring.L, std::abs(omega - ring.omega_r) * ring.L};
}

// Dissipative coupling rate between positions z_i, z_j at resonance,
// normalized so that gamma(z, z) = gamma_1d. Reproduces the cosine kernel
// of the waveguide couplings.
inline double gamma_coupling(double z_i, double z_j, const RingParams& ring,
                             double gamma_1d = 1.0) {
    const Complex g = greens_function(z_i, z_j, ring.omega_r, ring);
    const Complex g0 = greens_function(z_i, z_i, ring.omega_r, ring);
    return gamma_1d * g.imag() / g0.imag();
}

}  // namespace ring

}  // namespace superspin
