#pragma once

#include <numeric>
#include <vector>

#include "superspin/common.hpp"

namespace superspin {

// Commensurate lattice spacing kd = n*pi/p with n, p positive integers.
// Canonical form: n is reduced modulo 2p (kd modulo 2*pi leaves the coupling
// matrix unchanged), then n/p is brought to lowest terms. The parity of the
// reduced n decides the (-1)^(l*n) sign ladder, so it must survive reduction.
struct Spacing {
    int n = 1;
    int p = 1;

    Spacing(int n_, int p_) {
        if (n_ < 1 || p_ < 1)
            throw ConfigError("Spacing requires n >= 1 and p >= 1, got n=" +
                              std::to_string(n_) + " p=" + std::to_string(p_));
        n_ = n_ % (2 * p_);
        if (n_ == 0) n_ = 2 * p_;
        const int g = std::gcd(n_, p_);
        n = n_ / g;
        p = p_ / g;
    }

    double kd() const { return static_cast<double>(n) * M_PI / p; }

    bool operator==(const Spacing& o) const { return n == o.n && p == o.p; }
};

// Grouping of N qubits into p permutationally symmetric subsets ("superspins").
// Superspin a (0-based) owns sites a, a+p, a+2p, ... (0-based); site a+l*p
// enters the collective operators with phase (-1)^(l*n).
struct SuperspinPartition {
    int N = 0;
    Spacing spacing{1, 1};
    std::vector<int> sizes;                  // n_a, length p
    std::vector<std::vector<int>> site_map;  // 0-based site indices per superspin
    std::vector<int> signs;                  // per site, +1 or -1

    int p() const { return spacing.p; }
};

inline SuperspinPartition build_partition(int N, const Spacing& spacing) {
    if (N < 1) throw ConfigError("build_partition requires N >= 1");
    SuperspinPartition part;
    part.N = N;
    part.spacing = spacing;
    const int p = spacing.p;
    part.sizes.resize(p);
    part.site_map.resize(p);
    part.signs.assign(N, 1);
    for (int a = 0; a < p; ++a)
        part.sizes[a] = N / p + (a < N % p ? 1 : 0);
    for (int j = 0; j < N; ++j) {
        const int a = j % p;
        const int l = j / p;
        part.site_map[a].push_back(j);
        part.signs[j] = (l * spacing.n) % 2 ? -1 : 1;
    }
    return part;
}

}  // namespace superspin
