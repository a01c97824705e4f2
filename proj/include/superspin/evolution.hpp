#pragma once

#include <functional>

#include "superspin/integrate.hpp"
#include "superspin/observables.hpp"

namespace superspin {

struct BlockEvolveResult {
    ObservableSeries series;
    BlockState final_state;
};

struct DenseEvolveResult {
    ObservableSeries series;
    SuperspinState final_state;
};

// Called at every sample with (sample index, time, state).
using BlockObserver = std::function<void(int, double, const BlockState&)>;
using DenseObserver = std::function<void(int, double, const MatrixXcd&)>;

// Production path: manifold-blocked state, OpenMP kernels, manifold freezing
// once the cascade has drained a block, stabilized stepping in rkc mode.
BlockEvolveResult evolve_blocks(const BlockState& state0, const BlockGenerator& gen,
                                const BlockObservables& obs, IntegratorConfig cfg,
                                const BlockObserver& observer = {});

// Serial reference path on dense complex density matrices.
DenseEvolveResult evolve_dense(const SuperspinState& state0, const DenseLindblad& gen,
                               const DenseObservables& obs, IntegratorConfig cfg,
                               const DenseObserver& observer = {});

}  // namespace superspin
