#pragma once

#include <cstdint>

namespace rd {

// Philox4x32-10 counter-based generator. Every normal increment is a pure
// function of (seed, chain_id, step, mode), so trajectories are reproducible
// independent of evaluation order or worker count.
namespace philox {

struct Counter {
  uint32_t v[4];
};

Counter philox4x32(Counter ctr, uint32_t key0, uint32_t key1);

// Standard normal keyed by (seed, chain, step, mode, lane). Lanes give
// independent streams for the same (step, mode), used by CRN perturbations.
double normal(uint64_t seed, uint32_t chain, uint64_t step, uint32_t mode,
              uint32_t lane = 0);

// Uniform in (0,1), same keying.
double uniform(uint64_t seed, uint32_t chain, uint64_t step, uint32_t mode,
               uint32_t lane = 0);

}  // namespace philox
}  // namespace rd
