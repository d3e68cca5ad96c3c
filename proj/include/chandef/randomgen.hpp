#pragma once
//
// Seeded generators for the objects the test suites and the corpus generator
// draw: Gaussian ensembles, states, unitaries, channels, POVMs, experiments.
// Every generator is a pure function of (dimensions, generator state); the
// uniform doubles are derived from raw mt19937_64 output so a fixed seed
// yields the same stream on every standard library.

#include <cstdint>
#include <random>
#include <vector>

#include "chandef/hmap.hpp"
#include "chandef/matops.hpp"

namespace chandef::rnd {

using Rng = std::mt19937_64;

// Uniform on [0,1) with 53 random bits, independent of the stdlib's
// distribution implementations.
double u01(Rng& rng);
// Standard real Gaussian (Box–Muller on u01 pairs).
double gauss(Rng& rng);

// iid standard complex Gaussian entries.
Mat ginibre(Rng& rng, int rows, int cols);

Mat hermitian(Rng& rng, int d, double scale = 1.0);
// G G† for a d×rank Ginibre block; rank 0 means full rank.
Mat psd(Rng& rng, int d, int rank = 0);
// Unit-trace PSD matrix on the algebra's pattern.
State state(Rng& rng, const BlockAlgebra& alg, int rank = 0);
// Haar-uniform unit vector / unitary (QR of a Ginibre matrix).
CVec pure(Rng& rng, int d);
Mat unitary(Rng& rng, int d);

// CPTP channel from Stinespring data with the given environment dimension
// (0 picks dim(out)); block patterns are imposed by conditional expectation,
// which preserves both complete positivity and trace preservation.
HermitianMap channel(Rng& rng, const BlockAlgebra& in, const BlockAlgebra& out,
                     int env = 0);

// Hermitian map with Choi matrix a scaled GUE sample on the product pattern.
HermitianMap herm_map(Rng& rng, const BlockAlgebra& in, const BlockAlgebra& out,
                      double scale = 1.0);

// Entanglement-breaking channel: measure a random POVM, prepare random states.
HermitianMap eb_channel(Rng& rng, const BlockAlgebra& in, const BlockAlgebra& out,
                        int outcomes = 0);

// POVM with `outcomes` effects: normalized PSD samples S^{-1/2} G_i S^{-1/2}.
Povm povm(Rng& rng, const BlockAlgebra& alg, int outcomes);

// Experiment of n random states.
Experiment experiment(Rng& rng, const BlockAlgebra& alg, int n, int rank = 0);

}  // namespace chandef::rnd
