#pragma once

// Seeded random scenarios for property checks and the CLI's randomized oracle check.

#include <cstdint>
#include <random>

#include "privtrade/model.hpp"
#include "privtrade/solver.hpp"

namespace privtrade {

/// Valid scenario in the requested regime: nu in (0.05, 2.5), theta in (0.05, 0.95),
/// breach probabilities log-uniform in (1e-6, 1e-2).
Scenario random_scenario(std::mt19937_64& rng, Regime regime);

/// Cycles through all five regimes by trial index.
Scenario random_scenario(std::mt19937_64& rng, std::size_t trial);

}  // namespace privtrade
