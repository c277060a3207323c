#pragma once

namespace agestack {

// Selects between the OpenMP kernels and the serial reference path. Both
// produce bit-identical results; Serial exists for testing and benchmarks.
enum class Execution { Serial, Parallel };

}  // namespace agestack
