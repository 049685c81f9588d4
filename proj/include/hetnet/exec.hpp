#pragma once

namespace hetnet {

// Kernels with a data-parallel structure accept a policy so tests can compare
// the OpenMP path against the serial reference; both produce identical
// results bit for bit.
enum class ExecPolicy { serial, openmp };

}  // namespace hetnet
