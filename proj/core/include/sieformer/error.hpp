#pragma once

#include <stdexcept>

namespace sieformer {

// Shape or size mismatch between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite input, failed convergence, or degenerate scaling.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scalar parameter out of its admissible range, or a structurally
// invalid parameter tensor.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid run or experiment configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Caller-side contract violation (e.g. unnormalized embeddings).
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// API used out of order (e.g. backward before forward).
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

// Failure inside a training run.
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Serialization and file I/O failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sieformer
