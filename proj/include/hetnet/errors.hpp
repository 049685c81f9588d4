#pragma once

#include <stdexcept>

namespace hetnet {

// Base class for every error this library throws on purpose.
struct HetnetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : HetnetError { using HetnetError::HetnetError; };
struct DimensionMismatch : HetnetError { using HetnetError::HetnetError; };

// Configuration / input ingestion.
struct ConfigError : HetnetError { using HetnetError::HetnetError; };
struct InvalidPlacement : HetnetError { using HetnetError::HetnetError; };
struct IoFailure : HetnetError { using HetnetError::HetnetError; };

// Rate / price evaluation.
struct SingularReceivedCovariance : HetnetError { using HetnetError::HetnetError; };
struct SingularInterferenceCovariance : HetnetError { using HetnetError::HetnetError; };
struct DomainError : HetnetError { using HetnetError::HetnetError; };
struct InfeasibleDirection : HetnetError { using HetnetError::HetnetError; };

// Best-response solvers.
struct DegenerateRegularizer : HetnetError { using HetnetError::HetnetError; };
struct NoPositiveGain : HetnetError { using HetnetError::HetnetError; };
struct BracketFailure : HetnetError { using HetnetError::HetnetError; };

// SAT gadget brute force.
struct TooLarge : HetnetError { using HetnetError::HetnetError; };

// MaxSweepsExceeded lives in game.hpp because it carries the partial trace.

}  // namespace hetnet
