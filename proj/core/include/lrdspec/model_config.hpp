#pragma once

#include <optional>
#include <string>

#include "lrdspec/estimation.hpp"
#include "lrdspec/models.hpp"

namespace lrdspec {

/// Model description parsed from a JSON document; see docs/config.md for the
/// schema. Carries the estimation-side weight and kernel switches next to
/// the model so one file specifies a complete setup.
struct ModelConfig {
    SpectralModel model;
    WeightSymbol weight;
    StandardizationKernel estimation_kernel = StandardizationKernel::power_law;
};

/// Parses a model description. Missing or ill-typed fields raise ConfigError
/// naming the field.
ModelConfig parse_model_config(const std::string& json_text);
ModelConfig load_model_config(const std::string& path);

}  // namespace lrdspec
