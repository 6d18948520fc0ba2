#pragma once

#include "json.hpp"

#include "ironq/regression.hpp"

namespace ironq {

// FitResult <-> JSON, lossless for everything diagnostics needs downstream.
nlohmann::json fit_to_json(const FitResult& fit_result);
FitResult fit_from_json(const nlohmann::json& j);

}  // namespace ironq
