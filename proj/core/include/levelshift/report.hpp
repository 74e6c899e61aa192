#pragma once

#include <nlohmann/json.hpp>

#include "levelshift/constrained_search.hpp"
#include "levelshift/deflation.hpp"
#include "levelshift/ground_engines.hpp"
#include "levelshift/verify.hpp"

namespace levelshift {

/// [[re, im], ...]
nlohmann::json vector_to_json(const StateVector& v);
StateVector vector_from_json(const nlohmann::json& j);

/// {eigenvalue, multiplicity, residuals, iterations, converged, seed, engine}
nlohmann::json to_json(const GroundResult& result, bool include_vectors = false);
/// {K, E, multiplicity, verdict, measured_min}
nlohmann::json level_to_json(const DeflationLevel& level);
nlohmann::json to_json(const FirstExcitedResult& result,
                       bool include_vectors = false);
/// {levels: [...], target: {eigenvalue, multiplicity, residual_vs_H0}}
nlohmann::json to_json(const LadderResult& result, bool include_vectors = false);
nlohmann::json to_json(const VerificationSummary& summary);
nlohmann::json to_json(const FunctionalEvaluation& evaluation);
nlohmann::json to_json(const DensityMinimum& minimum);

}  // namespace levelshift
