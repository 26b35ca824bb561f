#pragma once

// JSON (de)serialization for configs, plans, coefficient tables and results,
// plus the config digest that stamps output files.

#include <string>

#include <json.hpp>

#include "ringsim/estimator.hpp"
#include "ringsim/experiment.hpp"
#include "ringsim/planner.hpp"

namespace ringsim {

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

nlohmann::json coefficient_table_to_json(const effects::CoefficientTable& table);
effects::CoefficientTable coefficient_table_from_json(const nlohmann::json& doc);

nlohmann::json plan_to_json(const planner::ExperimentPlan& plan);
planner::ExperimentPlan plan_from_json(const nlohmann::json& doc);
planner::ExperimentPlan load_plan(const std::string& path);

nlohmann::json calibration_to_json(const estimator::CalibrationRun& run);
estimator::CalibrationRun calibration_from_json(const nlohmann::json& doc);
estimator::CalibrationRun load_calibration(const std::string& path);

// sigma serializes as null when unavailable (single period).
nlohmann::json estimate_to_json(const estimator::MeasurementEstimate& estimate,
                                const estimator::CalibrationInfo* calibration = nullptr);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& doc);

// FNV-1a 64-bit hash of the canonical (key-sorted) JSON form, 16 hex digits.
// Any config field change changes the digest.
std::string config_digest(const ExperimentConfig& config);

}  // namespace ringsim
