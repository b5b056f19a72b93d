#pragma once

#include <string>

#include <json.hpp>

#include "gwlab/config.hpp"
#include "gwlab/hausdorff.hpp"
#include "gwlab/identity.hpp"
#include "gwlab/spine_density.hpp"
#include "gwlab/tail.hpp"

namespace gwlab {

// Shared metadata block: every output file carries the offspring spec,
// m, q, the depths and reps used, the seed, and the config hash, plus a
// timestamp (the one field allowed to differ between identical runs).
nlohmann::json run_meta(const ExperimentConfig& cfg,
                        const OffspringDistribution& d);

// Same content as '#key=value' comment lines for CSV heads.
std::string csv_meta(const ExperimentConfig& cfg,
                     const OffspringDistribution& d);

nlohmann::json to_json(const TailMeta& m);
nlohmann::json to_json(const TailValidation& v);
nlohmann::json to_json(const DoublingReport& r);
nlohmann::json to_json(const BoundCheckReport& r);
nlohmann::json to_json(const RatioStatistics& r);
nlohmann::json to_json(const ThinRayReport& r);
nlohmann::json to_json(const PairingReport& r);
nlohmann::json to_json(const TwoSidedEstimate& e);
nlohmann::json to_json(const CoverSolution& s);
nlohmann::json to_json(const ComparisonVerdict& v);

void write_file(const std::string& path, const std::string& content);

}  // namespace gwlab
