#pragma once

#include <json.hpp>

#include "coarsekit/constructions.hpp"

namespace coarsekit::io {

using nlohmann::json;

json to_json(const PointSet& ps);
PointSet pointset_from_json(const json& j);

json to_json(const KernelMatrix& k);
KernelMatrix kernel_from_json(const json& j);

json to_json(const EmbeddingCoordinates& e);
EmbeddingCoordinates embedding_from_json(const json& j);
std::string to_csv(const EmbeddingCoordinates& e);

/// phi/omega infinities serialize as the string "inf".
json to_json(const ModulusProfile& p);
std::string to_csv(const ModulusProfile& p);

json to_json(const DefinitenessVerdict& v);

json to_json(const ScaleFamily& f);
ScaleFamily family_from_json(const json& j);

json to_json(const StageReport& r);
json to_json(const PipelineResult& r);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

}  // namespace coarsekit::io
