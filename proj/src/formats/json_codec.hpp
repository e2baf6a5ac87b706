#pragma once

#include <string>

#include "json.hpp"
#include "segtrack/geometry.hpp"

namespace segtrack::detail {

using ordered_json = nlohmann::ordered_json;

// Throws kSchemaError with `where` prefixed to the message.
Segmentation segmentation_from_json(const nlohmann::json& j, const std::string& where);
ordered_json segmentation_to_json(const Segmentation& seg);

BoundingBox bbox_from_json(const nlohmann::json& j, const std::string& where);
ordered_json bbox_to_json(const BoundingBox& box);

}  // namespace segtrack::detail
