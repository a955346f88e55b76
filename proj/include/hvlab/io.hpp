#pragma once

// JSON file formats. Every number is a string in the scalar grammar, since a
// JSON number cannot hold sqrt2 exactly.
//
// BoxFile:
//   {"settings_a": [...], "settings_b": [...],
//    "outcomes_x": [...], "outcomes_y": [...],
//    "p": {"a|b": [[P(x0,y0), P(x0,y1), ...], [P(x1,y0), ...], ...], ...}}
//
// ModelFile: the four label arrays plus
//   "pairs": [{"u": ..., "v": ..., "weight": ..., "p": {...}}, ...]
// where a pair may carry "w_extension": [{"w": ..., "weight": ..., "p": {...}}]
// instead of "p".
//
// Bell coefficient file: the four label arrays plus "c" shaped like "p".

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "hvlab/bell.hpp"
#include "hvlab/hvmodel.hpp"

namespace hvlab::io {

using Json = nlohmann::ordered_json;

enum class FileKind { box, model, expression };

/// Throws ParseError for unreadable files or malformed JSON.
Json read_json(const std::filesystem::path& path);
Json parse_json(const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);
std::string dump(const Json& doc);

/// Classifies a document by its keys; throws ParseError when ambiguous.
FileKind detect_kind(const Json& doc);

/// Structural parse only; the behavior may still fail validate_behavior.
Behavior box_from_json(const Json& doc);
Json box_to_json(const Behavior& behavior);

using ModelDocument = std::variant<HiddenVariableModel, ExtendedModel>;

ModelDocument model_from_json(const Json& doc);
Json model_to_json(const HiddenVariableModel& model);
Json model_to_json(const ExtendedModel& model);

BellExpression expression_from_json(const Json& doc);
Json expression_to_json(const BellExpression& expression);

}  // namespace hvlab::io
