#pragma once

#include <filesystem>
#include <string>

#include "hfstrat/stacking.hpp"
#include "hfstrat/svc.hpp"

namespace hfstrat {

/// Bumped whenever a serialized layout changes shape; loaders reject other
/// versions instead of guessing.
inline constexpr int kModelFormatVersion = 1;

// Every document is self-describing JSON: {"format_version", "model", ...}.
// Doubles survive the round trip bit-exactly (shortest-round-trip printing
// on write, correctly rounded parse on read).
std::string model_to_json(const LogisticModel& m);
std::string model_to_json(const DecisionTreeModel& m);
std::string model_to_json(const RandomForestModel& m);
std::string model_to_json(const SvcModel& m);
std::string ensemble_to_json(const StackingEnsemble& e);

LogisticModel logistic_from_json(const std::string& text);
DecisionTreeModel tree_from_json(const std::string& text);
RandomForestModel forest_from_json(const std::string& text);
SvcModel svc_from_json(const std::string& text);
StackingEnsemble ensemble_from_json(const std::string& text);

void save_text_file(const std::filesystem::path& path, const std::string& content);
std::string load_text_file(const std::filesystem::path& path);

}  // namespace hfstrat
