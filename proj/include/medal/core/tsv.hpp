#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "medal/core/types.hpp"

namespace medal::core {

// Annotator exchange format: tab-separated with a header row. Columns:
// dialogue_id, annotator_id, the eight issue labels in canonical order,
// overall, user_humanlikeness (may be empty).

std::string annotations_to_tsv(const std::vector<AnnotationRecord>& records);

std::vector<AnnotationRecord> annotations_from_tsv(const std::string& text,
                                                   const std::string& origin = "<string>");

std::vector<AnnotationRecord> read_annotation_tsv(const std::filesystem::path& path);

}  // namespace medal::core
