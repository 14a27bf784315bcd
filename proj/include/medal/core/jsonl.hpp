#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "medal/core/types.hpp"

namespace medal::core {

inline constexpr int kSchemaVersion = 1;

/// Controls applied when parsing persisted records.
struct ParseOptions {
    bool strict_keys = true;           // unknown keys are errors
    bool allow_extra_languages = false;
    int max_user_turns = 10;
};

// One newline-terminated UTF-8 JSON object per record, keys in fixed schema
// order (issue labels serialize in their canonical order). parse(serialize(x))
// round-trips byte-identically. Every serializer validates invariants first.
std::string serialize(const SeedContext& seed);
std::string serialize(const Dialogue& dialogue);
std::string serialize(const DialogueAssessment& assessment);
std::string serialize(const AnnotationRecord& record);
std::string serialize(const BenchmarkEntry& entry);

SeedContext parse_seed_context(const std::string& line, const ParseOptions& opts = {});
Dialogue parse_dialogue(const std::string& line, const ParseOptions& opts = {});
DialogueAssessment parse_assessment_record(const std::string& line, const ParseOptions& opts = {});
AnnotationRecord parse_annotation_record(const std::string& line, const ParseOptions& opts = {});
BenchmarkEntry parse_benchmark_entry(const std::string& line, const ParseOptions& opts = {});

// JSONL file readers. Parse failures are rethrown with "<path>:<line>:"
// prefixed so diagnostics point at the failing record.
std::vector<SeedContext> read_seed_contexts(const std::filesystem::path& path,
                                            const ParseOptions& opts = {});
std::vector<Dialogue> read_dialogues(const std::filesystem::path& path,
                                     const ParseOptions& opts = {});
std::vector<DialogueAssessment> read_assessments(const std::filesystem::path& path,
                                                 const ParseOptions& opts = {});
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path,
                                               const ParseOptions& opts = {});
std::vector<BenchmarkEntry> read_benchmark(const std::filesystem::path& path,
                                           const ParseOptions& opts = {});

template <typename Record>
std::string serialize_all(const std::vector<Record>& records) {
    std::string out;
    for (const auto& r : records) out += serialize(r);
    return out;
}

}  // namespace medal::core
