#pragma once

#include "notestd/note_model.hpp"

#include <string>
#include <vector>

namespace notestd {

enum class MentionKind { Medication, Finding };

const char* mention_kind_name(MentionKind kind);

struct Mention {
    std::string accession_num;
    MentionKind kind = MentionKind::Medication;
    std::string surface;      // as found in the note
    std::string normalized;   // gazetteer canonical name, lowercase
    std::string section_path; // e.g. "PLAN/Testing"
    bool operator==(const Mention&) const = default;
};

struct GazetteerEntry {
    std::string canonical;             // lowercase
    std::vector<std::string> synonyms; // matched case-insensitively
    bool operator==(const GazetteerEntry&) const = default;
};

struct Gazetteer {
    std::vector<GazetteerEntry> entries;
};

// JSON file: [{"canonical": "...", "synonyms": ["...", ...]}, ...]
Gazetteer load_gazetteer(const std::string& path);

// Scans PLAN subsections only; longest-match, case-insensitive; one mention
// per (note, normalized).
std::vector<Mention> extract_medications(const std::string& accession, const StandardizedNote& note,
                                         const Gazetteer& gazetteer);

// Scans HISTORY, EXAMINATION and IMPRESSION; one mention per
// (note, normalized, section_path).
std::vector<Mention> extract_findings(const std::string& accession, const StandardizedNote& note,
                                      const Gazetteer& gazetteer);

enum class CountMode {
    PerNotePresence, // distinct (accession, normalized) pairs
    RawOccurrences,  // every mention row
};

struct FrequencyRow {
    std::string normalized;
    long count = 0;
    bool operator==(const FrequencyRow&) const = default;
};

struct FrequencyTable {
    std::vector<FrequencyRow> rows; // count descending, ties alphabetical
    long total_mentions = 0;
};

FrequencyTable frequency_table(const std::vector<Mention>& mentions, MentionKind kind,
                               CountMode mode = CountMode::PerNotePresence);

// Mention <-> JSONL line.
ordered_json mention_to_json(const Mention& mention);
Mention mention_from_json(const json& value);

// LLM-assisted extraction: prompt template asking for a JSON array of
// mentions over the relevant sections of one standardized note.
std::string build_extraction_prompt(const std::string& accession, const StandardizedNote& note,
                                    MentionKind kind);

struct LlmExtractionResult {
    std::vector<Mention> mentions;      // section-confined, schema-valid entries
    std::vector<std::string> rejected;  // raw entries that failed validation
    bool parse_ok = false;
};

// Parses a model reply (JSON array of {surface, normalized, section}) and
// enforces the section confinement invariant for the given kind.
LlmExtractionResult parse_extraction_response(const std::string& accession, const std::string& raw,
                                              MentionKind kind);

} // namespace notestd
