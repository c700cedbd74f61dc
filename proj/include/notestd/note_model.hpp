#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace notestd {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct SectionHistory {
    std::string chief_complaint;
    std::string interim_history;
    bool operator==(const SectionHistory&) const = default;
};

struct SectionVitals {
    std::string blood_pressure;
    std::string pulse;
    std::string temperature;
    std::string weight;
    bool operator==(const SectionVitals&) const = default;
};

struct SectionExam {
    std::string mental_status;
    std::string cranial_nerves;
    std::string motor;
    std::string sensory;
    std::string reflexes;
    std::string coordination;
    std::string gait_and_station;
    bool operator==(const SectionExam&) const = default;
};

struct SectionImpression {
    std::string assessment;
    bool operator==(const SectionImpression&) const = default;
};

struct EducationProvided {
    std::string instructions;
    std::string barriers_to_learning;
    std::string content;
    std::string outcome;
    bool operator==(const EducationProvided&) const = default;
};

struct SectionPlan {
    std::string testing;
    EducationProvided education_provided;
    std::string return_visit;
    bool operator==(const SectionPlan&) const = default;
};

struct NoteMetrics {
    long grammatical_errors = 0;
    std::vector<std::string> abbreviations_expanded;
    std::vector<std::string> spelling_errors;
    std::vector<std::string> non_standard_terms;
    bool operator==(const NoteMetrics&) const = default;
};

struct StandardizedNote {
    SectionHistory history;
    SectionVitals vital_signs;
    SectionExam examination;
    std::string labs;
    std::string radiology;
    SectionImpression impression;
    SectionPlan plan;
    NoteMetrics metrics;
    bool operator==(const StandardizedNote&) const = default;
};

enum class ViolationKind { MissingKey, WrongType, UnknownKey, BadValue };

struct Violation {
    std::string path; // JSON-pointer style, e.g. /Metrics/Grammatical Errors
    ViolationKind kind;
    std::string detail;
    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    bool valid = false;
    std::vector<Violation> violations;
};

const char* violation_kind_name(ViolationKind kind);

// Structural check of a parsed JSON value against the canonical note schema.
ValidationReport validate_note(const json& candidate);

// Salvage near-miss JSON: try as-is, then strip code fences, then trim prose
// outside the outermost braces, then drop trailing commas. Stops at the first
// pass that yields a JSON object. Throws Error(Unrepairable) otherwise.
json repair_json(const std::string& raw);

// Fill missing leaves with defaults ("" / [] / 0) and build the note.
// Throws Error(CoercionFailed) on unknown keys or wrong types.
StandardizedNote coerce_note(const json& candidate);

// Canonical serialized form with the external key names, in schema order.
ordered_json note_to_json(const StandardizedNote& note);
StandardizedNote note_from_json(const json& value); // validate + coerce, throws CoercionFailed

std::string serialize_note_pretty(const StandardizedNote& note);  // 4-space indent
std::string serialize_note_compact(const StandardizedNote& note); // for JSONL

// Every external key of the canonical schema as a JSON-pointer-style path
// ("/HISTORY", "/HISTORY/Chief Complaint", ...), in schema order.
const std::vector<std::string>& schema_key_paths();

// Leaf content fields (Metrics excluded), as "SECTION/Subsection" paths in
// schema order, paired with accessors.
struct LeafRef {
    std::string path;
    const std::string* value;
};
std::vector<LeafRef> note_content_leaves(const StandardizedNote& note);
std::string* leaf_by_path(StandardizedNote& note, const std::string& path);

// Tokens of all external key names, lowercased, with multiplicity (one entry
// per occurrence across key paths). Used by the completeness diff: consumed
// heading lines reappear as serialized keys rather than content.
const std::vector<std::string>& schema_key_tokens();

} // namespace notestd
