#pragma once

#include "notestd/extraction.hpp"
#include "notestd/note_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace notestd {

enum class CodeSystem { SnomedCt, RxNorm, Loinc, Icd };

const char* code_system_name(CodeSystem system);
const char* code_system_uri(CodeSystem system);
std::optional<CodeSystem> code_system_from_name(const std::string& name);

struct ConceptMapEntry {
    std::string normalized_term; // lowercase
    CodeSystem system = CodeSystem::SnomedCt;
    std::string code;
    std::string display;
    bool operator==(const ConceptMapEntry&) const = default;
};

struct ConceptMap {
    std::vector<ConceptMapEntry> entries;
};

// JSON file: [{"term": "...", "system": "SNOMED-CT", "code": "...", "display": "..."}]
ConceptMap load_concept_map(const std::string& path);

// Exact normalized-term lookup in the preferred system, then fallback order
// SNOMED-CT -> RxNorm -> LOINC -> ICD. Empty optional = unmapped.
std::optional<ConceptMapEntry> map_to_ontology(const Mention& mention, const ConceptMap& table,
                                               CodeSystem preferred_system);

enum class ResourceType { Observation, MedicationStatement };

const char* resource_type_name(ResourceType type);

struct InteropResource {
    ResourceType resource_type = ResourceType::Observation;
    std::string subject_ref; // accession-derived pseudo-id
    std::optional<ConceptMapEntry> coding; // absent = unmapped, text-only payload
    std::string text;                      // surface form
    std::string section_provenance;
    bool operator==(const InteropResource&) const = default;
};

// Medication mentions become MedicationStatements, Findings become Observations.
InteropResource to_resource(const Mention& mention, const std::optional<ConceptMapEntry>& mapping);

ordered_json resource_to_json(const InteropResource& resource);

// {"resourceType": "Bundle", "type": "collection", "entry": [...]} in input order.
ordered_json bundle(const std::vector<InteropResource>& resources);
std::string bundle_to_string(const std::vector<InteropResource>& resources);

// Recovers (code-or-empty, text, provenance) triples from an emitted bundle.
struct BundleEntrySummary {
    std::string resource_type;
    std::string code; // empty when unmapped
    std::string text;
    std::string provenance;
    bool operator==(const BundleEntrySummary&) const = default;
};
std::vector<BundleEntrySummary> parse_bundle(const json& doc);

} // namespace notestd
