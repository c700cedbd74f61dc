#include "notestd/interop.hpp"

#include "notestd/errors.hpp"
#include "notestd/text.hpp"

#include <array>
#include <fstream>
#include <set>

namespace notestd {

const char* code_system_name(CodeSystem system) {
    switch (system) {
        case CodeSystem::SnomedCt: return "SNOMED-CT";
        case CodeSystem::RxNorm: return "RxNorm";
        case CodeSystem::Loinc: return "LOINC";
        case CodeSystem::Icd: return "ICD";
    }
    return "?";
}

const char* code_system_uri(CodeSystem system) {
    switch (system) {
        case CodeSystem::SnomedCt: return "http://snomed.info/sct";
        case CodeSystem::RxNorm: return "http://www.nlm.nih.gov/research/umls/rxnorm";
        case CodeSystem::Loinc: return "http://loinc.org";
        case CodeSystem::Icd: return "http://hl7.org/fhir/sid/icd-10";
    }
    return "?";
}

std::optional<CodeSystem> code_system_from_name(const std::string& name) {
    if (name == "SNOMED-CT" || name == "SNOMED CT" || name == "SNOMED") return CodeSystem::SnomedCt;
    if (name == "RxNorm" || name == "RXNORM") return CodeSystem::RxNorm;
    if (name == "LOINC") return CodeSystem::Loinc;
    if (name == "ICD" || name == "ICD-10") return CodeSystem::Icd;
    return std::nullopt;
}

ConceptMap load_concept_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw Error(ErrorKind::ResourceInvalid, path + ": expected a JSON array");
    }
    ConceptMap map;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& item : doc) {
        ConceptMapEntry entry;
        entry.normalized_term = text::to_lower(item.at("term").get<std::string>());
        auto system = code_system_from_name(item.at("system").get<std::string>());
        if (!system) {
            throw Error(ErrorKind::ResourceInvalid,
                        path + ": unknown system '" + item["system"].get<std::string>() + "'");
        }
        entry.system = *system;
        entry.code = item.at("code").get<std::string>();
        entry.display = item.value("display", entry.normalized_term);
        if (entry.code.empty()) {
            throw Error(ErrorKind::ResourceInvalid,
                        path + ": empty code for '" + entry.normalized_term + "'");
        }
        if (!seen.insert({entry.normalized_term, code_system_name(entry.system)}).second) {
            throw Error(ErrorKind::ResourceInvalid, path + ": duplicate (term, system) for '" +
                                                        entry.normalized_term + "'");
        }
        map.entries.push_back(std::move(entry));
    }
    return map;
}

std::optional<ConceptMapEntry> map_to_ontology(const Mention& mention, const ConceptMap& table,
                                               CodeSystem preferred_system) {
    auto lookup = [&](CodeSystem system) -> std::optional<ConceptMapEntry> {
        for (const auto& entry : table.entries) {
            if (entry.system == system && entry.normalized_term == mention.normalized) return entry;
        }
        return std::nullopt;
    };
    if (auto hit = lookup(preferred_system)) return hit;
    static constexpr std::array<CodeSystem, 4> fallback = {CodeSystem::SnomedCt, CodeSystem::RxNorm,
                                                           CodeSystem::Loinc, CodeSystem::Icd};
    for (CodeSystem system : fallback) {
        if (system == preferred_system) continue;
        if (auto hit = lookup(system)) return hit;
    }
    return std::nullopt;
}

const char* resource_type_name(ResourceType type) {
    return type == ResourceType::Observation ? "Observation" : "MedicationStatement";
}

InteropResource to_resource(const Mention& mention, const std::optional<ConceptMapEntry>& mapping) {
    InteropResource resource;
    resource.resource_type = mention.kind == MentionKind::Medication
                                 ? ResourceType::MedicationStatement
                                 : ResourceType::Observation;
    resource.subject_ref = "Patient/note-" + mention.accession_num;
    resource.coding = mapping;
    resource.text = mention.surface;
    resource.section_provenance = mention.section_path;
    return resource;
}

ordered_json resource_to_json(const InteropResource& resource) {
    ordered_json out;
    out["resourceType"] = resource_type_name(resource.resource_type);
    out["status"] = "unknown";
    ordered_json code;
    if (resource.coding) {
        code["coding"] = json::array({json{{"system", code_system_uri(resource.coding->system)},
                                           {"code", resource.coding->code},
                                           {"display", resource.coding->display}}});
    }
    code["text"] = resource.text;
    out["code"] = std::move(code);
    out["subject"] = {{"reference", resource.subject_ref}};
    out["note"] = json::array({json{{"text", resource.section_provenance}}});
    return out;
}

ordered_json bundle(const std::vector<InteropResource>& resources) {
    ordered_json doc;
    doc["resourceType"] = "Bundle";
    doc["type"] = "collection";
    ordered_json entries = ordered_json::array();
    for (const auto& resource : resources) {
        ordered_json entry;
        entry["resource"] = resource_to_json(resource);
        entries.push_back(std::move(entry));
    }
    doc["entry"] = std::move(entries);
    return doc;
}

std::string bundle_to_string(const std::vector<InteropResource>& resources) {
    return bundle(resources).dump(4) + "\n";
}

std::vector<BundleEntrySummary> parse_bundle(const json& doc) {
    std::vector<BundleEntrySummary> out;
    if (!doc.is_object() || doc.value("resourceType", "") != "Bundle") {
        throw Error(ErrorKind::MalformedLine, "not a Bundle document");
    }
    for (const auto& entry : doc.at("entry")) {
        const json& resource = entry.at("resource");
        BundleEntrySummary summary;
        summary.resource_type = resource.at("resourceType").get<std::string>();
        const json& code = resource.at("code");
        if (code.contains("coding") && code["coding"].is_array() && !code["coding"].empty()) {
            summary.code = code["coding"][0].value("code", "");
        }
        summary.text = code.value("text", "");
        if (resource.contains("note") && resource["note"].is_array() && !resource["note"].empty()) {
            summary.provenance = resource["note"][0].value("text", "");
        }
        out.push_back(std::move(summary));
    }
    return out;
}

} // namespace notestd
