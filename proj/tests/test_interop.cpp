#include "notestd/interop.hpp"
#include "notestd/prng.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace notestd;

namespace {

ConceptMap fixture_table() {
    ConceptMap table;
    table.entries.push_back({"myocardial infarction", CodeSystem::SnomedCt, "T-0001", "MI"});
    table.entries.push_back({"gabapentin", CodeSystem::RxNorm, "T-0002", "Gabapentin"});
    table.entries.push_back({"fatigue", CodeSystem::SnomedCt, "T-0003", "Fatigue"});
    table.entries.push_back({"fatigue", CodeSystem::Icd, "T-0004", "Fatigue ICD"});
    table.entries.push_back({"fatigue", CodeSystem::Loinc, "T-0005", "Fatigue LOINC"});
    return table;
}

Mention finding(const std::string& term, const std::string& section = "HISTORY/Interim History") {
    Mention m;
    m.accession_num = "12";
    m.kind = MentionKind::Finding;
    m.surface = term;
    m.normalized = term;
    m.section_path = section;
    return m;
}

Mention medication(const std::string& term) {
    Mention m;
    m.accession_num = "12";
    m.kind = MentionKind::Medication;
    m.surface = term;
    m.normalized = term;
    m.section_path = "PLAN/Testing";
    return m;
}

} // namespace

TEST_CASE("map_to_ontology hits the preferred system first") {
    ConceptMap table = fixture_table();
    auto hit = map_to_ontology(finding("myocardial infarction"), table, CodeSystem::SnomedCt);
    REQUIRE(hit.has_value());
    CHECK(hit->code == "T-0001");

    auto unmapped = map_to_ontology(finding("zzz"), table, CodeSystem::SnomedCt);
    CHECK_FALSE(unmapped.has_value());

    // only an RxNorm row exists; preferred RxNorm finds it directly
    auto rx = map_to_ontology(medication("gabapentin"), table, CodeSystem::RxNorm);
    REQUIRE(rx.has_value());
    CHECK(rx->system == CodeSystem::RxNorm);

    // preferred SNOMED misses, fallback reaches RxNorm
    auto fallback = map_to_ontology(medication("gabapentin"), table, CodeSystem::SnomedCt);
    REQUIRE(fallback.has_value());
    CHECK(fallback->code == "T-0002");
}

TEST_CASE("fallback order is SNOMED, RxNorm, LOINC, ICD") {
    ConceptMap table = fixture_table();
    // preferred RxNorm misses for fatigue; SNOMED row should win over LOINC and ICD
    auto hit = map_to_ontology(finding("fatigue"), table, CodeSystem::RxNorm);
    REQUIRE(hit.has_value());
    CHECK(hit->system == CodeSystem::SnomedCt);

    ConceptMap no_snomed;
    no_snomed.entries.push_back({"fatigue", CodeSystem::Icd, "I-1", "x"});
    no_snomed.entries.push_back({"fatigue", CodeSystem::Loinc, "L-1", "x"});
    auto loinc = map_to_ontology(finding("fatigue"), no_snomed, CodeSystem::RxNorm);
    REQUIRE(loinc.has_value());
    CHECK(loinc->system == CodeSystem::Loinc);
}

TEST_CASE("to_resource maps kinds to resource types") {
    ConceptMap table = fixture_table();
    auto mapping = map_to_ontology(finding("fatigue"), table, CodeSystem::SnomedCt);
    InteropResource observation = to_resource(finding("fatigue"), mapping);
    CHECK(observation.resource_type == ResourceType::Observation);
    CHECK(observation.subject_ref == "Patient/note-12");
    CHECK(observation.section_provenance == "HISTORY/Interim History");

    ordered_json body = resource_to_json(observation);
    CHECK(body["resourceType"] == "Observation");
    CHECK(body["status"] == "unknown");
    CHECK(body["code"]["coding"][0]["system"] == "http://snomed.info/sct");
    CHECK(body["code"]["coding"][0]["code"] == "T-0003");
    CHECK(body["code"]["text"] == "fatigue");
    CHECK(body["subject"]["reference"] == "Patient/note-12");

    InteropResource statement = to_resource(medication("ocrelizumab"), std::nullopt);
    CHECK(statement.resource_type == ResourceType::MedicationStatement);
    ordered_json med_body = resource_to_json(statement);
    CHECK(med_body["resourceType"] == "MedicationStatement");
    CHECK_FALSE(med_body["code"].contains("coding")); // unmapped: text-only payload
    CHECK(med_body["code"]["text"] == "ocrelizumab");
}

TEST_CASE("bundles preserve order and round-trip their payload") {
    CHECK(bundle({})["entry"].empty());

    ConceptMap table = fixture_table();
    std::vector<InteropResource> resources;
    resources.push_back(to_resource(finding("fatigue"),
                                    map_to_ontology(finding("fatigue"), table, CodeSystem::SnomedCt)));
    resources.push_back(to_resource(medication("gabapentin"),
                                    map_to_ontology(medication("gabapentin"), table, CodeSystem::RxNorm)));
    resources.push_back(to_resource(medication("zzz"), std::nullopt));

    ordered_json doc = bundle(resources);
    CHECK(doc["resourceType"] == "Bundle");
    CHECK(doc["type"] == "collection");
    REQUIRE(doc["entry"].size() == 3);

    auto entries = parse_bundle(json::parse(doc.dump()));
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].resource_type == "Observation");
    CHECK(entries[0].code == "T-0003");
    CHECK(entries[0].text == "fatigue");
    CHECK(entries[0].provenance == "HISTORY/Interim History");
    CHECK(entries[1].resource_type == "MedicationStatement");
    CHECK(entries[1].code == "T-0002");
    CHECK(entries[2].code == ""); // unmapped
    CHECK(entries[2].text == "zzz");
}

TEST_CASE("every mention becomes exactly one resource of the right type") {
    Prng rng(61);
    ConceptMap table = fixture_table();
    std::vector<Mention> mentions;
    for (int i = 0; i < 50; ++i) {
        bool med = rng.bounded(2) == 0;
        Mention m = med ? medication("drug" + std::to_string(rng.bounded(5)))
                        : finding("sign" + std::to_string(rng.bounded(5)));
        mentions.push_back(m);
    }
    std::vector<InteropResource> resources;
    for (const auto& m : mentions) {
        resources.push_back(to_resource(m, map_to_ontology(m, table, CodeSystem::SnomedCt)));
    }
    REQUIRE(resources.size() == mentions.size());
    for (std::size_t i = 0; i < mentions.size(); ++i) {
        bool is_med = mentions[i].kind == MentionKind::Medication;
        CHECK((resources[i].resource_type == ResourceType::MedicationStatement) == is_med);
    }
}

TEST_CASE("shipped concept map loads and covers the gazetteer heads") {
    ConceptMap map = load_concept_map(test_support::resources_dir() + "/concept_map.json");
    CHECK(map.entries.size() >= 60);
    bool found = false;
    for (const auto& entry : map.entries) {
        if (entry.normalized_term == "ocrelizumab" && entry.system == CodeSystem::RxNorm) {
            found = true;
        }
    }
    CHECK(found);
}
