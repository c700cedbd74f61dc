#include "notestd/errors.hpp"
#include "notestd/note_model.hpp"
#include "notestd/prng.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <set>

using namespace notestd;

namespace {

json golden() {
    return json::parse(test_support::read_file(test_support::data_dir() + "/golden_note.json"));
}

// Independent oracle for the prose-trimming repair pass.
json outer_brace_parse(const std::string& raw) {
    auto first = raw.find('{');
    auto last = raw.rfind('}');
    REQUIRE(first != std::string::npos);
    return json::parse(raw.substr(first, last - first + 1));
}

// Independent trailing-comma scrubber (string-aware), used as the oracle for
// the third repair pass.
std::string scrub_trailing_commas(const std::string& s) {
    std::string out;
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            out.push_back(c);
            if (c == '\\' && i + 1 < s.size()) {
                out.push_back(s[++i]);
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') in_string = true;
        if (c == ',') {
            std::size_t j = i + 1;
            while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && (s[j] == '}' || s[j] == ']')) continue;
        }
        out.push_back(c);
    }
    return out;
}

StandardizedNote random_note(Prng& rng) {
    auto word = [&]() { return "w" + std::to_string(rng.bounded(100)); };
    auto sentence = [&]() {
        std::string out;
        std::size_t n = rng.bounded(8);
        for (std::size_t i = 0; i < n; ++i) out += word() + " ";
        return out;
    };
    StandardizedNote note;
    note.history.chief_complaint = sentence();
    note.history.interim_history = sentence();
    note.vital_signs.blood_pressure = sentence();
    note.examination.motor = sentence();
    note.examination.reflexes = sentence();
    note.labs = sentence();
    note.radiology = sentence();
    note.impression.assessment = sentence();
    note.plan.testing = sentence();
    note.plan.return_visit = sentence();
    note.metrics.grammatical_errors = static_cast<long>(rng.bounded(10));
    for (std::size_t i = 0; i < rng.bounded(5); ++i) {
        note.metrics.abbreviations_expanded.push_back(word() + " -> " + word());
    }
    for (std::size_t i = 0; i < rng.bounded(4); ++i) {
        note.metrics.spelling_errors.push_back(word() + " -> " + word());
    }
    return note;
}

void collect_paths(const ordered_json& value, const std::string& prefix,
                   std::vector<std::string>& out) {
    if (!value.is_object()) return;
    for (auto it = value.begin(); it != value.end(); ++it) {
        std::string path = prefix + "/" + it.key();
        out.push_back(path);
        collect_paths(it.value(), path, out);
    }
}

} // namespace

TEST_CASE("the golden note validates cleanly") {
    ValidationReport report = validate_note(golden());
    CHECK(report.valid);
    CHECK(report.violations.empty());
}

TEST_CASE("an empty object is missing all eight top-level keys") {
    ValidationReport report = validate_note(json::object());
    CHECK_FALSE(report.valid);
    CHECK(report.violations.size() == 8);
    std::set<std::string> paths;
    for (const auto& v : report.violations) {
        CHECK(v.kind == ViolationKind::MissingKey);
        paths.insert(v.path);
    }
    CHECK(paths.count("/HISTORY"));
    CHECK(paths.count("/Metrics"));
}

TEST_CASE("single-field mutations produce exactly one violation at the path") {
    json note = golden();
    note["Metrics"]["Grammatical Errors"] = "three";
    ValidationReport report = validate_note(note);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].path == "/Metrics/Grammatical Errors");
    CHECK(report.violations[0].kind == ViolationKind::WrongType);

    json unknown = golden();
    unknown["EXAMINATION"]["Pupils"] = "equal";
    report = validate_note(unknown);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].path == "/EXAMINATION/Pupils");
    CHECK(report.violations[0].kind == ViolationKind::UnknownKey);

    json bad_value = golden();
    bad_value["Metrics"]["Grammatical Errors"] = -1;
    report = validate_note(bad_value);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::BadValue);
}

TEST_CASE("repair_json strips fences, prose, and trailing commas") {
    CHECK(repair_json("```json\n{\"a\":1}\n```") == json{{"a", 1}});
    CHECK(repair_json("{\"a\":1}") == json{{"a", 1}});

    std::string prose = "Here is the note: {\"a\":1} Hope this helps.";
    CHECK(repair_json(prose) == outer_brace_parse(prose));

    std::string trailing = "{\"a\":1,}";
    CHECK(repair_json(trailing) == json::parse(scrub_trailing_commas(trailing)));

    std::string nested = "Sure!\n```json\n{\"a\": [1, 2,], \"b\": {\"c\": 3,},}\n```\ndone";
    json repaired = repair_json(nested);
    CHECK(repaired["a"] == json::array({1, 2}));
    CHECK(repaired["b"]["c"] == 3);

    CHECK_THROWS_AS(repair_json("I cannot do that"), Error);
    try {
        repair_json("no braces here");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Unrepairable);
    }
}

TEST_CASE("coerce_note fills missing leaves and rejects structural damage") {
    SUBCASE("identity on a valid note") {
        StandardizedNote note = coerce_note(golden());
        CHECK(json(note_to_json(note)) == golden());
    }

    SUBCASE("missing leaf becomes empty string") {
        json damaged = golden();
        damaged["PLAN"].erase("Return Visit");
        StandardizedNote note = coerce_note(damaged);
        CHECK(note.plan.return_visit == "");
        ordered_json out = note_to_json(note);
        json expected = golden();
        expected["PLAN"]["Return Visit"] = "";
        CHECK(json(out) == expected);
    }

    SUBCASE("missing Metrics lists become empty") {
        json damaged = golden();
        damaged["Metrics"].erase("Spelling Errors");
        StandardizedNote note = coerce_note(damaged);
        CHECK(note.metrics.spelling_errors.empty());
        CHECK(validate_note(note_to_json(note)).valid);
    }

    SUBCASE("section with wrong type fails") {
        json damaged = golden();
        damaged["HISTORY"] = "free text";
        CHECK_THROWS_AS(coerce_note(damaged), Error);
        try {
            coerce_note(damaged);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::CoercionFailed);
        }
    }

    SUBCASE("unknown key fails") {
        json damaged = golden();
        damaged["EXTRA"] = 1;
        CHECK_THROWS_AS(coerce_note(damaged), Error);
    }

    SUBCASE("idempotence") {
        json partial = golden();
        partial["PLAN"].erase("Education Provided");
        StandardizedNote once = coerce_note(partial);
        StandardizedNote twice = coerce_note(json(note_to_json(once)));
        CHECK(once == twice);
    }
}

TEST_CASE("serialization round-trips random notes") {
    Prng rng(31);
    for (int i = 0; i < 50; ++i) {
        StandardizedNote note = random_note(rng);
        std::string compact = serialize_note_compact(note);
        StandardizedNote back = note_from_json(json::parse(compact));
        CHECK(back == note);
        // pretty form parses to the same document
        CHECK(json::parse(serialize_note_pretty(note)) == json::parse(compact));
    }
}

TEST_CASE("serialized notes carry exactly the canonical key set") {
    StandardizedNote note = coerce_note(golden());
    std::vector<std::string> actual;
    collect_paths(note_to_json(note), "", actual);
    // Metrics lists are arrays, not objects, so traversal yields key paths only.
    CHECK(actual == schema_key_paths());
    CHECK(schema_key_paths().size() == 33);
}

TEST_CASE("leaf access covers every content field") {
    StandardizedNote note = coerce_note(golden());
    auto leaves = note_content_leaves(note);
    CHECK(leaves.size() == 22);
    for (const auto& leaf : leaves) {
        CHECK(leaf_by_path(note, leaf.path) == leaf.value);
    }
    CHECK(leaf_by_path(note, "PLAN/Nope") == nullptr);
}
