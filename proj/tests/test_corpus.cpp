#include "notestd/corpus.hpp"
#include "notestd/errors.hpp"
#include "notestd/prng.hpp"
#include "notestd/text.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace notestd;

namespace {

// Minimal reference reader for simple (unquoted, single-line) CSV fixtures;
// keeps the row-order oracle independent of the production parser.
std::vector<std::string> reference_rows(const std::string& csv, std::size_t column) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(field);
                field.clear();
            } else {
                field.push_back(c);
            }
        }
        fields.push_back(field);
        rows.push_back(fields.at(column));
    }
    return rows;
}

std::vector<SourceNote> random_notes(std::size_t n, Prng& rng) {
    std::vector<SourceNote> notes;
    for (std::size_t i = 0; i < n; ++i) {
        std::string body;
        std::size_t words = 3 + rng.bounded(40);
        for (std::size_t w = 0; w < words; ++w) {
            body += "word" + std::to_string(rng.bounded(500));
            body += (w + 1 < words) ? " " : ".";
        }
        notes.push_back({std::to_string(i + 1), body});
    }
    return notes;
}

} // namespace

TEST_CASE("parse_corpus_csv reads the sample clinic note") {
    std::string csv = test_support::read_file(test_support::data_dir() + "/neuro.csv");
    auto notes = parse_corpus_csv(csv, "note_text");
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].accession_num == "1");
    CHECK(notes[0].note_text.find("NEUROLOGY CLINIC NOTE") == 0);
    CHECK(notes[0].note_text.find("methlylprednisolone") != std::string::npos);
}

TEST_CASE("parse_corpus_csv assigns sequential accessions in row order") {
    std::string csv = "id,note_text\n";
    for (int i = 0; i < 5; ++i) {
        csv += "row" + std::to_string(i) + ",note body number " + std::to_string(i) + "\n";
    }
    auto notes = parse_corpus_csv(csv, "note_text");
    auto expected = reference_rows(csv, 1);
    REQUIRE(notes.size() == expected.size());
    for (std::size_t i = 0; i < notes.size(); ++i) {
        CHECK(notes[i].accession_num == std::to_string(i + 1));
        CHECK(notes[i].note_text == expected[i]);
    }
}

TEST_CASE("parse_corpus_csv error paths") {
    CHECK_THROWS_AS(parse_corpus_csv("note_text\n", "note_text"), Error);
    try {
        parse_corpus_csv("note_text\n", "note_text");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyCorpus);
    }

    try {
        parse_corpus_csv("a,b\n1,2\n", "note_text");
        FAIL("expected MissingColumn");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingColumn);
    }

    std::string bad = "note_text\nabc\xFF\xFE\n";
    try {
        parse_corpus_csv(bad, "note_text");
        FAIL("expected EncodingError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EncodingError);
    }

    try {
        parse_corpus_csv("id,note_text\n7,alpha\n7,beta\n", "note_text", std::string("id"));
        FAIL("expected DuplicateAccession");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DuplicateAccession);
    }
}

TEST_CASE("parse_corpus_csv honors the id column") {
    auto notes = parse_corpus_csv("acc,note_text\n42,hello note\n43,other note\n", "note_text",
                                  std::string("acc"));
    REQUIRE(notes.size() == 2);
    CHECK(notes[0].accession_num == "42");
    CHECK(notes[1].accession_num == "43");
}

TEST_CASE("filter_notes enforces the length threshold") {
    SourceNote big{"1", std::string(6423, 'x')};
    SourceNote boundary{"2", std::string(1999, 'x')};
    SourceNote exact{"3", std::string(2000, 'x')};
    auto kept = filter_notes({big, boundary, exact}, FilterCriteria{});
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].accession_num == "1");
    CHECK(kept[1].accession_num == "3");
}

TEST_CASE("filter_notes drop count matches an independent scan") {
    Prng rng(11);
    std::vector<SourceNote> notes;
    for (int i = 0; i < 10; ++i) {
        std::size_t len = (i % 5 < 2) ? 500 + rng.bounded(1000) : 2200 + rng.bounded(3000);
        notes.push_back({std::to_string(i + 1), std::string(len, 'a')});
    }
    std::size_t expect_kept = 0;
    for (const auto& note : notes) {
        if (note.note_text.size() >= 2000) ++expect_kept;
    }
    REQUIRE(expect_kept == 6);
    auto outcome = filter_notes_audited(notes, FilterCriteria{});
    CHECK(outcome.kept.size() == expect_kept);
    CHECK(outcome.dropped.size() == notes.size() - expect_kept);
    for (const auto& d : outcome.dropped) CHECK(d.reason.find("min_chars") != std::string::npos);
}

TEST_CASE("filter_notes is idempotent and order preserving") {
    Prng rng(17);
    auto notes = random_notes(60, rng);
    FilterCriteria criteria;
    criteria.min_chars = 120;
    auto once = filter_notes(notes, criteria);
    auto twice = filter_notes(once, criteria);
    CHECK(once == twice);
    // order preserved: accessions strictly increasing
    for (std::size_t i = 1; i < once.size(); ++i) {
        CHECK(std::stol(once[i - 1].accession_num) < std::stol(once[i].accession_num));
    }
}

TEST_CASE("character counting uses Unicode scalars") {
    // two-byte scalar counts once
    std::string text = "caf\xC3\xA9";
    CHECK(text::count_scalars(text) == 4);
    SourceNote note{"1", std::string(1999, 'x') + "\xC3\xA9"};
    CHECK(filter_notes({note}, FilterCriteria{}).size() == 1);
}

TEST_CASE("jsonl round-trip") {
    SUBCASE("empty list") {
        std::ostringstream sink;
        CHECK(write_notes_jsonl({}, sink) == 0);
        CHECK(sink.str().empty());
        std::istringstream source("");
        CHECK(read_notes_jsonl(source).empty());
    }

    SUBCASE("sample object") {
        std::string csv = test_support::read_file(test_support::data_dir() + "/neuro.csv");
        auto notes = parse_corpus_csv(csv, "note_text");
        std::ostringstream sink;
        write_notes_jsonl(notes, sink);
        std::istringstream source(sink.str());
        auto back = read_notes_jsonl(source);
        CHECK(back == notes);
    }

    SUBCASE("serialize-parse-serialize fixpoint on random corpus") {
        Prng rng(23);
        auto notes = random_notes(100, rng);
        std::ostringstream first;
        write_notes_jsonl(notes, first);
        std::istringstream source(first.str());
        auto back = read_notes_jsonl(source);
        std::ostringstream second;
        write_notes_jsonl(back, second);
        CHECK(first.str() == second.str());
    }
}

TEST_CASE("read_notes_jsonl reports the offending line") {
    std::istringstream source("{\"accession_num\":\"1\",\"note_text\":\"ok\"}\nnot json\n");
    try {
        read_notes_jsonl(source);
        FAIL("expected MalformedLine");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedLine);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    std::istringstream dup(
        "{\"accession_num\":\"1\",\"note_text\":\"a\"}\n{\"accession_num\":\"1\",\"note_text\":\"b\"}\n");
    try {
        read_notes_jsonl(dup);
        FAIL("expected DuplicateAccession");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DuplicateAccession);
    }
}
