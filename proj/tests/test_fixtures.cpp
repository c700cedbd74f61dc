#include "notestd/fixtures.hpp"
#include "notestd/pipeline.hpp"
#include "notestd/rules_engine.hpp"
#include "notestd/text.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

using namespace notestd;

namespace {

const StandardizationResources& shipped() {
    static const StandardizationResources resources = load_resources(test_support::resources_dir());
    return resources;
}

} // namespace

TEST_CASE("generation is deterministic in the seed") {
    GeneratedCorpus a = generate_corpus(5, 1001);
    GeneratedCorpus b = generate_corpus(5, 1001);
    REQUIRE(a.notes.size() == b.notes.size());
    for (std::size_t i = 0; i < a.notes.size(); ++i) {
        CHECK(a.notes[i] == b.notes[i]);
        CHECK(ledger_to_json(a.ledgers[i]).dump() == ledger_to_json(b.ledgers[i]).dump());
    }
    GeneratedCorpus c = generate_corpus(5, 1002);
    CHECK(a.notes[0].note_text != c.notes[0].note_text);
}

TEST_CASE("all-zero profile produces clean notes and empty ledgers") {
    GeneratorOptions options;
    options.profile = GeneratorProfile::all_zero();
    GeneratedCorpus corpus = generate_corpus(5, 1003, options);
    for (std::size_t i = 0; i < corpus.notes.size(); ++i) {
        CHECK(corpus.ledgers[i].planted.empty());
        StandardizedNote note = standardize_rule_based(corpus.notes[i], shipped());
        CHECK(note.metrics.grammatical_errors == 0);
        CHECK(note.metrics.spelling_errors.empty());
        CHECK(note.metrics.abbreviations_expanded.empty());
        CHECK(note.metrics.non_standard_terms.empty());
    }
}

TEST_CASE("standardization recovers every planted event exactly") {
    GeneratedCorpus corpus = generate_corpus(150, 1004);
    for (std::size_t i = 0; i < corpus.notes.size(); ++i) {
        StandardizedNote note = standardize_rule_based(corpus.notes[i], shipped());
        const PlantLedger& ledger = corpus.ledgers[i];
        CHECK(note.metrics.grammatical_errors == ledger.count(PlantKind::GrammarRule));
        CHECK(note.metrics.spelling_errors == ledger.events(PlantKind::Spelling));
        CHECK(note.metrics.abbreviations_expanded == ledger.events(PlantKind::Abbreviation));
        CHECK(note.metrics.non_standard_terms == ledger.events(PlantKind::NonStandardTerm));
    }
}

TEST_CASE("ledger positions point at the corrupted surface") {
    GeneratedCorpus corpus = generate_corpus(20, 1005);
    for (std::size_t i = 0; i < corpus.notes.size(); ++i) {
        auto tokens = text::tokenize_alnum(corpus.notes[i].note_text);
        for (const auto& plant : corpus.ledgers[i].planted) {
            REQUIRE(plant.position < tokens.size());
            if (plant.kind == PlantKind::Spelling || plant.kind == PlantKind::Abbreviation ||
                plant.kind == PlantKind::NonStandardTerm) {
                auto before_tokens = text::tokenize_alnum(plant.before);
                REQUIRE_FALSE(before_tokens.empty());
                CHECK(tokens[plant.position] == before_tokens[0]);
            }
        }
    }
}

TEST_CASE("generated text never contains clean-side artifacts of a plant") {
    // a corrupted slot writes only the corrupted surface
    GeneratedCorpus corpus = generate_corpus(10, 1006);
    for (std::size_t i = 0; i < corpus.notes.size(); ++i) {
        for (const auto& plant : corpus.ledgers[i].planted) {
            if (plant.kind == PlantKind::Spelling) {
                CHECK(corpus.notes[i].note_text.find(plant.before) != std::string::npos);
            }
        }
    }
}

TEST_CASE("default profile draws land near the published targets") {
    GeneratedCorpus corpus = generate_corpus(1000, 1007);
    double g = 0, s = 0, t = 0, a = 0;
    for (const auto& ledger : corpus.ledgers) {
        g += static_cast<double>(ledger.count(PlantKind::GrammarRule));
        s += static_cast<double>(ledger.count(PlantKind::Spelling));
        t += static_cast<double>(ledger.count(PlantKind::NonStandardTerm));
        a += static_cast<double>(ledger.count(PlantKind::Abbreviation));
    }
    const double n = static_cast<double>(corpus.ledgers.size());
    CHECK(g / n == doctest::Approx(4.9).epsilon(0.10));
    CHECK(s / n == doctest::Approx(3.3).epsilon(0.10));
    CHECK(t / n == doctest::Approx(3.1).epsilon(0.10));
    CHECK(a / n == doctest::Approx(15.8).epsilon(0.10));
}

TEST_CASE("clamped-mean solver hits its target") {
    for (auto [mean, sd] : {std::pair{4.9, 1.8}, {3.3, 5.2}, {3.1, 3.0}, {15.8, 9.1}}) {
        double mu = solve_generator_mean(mean, sd);
        CHECK(clamped_round_normal_mean(mu, sd) == doctest::Approx(mean).epsilon(1e-6));
    }
    CHECK(solve_generator_mean(0.0, 5.0) == 0.0);
    CHECK(clamped_round_normal_mean(4.0, 0.0) == 4.0);
}

TEST_CASE("ledger JSON round-trips") {
    GeneratedCorpus corpus = generate_corpus(3, 1008);
    for (const auto& ledger : corpus.ledgers) {
        PlantLedger back = ledger_from_json(json::parse(ledger_to_json(ledger).dump()));
        CHECK(back.accession_num == ledger.accession_num);
        REQUIRE(back.planted.size() == ledger.planted.size());
        for (std::size_t i = 0; i < back.planted.size(); ++i) {
            CHECK(back.planted[i] == ledger.planted[i]);
        }
    }
}

TEST_CASE("out-of-lexicon noise is inert for the ledger") {
    GeneratorOptions options;
    options.out_of_lexicon_noise = true;
    GeneratedCorpus noisy = generate_corpus(10, 1009, options);
    for (std::size_t i = 0; i < noisy.notes.size(); ++i) {
        CHECK(noisy.notes[i].note_text.find("qrxzith") != std::string::npos);
        StandardizedNote note = standardize_rule_based(noisy.notes[i], shipped());
        const PlantLedger& ledger = noisy.ledgers[i];
        CHECK(note.metrics.spelling_errors == ledger.events(PlantKind::Spelling));
        CHECK(note.metrics.grammatical_errors == ledger.count(PlantKind::GrammarRule));
    }
}

TEST_CASE("every generated token is known to the shipped resources") {
    // Guards the template bank against vocabulary drift: any alphabetic token
    // that is not a planted typo, an abbreviation, or all-caps must be in the
    // spell vocabulary, or spell correction could fire unplanned events.
    GeneratorOptions options;
    options.out_of_lexicon_noise = false;
    GeneratedCorpus corpus = generate_corpus(200, 1010, options);

    std::set<std::string> abbrevs;
    for (const auto& entry : shipped().abbreviations.entries) {
        abbrevs.insert(text::to_lower(entry.abbrev));
    }
    std::set<std::string> planted;
    for (const auto& ledger : corpus.ledgers) {
        for (const auto& plant : ledger.planted) {
            for (auto& t : text::tokenize_alnum_lower(plant.before)) planted.insert(t);
        }
    }
    std::set<std::string> unknown;
    for (const auto& note : corpus.notes) {
        for (const auto& raw : text::tokenize_alnum(note.note_text)) {
            if (text::is_all_caps(raw)) continue;
            std::string token = text::to_lower(raw);
            bool alpha = std::all_of(token.begin(), token.end(),
                                     [](unsigned char c) { return std::isalpha(c); });
            if (!alpha) continue;
            if (shipped().spelling.vocabulary.count(token)) continue;
            if (abbrevs.count(token)) continue;
            if (planted.count(token)) continue;
            unknown.insert(token);
        }
    }
    CHECK_MESSAGE(unknown.empty(), "first unknown: ", unknown.empty() ? "" : *unknown.begin());
}

TEST_CASE("notes keep all seven canonical sections populated") {
    GeneratedCorpus corpus = generate_corpus(10, 1011);
    for (const auto& src : corpus.notes) {
        StandardizedNote note = standardize_rule_based(src, shipped());
        CHECK_FALSE(note.history.chief_complaint.empty());
        CHECK_FALSE(note.history.interim_history.empty());
        CHECK_FALSE(note.vital_signs.blood_pressure.empty());
        CHECK_FALSE(note.examination.mental_status.empty());
        CHECK_FALSE(note.labs.empty());
        CHECK_FALSE(note.radiology.empty());
        CHECK_FALSE(note.impression.assessment.empty());
        CHECK_FALSE(note.plan.testing.empty());
    }
}
