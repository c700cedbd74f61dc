#include "notestd/errors.hpp"
#include "notestd/evaluation.hpp"
#include "notestd/fixtures.hpp"
#include "notestd/prng.hpp"
#include "notestd/rules_engine.hpp"
#include "notestd/text.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace notestd;

namespace {

const StandardizationResources& shipped() {
    static const StandardizationResources resources = load_resources(test_support::resources_dir());
    return resources;
}

QualityContext heuristic_context() {
    QualityContext context;
    context.resources = &shipped();
    return context;
}

} // namespace

TEST_CASE("completeness_check is empty for rule-backend output") {
    GeneratedCorpus corpus = generate_corpus(30, 301);
    for (const auto& src : corpus.notes) {
        StandardizedNote note = standardize_rule_based(src, shipped());
        ContentDiff diff = completeness_check(src, note);
        CHECK_MESSAGE(diff.missing_tokens.empty(), "accession ", src.accession_num, " missing ",
                      diff.missing_tokens.size() ? diff.missing_tokens[0] : "");
    }
}

TEST_CASE("deleting a section surfaces its content words") {
    GeneratedCorpus corpus = generate_corpus(1, 302);
    const SourceNote& src = corpus.notes[0];
    StandardizedNote note = standardize_rule_based(src, shipped());
    std::string assessment = note.impression.assessment;
    REQUIRE_FALSE(assessment.empty());
    note.impression.assessment = "";
    ContentDiff diff = completeness_check(src, note);
    CHECK_FALSE(diff.missing_tokens.empty());
    // a content word from the deleted section shows up in the missing list
    bool found = false;
    for (const auto& token : text::tokenize_alnum_lower(assessment)) {
        if (std::find(diff.missing_tokens.begin(), diff.missing_tokens.end(), token) !=
            diff.missing_tokens.end()) {
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("identical text with empty metrics diffs clean") {
    SourceNote src{"1", "Reports stable symptoms without new deficits."};
    StandardizedNote note;
    note.history.interim_history = src.note_text;
    ContentDiff diff = completeness_check(src, note);
    CHECK(diff.missing_tokens.empty());
    CHECK(diff.ledger_explained == 0);
}

TEST_CASE("ledger events explain rewrites") {
    SourceNote src{"1", "Patient had a heart attack."};
    StandardizedNote note;
    note.history.interim_history = "Patient had a myocardial infarction.";
    note.metrics.non_standard_terms = {"heart attack -> myocardial infarction"};
    ContentDiff diff = completeness_check(src, note);
    CHECK(diff.missing_tokens.empty());
    CHECK(diff.ledger_explained == 1);

    // without the ledger entry the rewrite reads as loss
    note.metrics.non_standard_terms.clear();
    ContentDiff broken = completeness_check(src, note);
    CHECK_FALSE(broken.missing_tokens.empty());
}

TEST_CASE("heuristic ratings on perfect output") {
    GeneratedCorpus corpus = generate_corpus(5, 303);
    for (const auto& src : corpus.notes) {
        StandardizedNote note = standardize_rule_based(src, shipped());
        QualityRatings ratings = rate_quality(src, note, RatingMode::Heuristic, heuristic_context());
        CHECK(ratings.completeness == 5);
        CHECK(ratings.spelling_and_grammar >= 4);
        CHECK(ratings.abbreviation_expansion == 5);
        CHECK(ratings.terminology_standardization == 5);
        CHECK(ratings.text_organization >= 4);
    }
}

TEST_CASE("heavy deletion drops the completeness rating") {
    GeneratedCorpus corpus = generate_corpus(1, 304);
    const SourceNote& src = corpus.notes[0];
    StandardizedNote note = standardize_rule_based(src, shipped());
    // empty roughly a third of the content
    note.history.interim_history = "";
    note.plan.testing = "";
    note.examination.mental_status = "";
    QualityRatings ratings = rate_quality(src, note, RatingMode::Heuristic, heuristic_context());
    CHECK(ratings.completeness <= 2);
}

TEST_CASE("completeness rating is monotone in deleted content") {
    GeneratedCorpus corpus = generate_corpus(1, 305);
    const SourceNote& src = corpus.notes[0];
    StandardizedNote note = standardize_rule_based(src, shipped());

    std::vector<std::string> paths;
    for (const auto& leaf : note_content_leaves(note)) {
        if (!leaf.value->empty()) paths.push_back(leaf.path);
    }
    int previous = 5;
    QualityContext context = heuristic_context();
    for (const auto& path : paths) {
        *leaf_by_path(note, path) = "";
        QualityRatings ratings = rate_quality(src, note, RatingMode::Heuristic, context);
        CHECK(ratings.completeness <= previous);
        previous = ratings.completeness;
    }
}

TEST_CASE("llm-judge mode parses a five-integer reply") {
    QualityContext context;
    context.llm_complete = [](const std::string& prompt) {
        CHECK(prompt.find("1-5 scale") != std::string::npos);
        return "[5,5,4,5,4]";
    };
    SourceNote src{"1", "text"};
    StandardizedNote note;
    QualityRatings ratings = rate_quality(src, note, RatingMode::LlmJudge, context);
    CHECK(ratings.text_organization == 5);
    CHECK(ratings.spelling_and_grammar == 5);
    CHECK(ratings.abbreviation_expansion == 4);
    CHECK(ratings.terminology_standardization == 5);
    CHECK(ratings.completeness == 4);

    // out-of-range values clamp
    context.llm_complete = [](const std::string&) { return "[9,0,3,3,3]"; };
    ratings = rate_quality(src, note, RatingMode::LlmJudge, context);
    CHECK(ratings.text_organization == 5);
    CHECK(ratings.spelling_and_grammar == 1);
}

TEST_CASE("sampling is seed-deterministic without replacement") {
    std::vector<SourceNote> notes;
    for (int i = 0; i < 40; ++i) notes.push_back({std::to_string(i), "body"});

    CHECK(sample_for_review(notes, 0, 9).empty());

    auto all = sample_for_review(notes, notes.size(), 9);
    CHECK(all.size() == notes.size());
    auto sorted = all;
    std::sort(sorted.begin(), sorted.end(),
              [](const SourceNote& a, const SourceNote& b) {
                  return std::stol(a.accession_num) < std::stol(b.accession_num);
              });
    CHECK(sorted == notes); // a permutation of the input

    auto first = sample_for_review(notes, 20, 1234);
    auto second = sample_for_review(notes, 20, 1234);
    CHECK(first == second);
    auto other_seed = sample_for_review(notes, 20, 1235);
    CHECK(first != other_seed);

    CHECK_THROWS_AS(sample_for_review(notes, 41, 1), Error);
}

TEST_CASE("sampling passes a chi-square uniformity sanity check") {
    const std::size_t population = 20;
    const std::size_t k = 5;
    const int reps = 2000;
    std::vector<long> inclusion(population, 0);
    for (int r = 0; r < reps; ++r) {
        for (std::size_t idx : sample_indices(population, k, 10000 + static_cast<std::uint64_t>(r))) {
            ++inclusion[idx];
        }
    }
    const double expected = static_cast<double>(reps) * k / population;
    double chi2 = 0.0;
    for (long column : inclusion) {
        double d = static_cast<double>(column) - expected;
        chi2 += d * d / expected;
    }
    // df = 19, alpha = 0.001 critical value ~= 43.8
    CHECK(chi2 < 43.8);
}

TEST_CASE("aggregate_ratings matches hand computation and Table ordering") {
    std::vector<QualityRatings> all_fives(3, QualityRatings{5, 5, 5, 5, 5});
    auto rows = aggregate_ratings(all_fives);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].metric == "Text Organization");
    CHECK(rows[1].metric == "Spelling and Grammar");
    CHECK(rows[2].metric == "Abbreviation Expansion");
    CHECK(rows[3].metric == "Terminology Standardization");
    CHECK(rows[4].metric == "Completeness");
    for (const auto& row : rows) {
        CHECK(row.mean == doctest::Approx(5.0));
        CHECK(row.sd == doctest::Approx(0.0));
    }

    std::vector<QualityRatings> mixed(3);
    mixed[0].completeness = 4;
    mixed[1].completeness = 5;
    mixed[2].completeness = 5;
    auto mixed_rows = aggregate_ratings(mixed);
    CHECK(mixed_rows[4].mean == doctest::Approx(4.67).epsilon(0.01));
    CHECK(mixed_rows[4].sd == doctest::Approx(0.58).epsilon(0.01));

    CHECK_THROWS_AS(aggregate_ratings({}), Error);
}

TEST_CASE("published reference ratings are documentation constants") {
    const auto& table = reference_quality_ratings();
    CHECK(table[0].mean == doctest::Approx(4.93));
    CHECK(table[0].sd == doctest::Approx(0.43));
    CHECK(table[4].mean == doctest::Approx(4.04));
    CHECK(table[4].sd == doctest::Approx(0.53));
    CHECK(std::string(table[4].metric) == "Completeness");
}

TEST_CASE("stop word list holds exactly fifty entries") {
    CHECK(diff_stop_words().size() == 50);
}
