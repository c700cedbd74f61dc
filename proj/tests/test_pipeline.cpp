#include "notestd/backend.hpp"
#include "notestd/errors.hpp"
#include "notestd/fixtures.hpp"
#include "notestd/pipeline.hpp"
#include "notestd/prng.hpp"
#include "notestd/rules_engine.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace notestd;

namespace {

const StandardizationResources& shipped() {
    static const StandardizationResources resources = load_resources(test_support::resources_dir());
    return resources;
}

std::string golden_text() {
    return test_support::read_file(test_support::data_dir() + "/golden_note.json");
}

} // namespace

TEST_CASE("standardize_corpus with the rules backend never fails") {
    GeneratedCorpus corpus = generate_corpus(10, 5);
    RulesBackend backend(shipped());
    BatchResult batch = standardize_corpus(corpus.notes, backend, 4);
    CHECK(batch.results.size() == 10);
    CHECK(batch.failures.empty());
    for (std::size_t i = 0; i < batch.results.size(); ++i) {
        CHECK(batch.results[i].first.accession_num == corpus.notes[i].accession_num);
    }
}

TEST_CASE("scripted failures are recorded, not fatal") {
    GeneratedCorpus corpus = generate_corpus(10, 6);
    MockBackend backend;
    backend.set_default_response(golden_text());
    backend.add_response("3", "I cannot do that");
    backend.add_response("7", "still not JSON");
    BatchResult batch = standardize_corpus(corpus.notes, backend, 3);
    CHECK(batch.results.size() == 8);
    REQUIRE(batch.failures.size() == 2);
    CHECK(batch.failures[0].accession_num == "3");
    CHECK(batch.failures[1].accession_num == "7");
    CHECK(batch.failures[0].failure == BackendFailure::Unparseable);
    CHECK(batch.failures[0].raw_response == "I cannot do that");
    CHECK(batch.results.size() + batch.failures.size() == corpus.notes.size());
}

TEST_CASE("empty input gives empty output") {
    RulesBackend backend(shipped());
    BatchResult batch = standardize_corpus({}, backend, 4);
    CHECK(batch.results.empty());
    CHECK(batch.failures.empty());
}

TEST_CASE("parallelism does not change the output") {
    GeneratedCorpus corpus = generate_corpus(24, 9);
    RulesBackend backend(shipped());
    BatchResult serial = standardize_corpus(corpus.notes, backend, 1);
    BatchResult parallel = standardize_corpus(corpus.notes, backend, 8);
    REQUIRE(serial.results.size() == parallel.results.size());
    for (std::size_t i = 0; i < serial.results.size(); ++i) {
        CHECK(serialize_note_compact(serial.results[i].second) ==
              serialize_note_compact(parallel.results[i].second));
    }
}

TEST_CASE("compute_note_stats projects metric list sizes") {
    StandardizedNote note;
    note.metrics.grammatical_errors = 4;
    note.metrics.abbreviations_expanded = {"a -> b", "c -> d", "e -> f", "g -> h", "i -> j"};
    note.metrics.spelling_errors = {"x -> y", "p -> q", "r -> s"};
    note.metrics.non_standard_terms = {"m -> n", "o -> w"};
    note.history.interim_history = "hello";
    SourceNote source{"9", "source text"};
    NoteStats stats = compute_note_stats(source, note);
    CHECK(stats.accession_num == "9");
    CHECK(stats.grammatical_errors == 4);
    CHECK(stats.abbreviations_expanded == 5);
    CHECK(stats.spelling_errors == 3);
    CHECK(stats.non_standard_terms == 2);
    CHECK(stats.source_chars == 11);
    CHECK(stats.standardized_chars == 5);

    StandardizedNote empty;
    NoteStats zero = compute_note_stats({"1", "x"}, empty);
    CHECK(zero.grammatical_errors == 0);
    CHECK(zero.spelling_errors == 0);
    CHECK(zero.standardized_chars == 0);
}

TEST_CASE("aggregate matches hand computations") {
    std::vector<NoteStats> stats(3);
    stats[0].grammatical_errors = 2;
    stats[1].grammatical_errors = 4;
    stats[2].grammatical_errors = 6;
    CorpusSummary summary = aggregate(stats, 4);
    const MetricSummary& m = summary.metrics.at("grammatical_errors");
    CHECK(m.mean == doctest::Approx(4.0));
    CHECK(m.sd == doctest::Approx(2.0));
    CHECK(m.min == 2.0);
    CHECK(m.max == 6.0);
    CHECK(summary.n == 3);

    std::vector<NoteStats> one(1);
    one[0].spelling_errors = 5;
    CHECK(aggregate(one, 4).metrics.at("spelling_errors").sd == 0.0);

    CHECK_THROWS_AS(aggregate({}, 10), Error);
}

TEST_CASE("aggregate agrees with an independent two-pass oracle") {
    Prng rng(41);
    std::vector<NoteStats> stats(1000);
    for (auto& s : stats) {
        s.abbreviations_expanded = static_cast<long>(rng.bounded(40));
        s.grammatical_errors = static_cast<long>(rng.bounded(12));
    }
    CorpusSummary summary = aggregate(stats, 20);

    // independent two-pass mean/sd
    double sum = 0.0;
    for (const auto& s : stats) sum += static_cast<double>(s.abbreviations_expanded);
    double mean = sum / static_cast<double>(stats.size());
    double ss = 0.0;
    for (const auto& s : stats) {
        double d = static_cast<double>(s.abbreviations_expanded) - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(stats.size() - 1));
    CHECK(summary.metrics.at("abbreviations_expanded").mean == doctest::Approx(mean).epsilon(1e-9));
    CHECK(summary.metrics.at("abbreviations_expanded").sd == doctest::Approx(sd).epsilon(1e-9));
}

TEST_CASE("aggregate is permutation invariant") {
    Prng rng(43);
    std::vector<NoteStats> stats(200);
    for (auto& s : stats) s.spelling_errors = static_cast<long>(rng.bounded(25));
    CorpusSummary a = aggregate(stats, 10);
    std::reverse(stats.begin(), stats.end());
    CorpusSummary b = aggregate(stats, 10);
    CHECK(a == b);
}

TEST_CASE("histograms conserve counts and bound samples") {
    Prng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> values;
        std::size_t n = 1 + rng.bounded(300);
        for (std::size_t i = 0; i < n; ++i) values.push_back(static_cast<double>(rng.bounded(5000)));
        Histogram h = make_histogram(values, 20);
        long total = 0;
        for (long c : h.counts) total += c;
        CHECK(total == static_cast<long>(values.size()));
        for (std::size_t i = 1; i < h.bin_edges.size(); ++i) {
            CHECK(h.bin_edges[i] > h.bin_edges[i - 1]);
        }
        for (double v : values) {
            CHECK(v >= h.bin_edges.front());
            CHECK(v <= h.bin_edges.back());
        }
    }

    Histogram constant = make_histogram({3.0, 3.0, 3.0}, 20);
    CHECK(constant.counts == std::vector<long>{3});
}

TEST_CASE("render_report formats") {
    std::vector<NoteStats> stats(2);
    stats[0].abbreviations_expanded = 10;
    stats[1].abbreviations_expanded = 20;
    CorpusSummary summary = aggregate(stats, 4);
    // overwrite one metric with the published corpus values for the text check
    summary.metrics["abbreviations_expanded"].mean = 15.8;
    summary.metrics["abbreviations_expanded"].sd = 9.1;

    std::string text = render_report(summary, ReportFormat::Text);
    CHECK(text.find("abbreviations_expanded: 15.8 ± 9.1") != std::string::npos);

    std::string csv = render_report(summary, ReportFormat::Csv);
    CHECK(csv.rfind("metric,mean,sd,min,max", 0) == 0);

    std::string svg = render_histogram_svg("abbreviations_expanded",
                                           summary.metrics.at("abbreviations_expanded"));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("abbreviations_expanded") != std::string::npos);

    std::string all = render_report(summary, ReportFormat::SvgHistograms);
    CHECK(all.find("<svg") != std::string::npos);
}

TEST_CASE("summary JSON round-trips") {
    Prng rng(53);
    std::vector<NoteStats> stats(50);
    for (auto& s : stats) {
        s.source_chars = 1000 + static_cast<long>(rng.bounded(8000));
        s.grammatical_errors = static_cast<long>(rng.bounded(9));
        s.spelling_errors = static_cast<long>(rng.bounded(20));
        s.abbreviations_expanded = static_cast<long>(rng.bounded(40));
        s.non_standard_terms = static_cast<long>(rng.bounded(10));
    }
    CorpusSummary summary = aggregate(stats, 20);
    std::string rendered = render_report(summary, ReportFormat::Json);
    CorpusSummary back = summary_from_json(json::parse(rendered));
    CHECK(back == summary);
}
