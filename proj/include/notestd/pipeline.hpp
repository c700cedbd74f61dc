#pragma once

#include "notestd/backend.hpp"
#include "notestd/corpus.hpp"
#include "notestd/note_model.hpp"

#include <map>
#include <string>
#include <vector>

namespace notestd {

struct NoteStats {
    std::string accession_num;
    long source_chars = 0;
    long standardized_chars = 0; // total content characters across leaves
    long grammatical_errors = 0;
    long spelling_errors = 0;
    long abbreviations_expanded = 0;
    long non_standard_terms = 0;
    bool operator==(const NoteStats&) const = default;
};

struct Histogram {
    std::vector<double> bin_edges; // k+1 edges, strictly increasing
    std::vector<long> counts;      // k bins, right-closed last bin
    bool operator==(const Histogram&) const = default;
};

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0; // sample SD (n-1); 0 when n == 1
    double min = 0.0;
    double max = 0.0;
    Histogram histogram;
    bool operator==(const MetricSummary&) const = default;
};

struct CorpusSummary {
    long n = 0;
    // Key order is fixed: source_chars, standardized_chars, grammatical_errors,
    // spelling_errors, abbreviations_expanded, non_standard_terms.
    std::map<std::string, MetricSummary> metrics;
    bool operator==(const CorpusSummary&) const = default;
};

const std::vector<std::string>& metric_names();

struct FailureRecord {
    std::string accession_num;
    BackendFailure failure;
    std::string raw_response;
};

struct BatchResult {
    std::vector<std::pair<SourceNote, StandardizedNote>> results; // input order
    std::vector<FailureRecord> failures;                          // input order
};

// Fan-out over notes with bounded parallelism. Individual failures never abort
// the batch; results keep input order regardless of completion order.
BatchResult standardize_corpus(const std::vector<SourceNote>& notes, StandardizationBackend& backend,
                               int parallelism);

NoteStats compute_note_stats(const SourceNote& source, const StandardizedNote& standardized);

Histogram make_histogram(const std::vector<double>& values, int bins);

// mean, sample SD, min/max, equal-width histogram per metric.
// Throws Error(EmptyInput) on an empty stats list.
CorpusSummary aggregate(const std::vector<NoteStats>& stats, int bins = 20);

enum class ReportFormat { Text, Json, Csv, SvgHistograms };

std::string render_report(const CorpusSummary& summary, ReportFormat format);
std::string render_histogram_svg(const std::string& metric, const MetricSummary& summary);

CorpusSummary summary_from_json(const json& doc);
ordered_json summary_to_json(const CorpusSummary& summary);

} // namespace notestd
