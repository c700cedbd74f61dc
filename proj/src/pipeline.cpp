#include "notestd/pipeline.hpp"

#include "notestd/errors.hpp"
#include "notestd/text.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace notestd {

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {
        "source_chars",    "standardized_chars",      "grammatical_errors",
        "spelling_errors", "abbreviations_expanded", "non_standard_terms",
    };
    return names;
}

BatchResult standardize_corpus(const std::vector<SourceNote>& notes, StandardizationBackend& backend,
                               int parallelism) {
    const std::size_t n = notes.size();
    std::vector<BackendOutcome> outcomes(n);
    if (n > 0) {
        const int workers = std::max(1, std::min<int>(parallelism, static_cast<int>(n)));
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                outcomes[i] = backend.standardize(notes[i]);
            }
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }
    }

    BatchResult batch;
    for (std::size_t i = 0; i < n; ++i) {
        BackendOutcome& outcome = outcomes[i];
        if (outcome.note) {
            batch.results.emplace_back(notes[i], std::move(*outcome.note));
        } else {
            batch.failures.push_back({notes[i].accession_num,
                                      outcome.failure.value_or(BackendFailure::Transport),
                                      std::move(outcome.raw_response)});
        }
    }
    return batch;
}

NoteStats compute_note_stats(const SourceNote& source, const StandardizedNote& standardized) {
    NoteStats stats;
    stats.accession_num = source.accession_num;
    stats.source_chars = static_cast<long>(text::count_scalars(source.note_text));
    long content = 0;
    for (const auto& leaf : note_content_leaves(standardized)) {
        content += static_cast<long>(text::count_scalars(*leaf.value));
    }
    stats.standardized_chars = content;
    stats.grammatical_errors = standardized.metrics.grammatical_errors;
    stats.spelling_errors = static_cast<long>(standardized.metrics.spelling_errors.size());
    stats.abbreviations_expanded =
        static_cast<long>(standardized.metrics.abbreviations_expanded.size());
    stats.non_standard_terms = static_cast<long>(standardized.metrics.non_standard_terms.size());
    return stats;
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
    Histogram h;
    if (values.empty()) return h;
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (lo == hi) {
        // Degenerate spread: a single unit-width bin holds everything.
        h.bin_edges = {lo, lo + 1.0};
        h.counts = {static_cast<long>(values.size())};
        return h;
    }
    const int k = std::max(1, bins);
    const double width = (hi - lo) / k;
    h.bin_edges.resize(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) h.bin_edges[static_cast<std::size_t>(i)] = lo + width * i;
    h.bin_edges.back() = hi;
    h.counts.assign(static_cast<std::size_t>(k), 0);
    for (double v : values) {
        int idx = static_cast<int>((v - lo) / width);
        if (idx >= k) idx = k - 1; // right-closed last bin
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

namespace {

MetricSummary summarize(std::vector<double> values, int bins) {
    // Sorted accumulation makes the result exactly permutation-invariant.
    std::sort(values.begin(), values.end());
    MetricSummary m;
    const std::size_t n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        m.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    m.min = *std::min_element(values.begin(), values.end());
    m.max = *std::max_element(values.begin(), values.end());
    m.histogram = make_histogram(values, bins);
    return m;
}

std::string format_1dp(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

CorpusSummary aggregate(const std::vector<NoteStats>& stats, int bins) {
    if (stats.empty()) throw Error(ErrorKind::EmptyInput, "no note stats to aggregate");
    CorpusSummary summary;
    summary.n = static_cast<long>(stats.size());
    auto values_of = [&](const std::string& metric) {
        std::vector<double> out;
        out.reserve(stats.size());
        for (const auto& s : stats) {
            long v = 0;
            if (metric == "source_chars") v = s.source_chars;
            else if (metric == "standardized_chars") v = s.standardized_chars;
            else if (metric == "grammatical_errors") v = s.grammatical_errors;
            else if (metric == "spelling_errors") v = s.spelling_errors;
            else if (metric == "abbreviations_expanded") v = s.abbreviations_expanded;
            else if (metric == "non_standard_terms") v = s.non_standard_terms;
            out.push_back(static_cast<double>(v));
        }
        return out;
    };
    for (const auto& metric : metric_names()) {
        summary.metrics[metric] = summarize(values_of(metric), bins);
    }
    return summary;
}

ordered_json summary_to_json(const CorpusSummary& summary) {
    ordered_json doc;
    doc["n"] = summary.n;
    ordered_json metrics;
    for (const auto& name : metric_names()) {
        auto it = summary.metrics.find(name);
        if (it == summary.metrics.end()) continue;
        const MetricSummary& m = it->second;
        ordered_json entry;
        entry["mean"] = m.mean;
        entry["sd"] = m.sd;
        entry["min"] = m.min;
        entry["max"] = m.max;
        entry["histogram"] = {{"bin_edges", m.histogram.bin_edges}, {"counts", m.histogram.counts}};
        metrics[name] = std::move(entry);
    }
    doc["metrics"] = std::move(metrics);
    return doc;
}

CorpusSummary summary_from_json(const json& doc) {
    CorpusSummary summary;
    summary.n = doc.at("n").get<long>();
    for (auto it = doc.at("metrics").begin(); it != doc.at("metrics").end(); ++it) {
        MetricSummary m;
        m.mean = it.value().at("mean").get<double>();
        m.sd = it.value().at("sd").get<double>();
        m.min = it.value().at("min").get<double>();
        m.max = it.value().at("max").get<double>();
        m.histogram.bin_edges = it.value().at("histogram").at("bin_edges").get<std::vector<double>>();
        m.histogram.counts = it.value().at("histogram").at("counts").get<std::vector<long>>();
        summary.metrics[it.key()] = std::move(m);
    }
    return summary;
}

std::string render_histogram_svg(const std::string& metric, const MetricSummary& summary) {
    const Histogram& h = summary.histogram;
    const int width = 640;
    const int height = 400;
    const int margin = 50;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << metric << " (mean " << format_1dp(summary.mean) << " &#177; " << format_1dp(summary.sd)
        << ")</text>\n";
    long max_count = 1;
    for (long c : h.counts) max_count = std::max(max_count, c);
    const double plot_w = width - 2.0 * margin;
    const double plot_h = height - 2.0 * margin;
    const std::size_t k = h.counts.size();
    for (std::size_t i = 0; i < k; ++i) {
        double x = margin + plot_w * static_cast<double>(i) / static_cast<double>(k);
        double w = plot_w / static_cast<double>(k);
        double bar_h = plot_h * static_cast<double>(h.counts[i]) / static_cast<double>(max_count);
        double y = height - margin - bar_h;
        svg << "  <rect x=\"" << format_g(x) << "\" y=\"" << format_g(y) << "\" width=\""
            << format_g(w * 0.92) << "\" height=\"" << format_g(bar_h)
            << "\" fill=\"#4477aa\"/>\n";
    }
    svg << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    if (!h.bin_edges.empty()) {
        svg << "  <text x=\"" << margin << "\" y=\"" << height - margin + 20
            << "\" font-size=\"12\">" << format_g(h.bin_edges.front()) << "</text>\n";
        svg << "  <text x=\"" << width - margin << "\" y=\"" << height - margin + 20
            << "\" text-anchor=\"end\" font-size=\"12\">" << format_g(h.bin_edges.back())
            << "</text>\n";
    }
    svg << "  <text x=\"" << margin - 8 << "\" y=\"" << margin << "\" text-anchor=\"end\" "
        << "font-size=\"12\">" << max_count << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string render_report(const CorpusSummary& summary, ReportFormat format) {
    switch (format) {
        case ReportFormat::Text: {
            std::ostringstream out;
            out << "n: " << summary.n << "\n";
            for (const auto& name : metric_names()) {
                auto it = summary.metrics.find(name);
                if (it == summary.metrics.end()) continue;
                out << name << ": " << format_1dp(it->second.mean) << " ± "
                    << format_1dp(it->second.sd) << " (min " << format_g(it->second.min) << ", max "
                    << format_g(it->second.max) << ")\n";
            }
            return out.str();
        }
        case ReportFormat::Json:
            return summary_to_json(summary).dump(4) + "\n";
        case ReportFormat::Csv: {
            std::ostringstream out;
            out << "metric,mean,sd,min,max\n";
            for (const auto& name : metric_names()) {
                auto it = summary.metrics.find(name);
                if (it == summary.metrics.end()) continue;
                out << name << ',' << format_g(it->second.mean) << ',' << format_g(it->second.sd)
                    << ',' << format_g(it->second.min) << ',' << format_g(it->second.max) << "\n";
            }
            return out.str();
        }
        case ReportFormat::SvgHistograms: {
            // One document, histograms stacked; per-metric files come from
            // render_histogram_svg.
            std::ostringstream out;
            const int w = 640, h = 400;
            long count = static_cast<long>(summary.metrics.size());
            out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
                << h * count << "\">\n";
            int row = 0;
            for (const auto& name : metric_names()) {
                auto it = summary.metrics.find(name);
                if (it == summary.metrics.end()) continue;
                out << "<g transform=\"translate(0," << row * h << ")\">\n"
                    << render_histogram_svg(name, it->second) << "</g>\n";
                ++row;
            }
            out << "</svg>\n";
            return out.str();
        }
    }
    return {};
}

} // namespace notestd
