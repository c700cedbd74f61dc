#pragma once

#include "notestd/corpus.hpp"
#include "notestd/note_model.hpp"
#include "notestd/rules_engine.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace notestd {

struct QualityRatings {
    int text_organization = 1;
    int spelling_and_grammar = 1;
    int abbreviation_expansion = 1;
    int terminology_standardization = 1;
    int completeness = 1;
    bool operator==(const QualityRatings&) const = default;
};

struct ContentDiff {
    std::vector<std::string> missing_tokens; // in source, unexplained by the ledger
    std::vector<std::string> added_tokens;
    long ledger_explained = 0; // events whose before-tokens were all found
    bool operator==(const ContentDiff&) const = default;
};

// The 50-word function-word stop list used for token diffs.
const std::vector<std::string>& diff_stop_words();

// Token-multiset comparison between source text and standardized content,
// after replaying each Metrics ledger event "a -> b" as a rewrite on the
// source side. Serialized key names count toward the standardized side, since
// consumed heading lines resurface as keys. Numerals are kept.
ContentDiff completeness_check(const SourceNote& source, const StandardizedNote& standardized);

enum class RatingMode { Heuristic, LlmJudge };

// Score thresholds for the heuristic rater; shipped as a config file so the
// calibration is adjustable without code changes.
struct RatingThresholds {
    // residual-rate upper bounds for scores 4 / 3 / 2 (zero scores 5)
    std::array<double, 3> completeness{0.02, 0.10, 0.30};
    std::array<double, 3> spelling_grammar{0.005, 0.02, 0.05};
    std::array<double, 3> abbreviation{0.002, 0.01, 0.03};
    std::array<double, 3> terminology{0.002, 0.01, 0.03};
    // dispersion lower bounds for scores 5 / 4 / 3 / 2
    std::array<double, 4> organization{0.45, 0.25, 0.10, 0.0};
};

RatingThresholds load_rating_thresholds(const std::string& path);

struct QualityContext {
    const StandardizationResources* resources = nullptr; // needed by Heuristic
    RatingThresholds thresholds{};
    // LlmJudge completion hook: prompt in, raw model text out.
    std::function<std::string(const std::string& prompt)> llm_complete;
};

QualityRatings rate_quality(const SourceNote& source, const StandardizedNote& standardized,
                            RatingMode mode, const QualityContext& context);

std::string build_judge_prompt(const SourceNote& source, const StandardizedNote& standardized);
// Accepts a 5-integer JSON array (Table order) or an object keyed by the five
// metric names; values clamp to [1, 5].
QualityRatings parse_judge_response(const std::string& raw);

// Uniform sample without replacement, reproducible from seed (mt19937_64).
// Throws Error(SampleTooLarge) when n exceeds the population.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n, std::uint64_t seed);
std::vector<SourceNote> sample_for_review(const std::vector<SourceNote>& notes, std::size_t n,
                                          std::uint64_t seed);

struct RatingRow {
    std::string metric;
    double mean = 0.0;
    double sd = 0.0;
};

// Rows ordered: Text Organization, Spelling and Grammar, Abbreviation
// Expansion, Terminology Standardization, Completeness.
std::vector<RatingRow> aggregate_ratings(const std::vector<QualityRatings>& ratings);

// Reference statistics reported for the original 1,618-note corpus; kept for
// report annotations, never asserted by tests.
struct ReferenceRating {
    const char* metric;
    double mean;
    double sd;
};
const std::array<ReferenceRating, 5>& reference_quality_ratings();

} // namespace notestd
