#include "notestd/evaluation.hpp"

#include "notestd/errors.hpp"
#include "notestd/prng.hpp"
#include "notestd/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace notestd {

namespace {

using TokenMultiset = std::map<std::string, long>;

const std::set<std::string>& stop_set() {
    static const std::set<std::string> s(diff_stop_words().begin(), diff_stop_words().end());
    return s;
}

TokenMultiset multiset_of(std::string_view text_in) {
    TokenMultiset ms;
    for (auto& tok : text::tokenize_alnum_lower(text_in)) {
        if (!stop_set().count(tok)) ++ms[tok];
    }
    return ms;
}

void add_tokens(TokenMultiset& ms, std::string_view text_in) {
    for (auto& tok : text::tokenize_alnum_lower(text_in)) {
        if (!stop_set().count(tok)) ++ms[tok];
    }
}

long total(const TokenMultiset& ms) {
    long sum = 0;
    for (const auto& [tok, n] : ms) sum += n;
    return sum;
}

int score_from_residual(double rate, const std::array<double, 3>& bounds) {
    if (rate <= 0.0) return 5;
    if (rate <= bounds[0]) return 4;
    if (rate <= bounds[1]) return 3;
    if (rate <= bounds[2]) return 2;
    return 1;
}

std::string joined_content(const StandardizedNote& note) {
    std::string out;
    for (const auto& leaf : note_content_leaves(note)) {
        if (leaf.value->empty()) continue;
        out += *leaf.value;
        out += "\n";
    }
    return out;
}

int clamp_rating(long v) { return static_cast<int>(std::clamp<long>(v, 1, 5)); }

} // namespace

const std::vector<std::string>& diff_stop_words() {
    static const std::vector<std::string> words = {
        "a",    "an",    "the",  "and",   "or",    "but",  "of",    "to",    "in",    "on",
        "at",   "by",    "for",  "with",  "from",  "as",   "is",    "are",   "was",   "were",
        "be",   "been",  "being", "has",  "have",  "had",  "he",    "she",   "it",    "they",
        "we",   "you",   "i",    "his",   "her",   "its",  "their", "this",  "that",  "these",
        "those", "not",  "no",   "will",  "would", "can",  "could", "there", "then",  "than",
    };
    return words;
}

ContentDiff completeness_check(const SourceNote& source, const StandardizedNote& standardized) {
    TokenMultiset source_ms = multiset_of(source.note_text);

    // Replay the ledger: each "a -> b" consumes a's tokens and produces b's.
    ContentDiff diff;
    auto apply_events = [&](const std::vector<std::string>& events) {
        for (const auto& event : events) {
            std::size_t sep = event.find(" -> ");
            if (sep == std::string::npos) continue;
            auto before = text::tokenize_alnum_lower(event.substr(0, sep));
            auto after = text::tokenize_alnum_lower(event.substr(sep + 4));
            bool all_present = true;
            for (const auto& tok : before) {
                if (stop_set().count(tok)) continue;
                auto it = source_ms.find(tok);
                if (it != source_ms.end() && it->second > 0) {
                    if (--it->second == 0) source_ms.erase(it);
                } else {
                    all_present = false;
                }
            }
            for (const auto& tok : after) {
                if (!stop_set().count(tok)) ++source_ms[tok];
            }
            if (all_present) ++diff.ledger_explained;
        }
    };
    apply_events(standardized.metrics.spelling_errors);
    apply_events(standardized.metrics.non_standard_terms);
    apply_events(standardized.metrics.abbreviations_expanded);

    TokenMultiset std_ms;
    for (const auto& leaf : note_content_leaves(standardized)) add_tokens(std_ms, *leaf.value);
    for (const auto& tok : schema_key_tokens()) {
        if (!stop_set().count(tok)) ++std_ms[tok];
    }

    for (const auto& [tok, n] : source_ms) {
        auto it = std_ms.find(tok);
        long have = it == std_ms.end() ? 0 : it->second;
        for (long k = have; k < n; ++k) diff.missing_tokens.push_back(tok);
    }
    for (const auto& [tok, n] : std_ms) {
        auto it = source_ms.find(tok);
        long have = it == source_ms.end() ? 0 : it->second;
        for (long k = have; k < n; ++k) diff.added_tokens.push_back(tok);
    }
    return diff;
}

RatingThresholds load_rating_thresholds(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorKind::ResourceInvalid, path + ": invalid JSON");
    }
    RatingThresholds t;
    auto read3 = [&](const char* key, std::array<double, 3>& target) {
        if (!doc.contains(key)) return;
        auto v = doc[key].get<std::vector<double>>();
        if (v.size() != 3) throw Error(ErrorKind::ResourceInvalid, path + ": " + key + " needs 3 values");
        std::copy(v.begin(), v.end(), target.begin());
    };
    read3("completeness", t.completeness);
    read3("spelling_grammar", t.spelling_grammar);
    read3("abbreviation", t.abbreviation);
    read3("terminology", t.terminology);
    if (doc.contains("organization")) {
        auto v = doc["organization"].get<std::vector<double>>();
        if (v.size() != 4) throw Error(ErrorKind::ResourceInvalid, path + ": organization needs 4 values");
        std::copy(v.begin(), v.end(), t.organization.begin());
    }
    return t;
}

QualityRatings rate_quality(const SourceNote& source, const StandardizedNote& standardized,
                            RatingMode mode, const QualityContext& context) {
    if (mode == RatingMode::LlmJudge) {
        if (!context.llm_complete) {
            throw Error(ErrorKind::ConfigError, "llm-judge mode needs a completion hook");
        }
        return parse_judge_response(context.llm_complete(build_judge_prompt(source, standardized)));
    }
    if (!context.resources) {
        throw Error(ErrorKind::ConfigError, "heuristic mode needs standardization resources");
    }
    const StandardizationResources& res = *context.resources;
    const RatingThresholds& t = context.thresholds;
    QualityRatings ratings;

    const std::string content = joined_content(standardized);
    const auto content_tokens = text::tokenize_alnum_lower(content);
    const double denom = std::max<std::size_t>(1, content_tokens.size());

    // Completeness: unexplained missing-token ratio against source size.
    ContentDiff diff = completeness_check(source, standardized);
    double source_tokens = std::max(1L, total(multiset_of(source.note_text)));
    ratings.completeness = score_from_residual(
        static_cast<double>(diff.missing_tokens.size()) / source_tokens, t.completeness);

    // Spelling & grammar: residual out-of-vocabulary rate plus residual
    // grammar fixes on the standardized content.
    SpellLexicon spelling = res.spelling;
    for (const auto& entry : res.abbreviations.entries) {
        spelling.protected_terms.insert(text::to_lower(entry.abbrev));
    }
    long residual_oov = static_cast<long>(correct_spelling(content, spelling).events.size());
    long residual_grammar = count_grammar_fixes(content).count;
    ratings.spelling_and_grammar = score_from_residual(
        static_cast<double>(residual_oov + residual_grammar) / denom, t.spelling_grammar);

    // Abbreviations / terminology: how much the rewriters would still change.
    long residual_abbrev =
        static_cast<long>(expand_abbreviations(content, res.abbreviations).events.size());
    ratings.abbreviation_expansion =
        score_from_residual(static_cast<double>(residual_abbrev) / denom, t.abbreviation);
    long residual_terms =
        static_cast<long>(substitute_nonstandard_terms(content, res.terms).events.size());
    ratings.terminology_standardization =
        score_from_residual(static_cast<double>(residual_terms) / denom, t.terminology);

    // Organization: content dispersion across leaves.
    long total_chars = 0;
    long max_leaf = 0;
    for (const auto& leaf : note_content_leaves(standardized)) {
        long c = static_cast<long>(text::count_scalars(*leaf.value));
        total_chars += c;
        max_leaf = std::max(max_leaf, c);
    }
    double dispersion =
        total_chars > 0 ? 1.0 - static_cast<double>(max_leaf) / static_cast<double>(total_chars) : 0.0;
    if (dispersion >= t.organization[0]) ratings.text_organization = 5;
    else if (dispersion >= t.organization[1]) ratings.text_organization = 4;
    else if (dispersion >= t.organization[2]) ratings.text_organization = 3;
    else if (dispersion > t.organization[3]) ratings.text_organization = 2;
    else ratings.text_organization = 1;

    return ratings;
}

std::string build_judge_prompt(const SourceNote& source, const StandardizedNote& standardized) {
    std::string out =
        "You are grading a clinical note standardization. Compare the source note to the "
        "standardized note and rate each dimension on a 1-5 scale (1 = poor, 5 = excellent): "
        "text organization, spelling and grammar, abbreviation expansion, terminology "
        "standardization, completeness.\n"
        "Respond with only a JSON array of five integers in that order.\n\n";
    out += "Source note:\n" + source.note_text + "\n\n";
    out += "Standardized note:\n" + serialize_note_pretty(standardized) + "\n";
    return out;
}

QualityRatings parse_judge_response(const std::string& raw) {
    json doc = json::parse(raw, nullptr, false);
    if (doc.is_discarded()) {
        std::size_t first = raw.find('[');
        std::size_t last = raw.rfind(']');
        if (first != std::string::npos && last != std::string::npos && last > first) {
            doc = json::parse(raw.substr(first, last - first + 1), nullptr, false);
        }
    }
    QualityRatings ratings;
    if (doc.is_discarded()) throw Error(ErrorKind::Unrepairable, "judge reply is not JSON");
    if (doc.is_array() && doc.size() == 5) {
        auto get = [&](std::size_t i) { return clamp_rating(doc[i].get<long>()); };
        ratings.text_organization = get(0);
        ratings.spelling_and_grammar = get(1);
        ratings.abbreviation_expansion = get(2);
        ratings.terminology_standardization = get(3);
        ratings.completeness = get(4);
        return ratings;
    }
    if (doc.is_object()) {
        auto get = [&](const char* key) {
            if (!doc.contains(key)) throw Error(ErrorKind::CoercionFailed, std::string("judge reply missing ") + key);
            return clamp_rating(doc[key].get<long>());
        };
        ratings.text_organization = get("Text Organization");
        ratings.spelling_and_grammar = get("Spelling and Grammar");
        ratings.abbreviation_expansion = get("Abbreviation Expansion");
        ratings.terminology_standardization = get("Terminology Standardization");
        ratings.completeness = get("Completeness");
        return ratings;
    }
    throw Error(ErrorKind::CoercionFailed, "judge reply has unexpected shape");
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n, std::uint64_t seed) {
    if (n > population) {
        throw Error(ErrorKind::SampleTooLarge,
                    "requested " + std::to_string(n) + " of " + std::to_string(population));
    }
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), 0);
    Prng rng(seed);
    partial_shuffle(idx, n, rng);
    idx.resize(n);
    return idx;
}

std::vector<SourceNote> sample_for_review(const std::vector<SourceNote>& notes, std::size_t n,
                                          std::uint64_t seed) {
    std::vector<SourceNote> out;
    for (std::size_t i : sample_indices(notes.size(), n, seed)) out.push_back(notes[i]);
    return out;
}

std::vector<RatingRow> aggregate_ratings(const std::vector<QualityRatings>& ratings) {
    if (ratings.empty()) throw Error(ErrorKind::EmptyInput, "no ratings to aggregate");
    struct Extractor {
        const char* metric;
        int QualityRatings::* field;
    };
    static const std::vector<Extractor> extractors = {
        {"Text Organization", &QualityRatings::text_organization},
        {"Spelling and Grammar", &QualityRatings::spelling_and_grammar},
        {"Abbreviation Expansion", &QualityRatings::abbreviation_expansion},
        {"Terminology Standardization", &QualityRatings::terminology_standardization},
        {"Completeness", &QualityRatings::completeness},
    };
    std::vector<RatingRow> rows;
    for (const auto& ex : extractors) {
        double sum = 0.0;
        for (const auto& r : ratings) sum += r.*(ex.field);
        double mean = sum / static_cast<double>(ratings.size());
        double sd = 0.0;
        if (ratings.size() > 1) {
            double ss = 0.0;
            for (const auto& r : ratings) {
                double d = r.*(ex.field) - mean;
                ss += d * d;
            }
            sd = std::sqrt(ss / static_cast<double>(ratings.size() - 1));
        }
        rows.push_back({ex.metric, mean, sd});
    }
    return rows;
}

const std::array<ReferenceRating, 5>& reference_quality_ratings() {
    static const std::array<ReferenceRating, 5> table = {{
        {"Text Organization", 4.93, 0.43},
        {"Spelling and Grammar", 4.96, 0.39},
        {"Abbreviation Expansion", 4.74, 0.56},
        {"Terminology Standardization", 4.81, 0.52},
        {"Completeness", 4.04, 0.53},
    }};
    return table;
}

} // namespace notestd
