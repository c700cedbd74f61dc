#pragma once

#include "notestd/corpus.hpp"
#include "notestd/note_model.hpp"

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace notestd {

struct AbbrevExpansion {
    std::string expansion;
    std::vector<std::string> context_cues; // lowercase
    int priority = 0;
    bool operator==(const AbbrevExpansion&) const = default;
};

struct AbbrevEntry {
    std::string abbrev;
    std::vector<AbbrevExpansion> expansions;
    bool retain_original_in_parens = false;
    bool operator==(const AbbrevEntry&) const = default;
};

struct AbbreviationLexicon {
    std::vector<AbbrevEntry> entries;

    const AbbrevEntry* find(std::string_view abbrev) const;
    void rebuild_index();

private:
    std::unordered_map<std::string, std::size_t> index_;
};

struct TermPair {
    std::string nonstandard; // matched case-insensitively
    std::string standard;
    bool operator==(const TermPair&) const = default;
};

struct TermMap {
    std::vector<TermPair> pairs;
};

struct SpellLexicon {
    std::unordered_set<std::string> vocabulary; // lowercase
    int max_edit_distance = 1;                  // 1 or 2
    std::unordered_set<std::string> protected_terms;
};

struct HeadingRule {
    std::string pattern;              // heading text or prefix, matched case-insensitively
    std::string canonical_section;    // one of the 7 canonical sections
    std::string canonical_subsection; // empty = use the section default
    bool operator==(const HeadingRule&) const = default;
};

struct HeadingSynonyms {
    std::vector<HeadingRule> mapping;
    // Where section-level content lands when no subsection heading applies,
    // e.g. "HISTORY" -> "Interim History".
    std::map<std::string, std::string> default_subsection;
};

struct StandardizationResources {
    AbbreviationLexicon abbreviations;
    TermMap terms;
    SpellLexicon spelling;
    HeadingSynonyms headings;
};

struct RewriteResult {
    std::string text;
    std::vector<std::string> events; // "before -> after", occurrence order
};

// Whole-token matches of lexicon abbreviations are replaced by their selected
// expansion. Entries with retain_original_in_parens render "expansion (ABBREV)";
// such already-expanded forms are not re-expanded (expansion is idempotent).
RewriteResult expand_abbreviations(std::string_view text, const AbbreviationLexicon& lexicon);

// Pick an expansion for an ambiguous abbreviation from the surrounding text.
// Cue hit wins (ties by priority), otherwise the highest-priority default.
// Throws Error(UnknownAbbreviation) when abbrev is not in the lexicon.
std::string disambiguate(const std::string& abbrev, std::string_view window,
                         const AbbreviationLexicon& lexicon);

// Alphabetic tokens not in the vocabulary, not protected, not all-caps, with a
// unique in-vocabulary candidate at minimal edit distance <= max_edit_distance
// are replaced. Ambiguous candidates leave the token untouched.
RewriteResult correct_spelling(std::string_view text, const SpellLexicon& lexicon);

// Longest-match, case-insensitive phrase replacement. Sentence capitalization
// of the first replaced word is preserved.
RewriteResult substitute_nonstandard_terms(std::string_view text, const TermMap& map);

struct SegmentChunk {
    std::string path; // e.g. "HISTORY/Chief Complaint" or "LABS"
    std::string text;
};

struct SegmentResult {
    std::vector<SegmentChunk> chunks;          // input order
    std::vector<std::string> consumed_headings; // heading line fragments removed from content
    std::map<std::string, std::string> merged() const;
};

// Line-based section segmentation. A heading is a line equal to a pattern or a
// line starting with a pattern followed by ':'. Content before any heading goes
// to HISTORY/Interim History. Heading lines are consumed.
SegmentResult segment_sections(std::string_view note_text, const HeadingSynonyms& synonyms);

struct GrammarResult {
    std::string text;
    long count = 0;
};

// Fixed rule set, applied in order, one count per rule application:
//   R1 adjacent duplicated-word removal (case-insensitive)
//   R2 whitespace before . , ; : ! ? removed
//   R3 terminal '.' appended to lines ending in an alphanumeric with >= 2 tokens
//   R4 sentence-initial capitalization (line starts and after . ! ? + space)
GrammarResult count_grammar_fixes(std::string_view text);

// Full deterministic pipeline: segment, then per chunk spell -> terms ->
// abbreviations -> grammar. Metrics carry the exact event lists and counts.
StandardizedNote standardize_rule_based(const SourceNote& note, const StandardizationResources& resources);

// Resource loading, validated against the type invariants.
AbbreviationLexicon load_abbreviations(const std::string& path);
TermMap load_terms(const std::string& path);
SpellLexicon load_vocabulary(const std::string& path, int max_edit_distance = 1);
HeadingSynonyms load_headings(const std::string& path);
// Loads abbreviations.json, terms.json, vocabulary.txt, headings.json from dir.
StandardizationResources load_resources(const std::string& dir);

} // namespace notestd
