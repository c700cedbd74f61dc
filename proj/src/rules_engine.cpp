#include "notestd/rules_engine.hpp"

#include "notestd/errors.hpp"
#include "notestd/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace notestd {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

bool iends_with(std::string_view text, std::string_view suffix) {
    if (suffix.size() > text.size()) return false;
    return iequals(text.substr(text.size() - suffix.size()), suffix);
}

// Whole-word, case-insensitive containment of `needle` in `hay`.
bool contains_word(std::string_view hay, std::string_view needle) {
    if (needle.empty()) return false;
    for (std::size_t pos = 0; pos + needle.size() <= hay.size(); ++pos) {
        if (!iequals(hay.substr(pos, needle.size()), needle)) continue;
        if (text::on_word_boundary(hay, pos, needle.size())) return true;
    }
    return false;
}

const std::set<std::string>& canonical_sections() {
    static const std::set<std::string> s = {"HISTORY", "VITAL SIGNS", "EXAMINATION", "LABS",
                                            "RADIOLOGY", "IMPRESSION", "PLAN"};
    return s;
}

const std::set<std::string>& leaf_paths() {
    static const std::set<std::string> s = [] {
        std::set<std::string> out;
        StandardizedNote dummy;
        for (const auto& leaf : note_content_leaves(dummy)) out.insert(leaf.path);
        return out;
    }();
    return s;
}

std::string capitalize_first(std::string s) {
    for (char& c : s) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            break;
        }
        if (!std::isspace(static_cast<unsigned char>(c))) break;
    }
    return s;
}

} // namespace

const AbbrevEntry* AbbreviationLexicon::find(std::string_view abbrev) const {
    if (index_.size() == entries.size()) {
        auto it = index_.find(std::string(abbrev));
        return it == index_.end() ? nullptr : &entries[it->second];
    }
    for (const auto& entry : entries) {
        if (entry.abbrev == abbrev) return &entry;
    }
    return nullptr;
}

void AbbreviationLexicon::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < entries.size(); ++i) index_[entries[i].abbrev] = i;
}

std::string disambiguate(const std::string& abbrev, std::string_view window,
                         const AbbreviationLexicon& lexicon) {
    const AbbrevEntry* entry = lexicon.find(abbrev);
    if (!entry) throw Error(ErrorKind::UnknownAbbreviation, "'" + abbrev + "' not in lexicon");
    if (entry->expansions.size() == 1) return entry->expansions.front().expansion;

    const std::string window_lower = text::to_lower(window);
    const AbbrevExpansion* best_match = nullptr;
    for (const auto& exp : entry->expansions) {
        bool hit = std::any_of(exp.context_cues.begin(), exp.context_cues.end(),
                               [&](const std::string& cue) { return contains_word(window_lower, cue); });
        if (hit && (!best_match || exp.priority > best_match->priority)) best_match = &exp;
    }
    if (best_match) return best_match->expansion;

    const AbbrevExpansion* fallback = &entry->expansions.front();
    for (const auto& exp : entry->expansions) {
        if (exp.priority > fallback->priority) fallback = &exp;
    }
    return fallback->expansion;
}

RewriteResult expand_abbreviations(std::string_view input, const AbbreviationLexicon& lexicon) {
    RewriteResult result;
    result.text.reserve(input.size());

    // Candidates grouped by first character, longest first.
    std::array<std::vector<const AbbrevEntry*>, 256> by_first{};
    for (const auto& entry : lexicon.entries) {
        if (!entry.abbrev.empty()) {
            by_first[static_cast<unsigned char>(entry.abbrev[0])].push_back(&entry);
        }
    }
    for (auto& bucket : by_first) {
        std::sort(bucket.begin(), bucket.end(), [](const AbbrevEntry* a, const AbbrevEntry* b) {
            return a->abbrev.size() > b->abbrev.size();
        });
    }

    // An occurrence directly wrapped as "expansion (ABBREV)" is already
    // expanded; leave it alone so expansion is idempotent.
    auto already_expanded = [&](const AbbrevEntry& entry, std::size_t pos, std::size_t len) {
        if (pos == 0 || input[pos - 1] != '(') return false;
        std::size_t after = pos + len;
        if (after >= input.size() || input[after] != ')') return false;
        std::size_t j = pos - 1;
        while (j > 0 && input[j - 1] == ' ') --j;
        std::string_view before = input.substr(0, j);
        return std::any_of(entry.expansions.begin(), entry.expansions.end(),
                           [&](const AbbrevExpansion& e) { return iends_with(before, e.expansion); });
    };

    std::size_t i = 0;
    while (i < input.size()) {
        char c = input[i];
        const auto& bucket = by_first[static_cast<unsigned char>(c)];
        const AbbrevEntry* matched = nullptr;
        if (!bucket.empty() && (i == 0 || !text::is_word_char(input[i - 1]))) {
            for (const AbbrevEntry* entry : bucket) {
                const std::string& a = entry->abbrev;
                if (input.compare(i, a.size(), a) != 0) continue;
                if (!text::on_word_boundary(input, i, a.size())) continue;
                matched = entry;
                break;
            }
        }
        if (!matched || already_expanded(*matched, i, matched->abbrev.size())) {
            result.text.push_back(c);
            ++i;
            continue;
        }
        const std::size_t len = matched->abbrev.size();
        std::string expansion;
        if (matched->expansions.size() > 1) {
            std::string window = text::token_window(input, i, i + len, 10);
            expansion = disambiguate(matched->abbrev, window, lexicon);
        } else {
            expansion = matched->expansions.front().expansion;
        }
        std::string replacement = matched->retain_original_in_parens
                                      ? expansion + " (" + matched->abbrev + ")"
                                      : expansion;
        result.text += replacement;
        result.events.push_back(matched->abbrev + " -> " + replacement);
        i += len;
    }
    return result;
}

RewriteResult correct_spelling(std::string_view input, const SpellLexicon& lexicon) {
    RewriteResult result;
    result.text.reserve(input.size());
    const int maxd = std::clamp(lexicon.max_edit_distance, 1, 2);

    // Length buckets make the candidate scan cheap.
    std::vector<std::vector<const std::string*>> by_len;
    for (const auto& word : lexicon.vocabulary) {
        if (word.size() >= by_len.size()) by_len.resize(word.size() + 1);
        by_len[word.size()].push_back(&word);
    }

    std::size_t i = 0;
    while (i < input.size()) {
        if (!std::isalpha(static_cast<unsigned char>(input[i]))) {
            result.text.push_back(input[i]);
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < input.size() && std::isalpha(static_cast<unsigned char>(input[j]))) ++j;
        std::string_view token = input.substr(i, j - i);
        std::string lower = text::to_lower(token);

        bool skip = lexicon.vocabulary.count(lower) || lexicon.protected_terms.count(lower) ||
                    text::is_all_caps(token);
        if (!skip) {
            std::size_t best = static_cast<std::size_t>(maxd) + 1;
            const std::string* candidate = nullptr;
            bool ambiguous = false;
            const std::size_t lo = lower.size() > static_cast<std::size_t>(maxd)
                                       ? lower.size() - maxd
                                       : 0;
            const std::size_t hi = lower.size() + maxd;
            for (std::size_t len = lo; len <= hi && len < by_len.size(); ++len) {
                for (const std::string* word : by_len[len]) {
                    std::size_t d = text::edit_distance_bounded(lower, *word, best);
                    if (d < best) {
                        best = d;
                        candidate = word;
                        ambiguous = false;
                    } else if (d == best && candidate && *word != *candidate) {
                        ambiguous = true;
                    }
                }
            }
            if (candidate && !ambiguous && best <= static_cast<std::size_t>(maxd)) {
                std::string replacement = *candidate;
                if (std::isupper(static_cast<unsigned char>(token[0]))) {
                    replacement = capitalize_first(replacement);
                }
                result.events.push_back(std::string(token) + " -> " + replacement);
                result.text += replacement;
                i = j;
                continue;
            }
        }
        result.text.append(token);
        i = j;
    }
    return result;
}

RewriteResult substitute_nonstandard_terms(std::string_view input, const TermMap& map) {
    RewriteResult result;
    result.text.reserve(input.size());

    std::array<std::vector<const TermPair*>, 256> by_first{};
    for (const auto& pair : map.pairs) {
        if (pair.nonstandard.empty()) continue;
        unsigned char lo = static_cast<unsigned char>(
            std::tolower(static_cast<unsigned char>(pair.nonstandard[0])));
        by_first[lo].push_back(&pair);
        unsigned char up = static_cast<unsigned char>(
            std::toupper(static_cast<unsigned char>(pair.nonstandard[0])));
        if (up != lo) by_first[up].push_back(&pair);
    }
    for (auto& bucket : by_first) {
        std::sort(bucket.begin(), bucket.end(), [](const TermPair* a, const TermPair* b) {
            return a->nonstandard.size() > b->nonstandard.size();
        });
    }

    std::size_t i = 0;
    while (i < input.size()) {
        char c = input[i];
        const TermPair* matched = nullptr;
        if (text::is_word_char(c) && (i == 0 || !text::is_word_char(input[i - 1]))) {
            for (const TermPair* pair : by_first[static_cast<unsigned char>(c)]) {
                const std::string& phrase = pair->nonstandard;
                if (i + phrase.size() > input.size()) continue;
                if (!iequals(input.substr(i, phrase.size()), phrase)) continue;
                if (!text::on_word_boundary(input, i, phrase.size())) continue;
                matched = pair;
                break;
            }
        }
        if (!matched) {
            result.text.push_back(c);
            ++i;
            continue;
        }
        std::string replacement = matched->standard;
        if (std::isupper(static_cast<unsigned char>(input[i])) &&
            std::islower(static_cast<unsigned char>(replacement[0]))) {
            replacement = capitalize_first(replacement);
        }
        result.text += replacement;
        result.events.push_back(matched->nonstandard + " -> " + matched->standard);
        i += matched->nonstandard.size();
    }
    return result;
}

std::map<std::string, std::string> SegmentResult::merged() const {
    std::map<std::string, std::string> out;
    for (const auto& chunk : chunks) {
        auto [it, inserted] = out.try_emplace(chunk.path, chunk.text);
        if (!inserted) {
            it->second += "\n";
            it->second += chunk.text;
        }
    }
    return out;
}

namespace {

std::string resolve_section_path(const HeadingRule& rule, const HeadingSynonyms& synonyms) {
    std::string path = rule.canonical_section;
    if (!rule.canonical_subsection.empty()) path += "/" + rule.canonical_subsection;
    // Walk defaults until a leaf is reached (LABS and RADIOLOGY already are).
    while (!leaf_paths().count(path)) {
        auto it = synonyms.default_subsection.find(path);
        if (it == synonyms.default_subsection.end()) break;
        path += "/" + it->second;
    }
    return path;
}

struct HeadingMatch {
    const HeadingRule* rule;
    std::string heading_text; // the consumed heading fragment
    std::string inline_content;
};

std::optional<HeadingMatch> match_heading(const std::string& line,
                                          const std::vector<const HeadingRule*>& by_length) {
    std::string trimmed = text::trim(line);
    if (trimmed.empty()) return std::nullopt;
    std::string lower = text::to_lower(trimmed);
    for (const HeadingRule* rule : by_length) {
        const std::string& pat = rule->pattern;
        if (lower.size() < pat.size()) continue;
        if (lower.compare(0, pat.size(), pat) != 0) continue;
        if (lower.size() == pat.size()) {
            return HeadingMatch{rule, trimmed, ""};
        }
        std::size_t k = pat.size();
        while (k < trimmed.size() && (trimmed[k] == ' ' || trimmed[k] == '\t')) ++k;
        if (k < trimmed.size() && trimmed[k] == ':') {
            return HeadingMatch{rule, trimmed.substr(0, k + 1), text::trim(trimmed.substr(k + 1))};
        }
    }
    return std::nullopt;
}

} // namespace

SegmentResult segment_sections(std::string_view note_text, const HeadingSynonyms& synonyms) {
    SegmentResult result;
    if (text::trim(note_text).empty()) return result;

    std::vector<const HeadingRule*> by_length;
    by_length.reserve(synonyms.mapping.size());
    for (const auto& rule : synonyms.mapping) by_length.push_back(&rule);
    std::sort(by_length.begin(), by_length.end(), [](const HeadingRule* a, const HeadingRule* b) {
        return a->pattern.size() > b->pattern.size();
    });

    std::string current_path = "HISTORY/Interim History";
    std::string current_text;
    auto flush = [&]() {
        std::string trimmed = text::trim(current_text);
        if (!trimmed.empty()) result.chunks.push_back({current_path, trimmed});
        current_text.clear();
    };

    for (const auto& line : text::split_lines(note_text)) {
        auto match = match_heading(line, by_length);
        if (!match) {
            current_text += line;
            current_text += "\n";
            continue;
        }
        flush();
        current_path = resolve_section_path(*match->rule, synonyms);
        result.consumed_headings.push_back(match->heading_text);
        if (!match->inline_content.empty()) {
            current_text += match->inline_content;
            current_text += "\n";
        }
    }
    flush();
    return result;
}

GrammarResult count_grammar_fixes(std::string_view input) {
    long count = 0;
    std::string s(input);

    // R1: collapse adjacent duplicated words (case-insensitive, whitespace-separated).
    {
        std::string out;
        out.reserve(s.size());
        std::size_t i = 0;
        std::string prev_token;
        std::size_t pending_ws_start = std::string::npos;
        while (i < s.size()) {
            if (std::isalpha(static_cast<unsigned char>(s[i]))) {
                std::size_t j = i;
                while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
                std::string token(s.substr(i, j - i));
                if (!prev_token.empty() && pending_ws_start != std::string::npos &&
                    iequals(token, prev_token)) {
                    out.erase(pending_ws_start); // drop separator, skip duplicate
                    ++count;
                } else {
                    out += token;
                }
                prev_token = token;
                pending_ws_start = std::string::npos;
                i = j;
            } else if (s[i] == ' ' || s[i] == '\t') {
                if (pending_ws_start == std::string::npos) pending_ws_start = out.size();
                out.push_back(s[i]);
                ++i;
            } else {
                prev_token.clear();
                pending_ws_start = std::string::npos;
                out.push_back(s[i]);
                ++i;
            }
        }
        s = std::move(out);
    }

    // R2: remove spaces and tabs before . , ; : ! ?
    {
        std::string out;
        out.reserve(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c == ' ' || c == '\t') {
                std::size_t j = i;
                while (j < s.size() && (s[j] == ' ' || s[j] == '\t')) ++j;
                if (j < s.size() && std::strchr(".,;:!?", s[j])) {
                    ++count;
                    i = j - 1; // skip the run, punctuation handled next iteration
                    continue;
                }
            }
            out.push_back(c);
        }
        s = std::move(out);
    }

    // R3: terminal '.' for sentence-like lines (>= 2 tokens, ends alphanumeric).
    {
        auto lines = text::split_lines(s);
        std::string out;
        for (std::size_t li = 0; li < lines.size(); ++li) {
            std::string line = lines[li];
            std::size_t end = line.find_last_not_of(" \t");
            if (end != std::string::npos && text::is_word_char(line[end]) &&
                text::tokenize_alnum(line).size() >= 2) {
                line = line.substr(0, end + 1) + ".";
                ++count;
            }
            out += line;
            if (li + 1 < lines.size() || (!s.empty() && s.back() == '\n')) out += "\n";
        }
        s = std::move(out);
    }

    // R4: sentence-initial capitalization at line starts and after . ! ? + whitespace.
    {
        bool at_sentence_start = true;
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c == '\n') {
                at_sentence_start = true;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            if (std::isalpha(static_cast<unsigned char>(c))) {
                if (at_sentence_start && std::islower(static_cast<unsigned char>(c))) {
                    s[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                    ++count;
                }
                at_sentence_start = false;
            } else if (c == '.' || c == '!' || c == '?') {
                at_sentence_start = (i + 1 >= s.size()) ||
                                    std::isspace(static_cast<unsigned char>(s[i + 1]));
            } else {
                at_sentence_start = false;
            }
        }
    }

    return {std::move(s), count};
}

StandardizedNote standardize_rule_based(const SourceNote& note,
                                        const StandardizationResources& resources) {
    SegmentResult segments = segment_sections(note.note_text, resources.headings);

    // Abbreviation tokens must survive until the expansion stage.
    SpellLexicon spelling = resources.spelling;
    for (const auto& entry : resources.abbreviations.entries) {
        spelling.protected_terms.insert(text::to_lower(entry.abbrev));
    }

    StandardizedNote out;
    std::map<std::string, std::string> leaf_text;
    for (const auto& chunk : segments.chunks) {
        RewriteResult spelled = correct_spelling(chunk.text, spelling);
        RewriteResult termed = substitute_nonstandard_terms(spelled.text, resources.terms);
        RewriteResult expanded = expand_abbreviations(termed.text, resources.abbreviations);
        GrammarResult grammared = count_grammar_fixes(expanded.text);

        auto& metrics = out.metrics;
        metrics.spelling_errors.insert(metrics.spelling_errors.end(), spelled.events.begin(),
                                       spelled.events.end());
        metrics.non_standard_terms.insert(metrics.non_standard_terms.end(), termed.events.begin(),
                                          termed.events.end());
        metrics.abbreviations_expanded.insert(metrics.abbreviations_expanded.end(),
                                              expanded.events.begin(), expanded.events.end());
        metrics.grammatical_errors += grammared.count;

        std::string body = text::trim(grammared.text);
        auto [it, inserted] = leaf_text.try_emplace(chunk.path, body);
        if (!inserted) {
            it->second += "\n";
            it->second += body;
        }
    }
    for (const auto& [path, body] : leaf_text) {
        if (std::string* leaf = leaf_by_path(out, path)) *leaf = body;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Resource loading

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    json v = json::parse(in, nullptr, false);
    if (v.is_discarded()) throw Error(ErrorKind::ResourceInvalid, path + ": invalid JSON");
    return v;
}

void check(bool cond, const std::string& path, const std::string& message) {
    if (!cond) throw Error(ErrorKind::ResourceInvalid, path + ": " + message);
}

} // namespace

AbbreviationLexicon load_abbreviations(const std::string& path) {
    json doc = load_json_file(path);
    check(doc.is_array(), path, "expected a top-level array");
    AbbreviationLexicon lexicon;
    std::set<std::string> seen;
    for (const auto& item : doc) {
        AbbrevEntry entry;
        entry.abbrev = item.at("abbrev").get<std::string>();
        check(!entry.abbrev.empty(), path, "abbrev must be non-empty");
        check(seen.insert(entry.abbrev).second, path, "duplicate abbrev '" + entry.abbrev + "'");
        entry.retain_original_in_parens = item.value("retain_original_in_parens", false);
        check(item.contains("expansions") && item["expansions"].is_array() &&
                  !item["expansions"].empty(),
              path, "'" + entry.abbrev + "' needs at least one expansion");
        for (const auto& e : item["expansions"]) {
            AbbrevExpansion exp;
            exp.expansion = e.at("expansion").get<std::string>();
            check(!exp.expansion.empty(), path, "empty expansion for '" + entry.abbrev + "'");
            check(exp.expansion.find(" -> ") == std::string::npos, path,
                  "expansion may not contain ' -> '");
            exp.priority = e.value("priority", 0);
            if (e.contains("context_cues")) {
                for (const auto& cue : e["context_cues"]) {
                    exp.context_cues.push_back(text::to_lower(cue.get<std::string>()));
                }
            }
            entry.expansions.push_back(std::move(exp));
        }
        if (entry.expansions.size() > 1) {
            std::set<std::string> all_cues;
            int top_priority = entry.expansions.front().priority;
            for (const auto& exp : entry.expansions) {
                check(!exp.context_cues.empty(), path,
                      "ambiguous '" + entry.abbrev + "' needs context cues per expansion");
                for (const auto& cue : exp.context_cues) {
                    check(all_cues.insert(cue).second, path,
                          "'" + entry.abbrev + "': cue '" + cue + "' used by two expansions");
                }
                top_priority = std::max(top_priority, exp.priority);
            }
            int top_count = 0;
            for (const auto& exp : entry.expansions) {
                if (exp.priority == top_priority) ++top_count;
            }
            check(top_count == 1, path,
                  "ambiguous '" + entry.abbrev + "' needs exactly one highest-priority default");
        }
        lexicon.entries.push_back(std::move(entry));
    }
    // An expansion containing another abbreviation as a whole token would be
    // re-expanded on a second pass; reject such lexicons.
    for (const auto& entry : lexicon.entries) {
        for (const auto& exp : entry.expansions) {
            for (const auto& tok : text::tokenize_alnum(exp.expansion)) {
                for (const auto& other : lexicon.entries) {
                    check(tok != other.abbrev, path,
                          "expansion '" + exp.expansion + "' contains abbreviation '" +
                              other.abbrev + "'");
                }
            }
        }
    }
    lexicon.rebuild_index();
    return lexicon;
}

TermMap load_terms(const std::string& path) {
    json doc = load_json_file(path);
    check(doc.is_array(), path, "expected a top-level array");
    TermMap map;
    std::set<std::string> seen;
    for (const auto& item : doc) {
        TermPair pair;
        pair.nonstandard = item.at("nonstandard").get<std::string>();
        pair.standard = item.at("standard").get<std::string>();
        check(!pair.nonstandard.empty() && !pair.standard.empty(), path, "empty term in pair");
        std::string lower = text::to_lower(pair.nonstandard);
        check(seen.insert(lower).second, path, "duplicate nonstandard term '" + pair.nonstandard + "'");
        check(lower != text::to_lower(pair.standard), path,
              "'" + pair.nonstandard + "' maps to itself");
        check(pair.nonstandard.find(" -> ") == std::string::npos &&
                  pair.standard.find(" -> ") == std::string::npos,
              path, "terms may not contain ' -> '");
        map.pairs.push_back(std::move(pair));
    }
    for (const auto& pair : map.pairs) {
        check(!seen.count(text::to_lower(pair.standard)), path,
              "standard term '" + pair.standard + "' is also a nonstandard term");
    }
    return map;
}

SpellLexicon load_vocabulary(const std::string& path, int max_edit_distance) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    SpellLexicon lexicon;
    lexicon.max_edit_distance = max_edit_distance;
    check(max_edit_distance == 1 || max_edit_distance == 2, path,
          "max_edit_distance must be 1 or 2");
    std::string line;
    while (std::getline(in, line)) {
        std::string word = text::trim(line);
        if (word.empty() || word[0] == '#') continue;
        lexicon.vocabulary.insert(text::to_lower(word));
    }
    check(!lexicon.vocabulary.empty(), path, "vocabulary is empty");
    return lexicon;
}

HeadingSynonyms load_headings(const std::string& path) {
    json doc = load_json_file(path);
    check(doc.is_object() && doc.contains("rules"), path, "expected {rules, default_subsection}");
    HeadingSynonyms synonyms;
    if (doc.contains("default_subsection")) {
        for (auto it = doc["default_subsection"].begin(); it != doc["default_subsection"].end(); ++it) {
            synonyms.default_subsection[it.key()] = it.value().get<std::string>();
        }
    }
    std::set<std::string> seen;
    std::set<std::string> reachable;
    for (const auto& item : doc["rules"]) {
        HeadingRule rule;
        rule.pattern = text::to_lower(item.at("pattern").get<std::string>());
        rule.canonical_section = item.at("section").get<std::string>();
        rule.canonical_subsection = item.value("subsection", "");
        check(!rule.pattern.empty(), path, "empty heading pattern");
        check(seen.insert(rule.pattern).second, path, "duplicate pattern '" + rule.pattern + "'");
        check(canonical_sections().count(rule.canonical_section), path,
              "unknown section '" + rule.canonical_section + "'");
        std::string resolved = resolve_section_path(rule, synonyms);
        check(leaf_paths().count(resolved), path,
              "pattern '" + rule.pattern + "' resolves to non-leaf '" + resolved + "'");
        reachable.insert(rule.canonical_section);
        synonyms.mapping.push_back(std::move(rule));
    }
    for (const auto& section : canonical_sections()) {
        check(reachable.count(section), path, "section '" + section + "' unreachable from patterns");
    }
    return synonyms;
}

StandardizationResources load_resources(const std::string& dir) {
    StandardizationResources resources;
    resources.abbreviations = load_abbreviations(dir + "/abbreviations.json");
    resources.terms = load_terms(dir + "/terms.json");
    resources.spelling = load_vocabulary(dir + "/vocabulary.txt");
    resources.headings = load_headings(dir + "/headings.json");
    return resources;
}

} // namespace notestd
