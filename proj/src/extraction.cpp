#include "notestd/extraction.hpp"

#include "notestd/errors.hpp"
#include "notestd/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
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

struct Pattern {
    const std::string* phrase;    // synonym or canonical, as listed
    const std::string* canonical;
};

// All phrases grouped by lowercased first character, longest first.
std::array<std::vector<Pattern>, 256> build_patterns(const Gazetteer& gazetteer) {
    std::array<std::vector<Pattern>, 256> by_first{};
    auto add = [&](const std::string& phrase, const std::string& canonical) {
        if (phrase.empty()) return;
        unsigned char lo = static_cast<unsigned char>(
            std::tolower(static_cast<unsigned char>(phrase[0])));
        by_first[lo].push_back({&phrase, &canonical});
        unsigned char up = static_cast<unsigned char>(
            std::toupper(static_cast<unsigned char>(phrase[0])));
        if (up != lo) by_first[up].push_back({&phrase, &canonical});
    };
    for (const auto& entry : gazetteer.entries) {
        add(entry.canonical, entry.canonical);
        for (const auto& syn : entry.synonyms) add(syn, entry.canonical);
    }
    for (auto& bucket : by_first) {
        std::sort(bucket.begin(), bucket.end(), [](const Pattern& a, const Pattern& b) {
            return a.phrase->size() > b.phrase->size();
        });
    }
    return by_first;
}

void scan_leaf(const std::string& accession, MentionKind kind, const std::string& path,
               const std::string& content, const std::array<std::vector<Pattern>, 256>& patterns,
               std::vector<Mention>& out) {
    std::size_t i = 0;
    const std::string_view sv(content);
    while (i < sv.size()) {
        char c = sv[i];
        if (!text::is_word_char(c) || (i > 0 && text::is_word_char(sv[i - 1]))) {
            ++i;
            continue;
        }
        const Pattern* matched = nullptr;
        for (const Pattern& p : patterns[static_cast<unsigned char>(c)]) {
            const std::string& phrase = *p.phrase;
            if (i + phrase.size() > sv.size()) continue;
            if (!iequals(sv.substr(i, phrase.size()), phrase)) continue;
            if (!text::on_word_boundary(sv, i, phrase.size())) continue;
            matched = &p;
            break;
        }
        if (matched) {
            Mention mention;
            mention.accession_num = accession;
            mention.kind = kind;
            mention.surface = std::string(sv.substr(i, matched->phrase->size()));
            mention.normalized = text::to_lower(*matched->canonical);
            mention.section_path = path;
            out.push_back(std::move(mention));
            i += matched->phrase->size();
        } else {
            ++i;
        }
    }
}

bool path_in_sections(const std::string& path, std::initializer_list<const char*> sections) {
    for (const char* section : sections) {
        std::string prefix = std::string(section);
        if (path == prefix) return true;
        if (path.size() > prefix.size() && path.compare(0, prefix.size(), prefix) == 0 &&
            path[prefix.size()] == '/')
            return true;
    }
    return false;
}

} // namespace

const char* mention_kind_name(MentionKind kind) {
    return kind == MentionKind::Medication ? "Medication" : "Finding";
}

Gazetteer load_gazetteer(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw Error(ErrorKind::ResourceInvalid, path + ": expected a JSON array");
    }
    Gazetteer gazetteer;
    std::set<std::string> seen;
    for (const auto& item : doc) {
        GazetteerEntry entry;
        entry.canonical = text::to_lower(item.at("canonical").get<std::string>());
        if (entry.canonical.empty()) {
            throw Error(ErrorKind::ResourceInvalid, path + ": empty canonical name");
        }
        if (!seen.insert(entry.canonical).second) {
            throw Error(ErrorKind::ResourceInvalid,
                        path + ": duplicate canonical '" + entry.canonical + "'");
        }
        if (item.contains("synonyms")) {
            for (const auto& syn : item["synonyms"]) {
                entry.synonyms.push_back(syn.get<std::string>());
            }
        }
        gazetteer.entries.push_back(std::move(entry));
    }
    return gazetteer;
}

std::vector<Mention> extract_medications(const std::string& accession, const StandardizedNote& note,
                                         const Gazetteer& gazetteer) {
    auto patterns = build_patterns(gazetteer);
    std::vector<Mention> raw;
    for (const auto& leaf : note_content_leaves(note)) {
        if (!path_in_sections(leaf.path, {"PLAN"})) continue;
        scan_leaf(accession, MentionKind::Medication, leaf.path, *leaf.value, patterns, raw);
    }
    std::vector<Mention> out;
    std::set<std::string> seen; // one mention per (note, normalized)
    for (auto& mention : raw) {
        if (seen.insert(mention.normalized).second) out.push_back(std::move(mention));
    }
    return out;
}

std::vector<Mention> extract_findings(const std::string& accession, const StandardizedNote& note,
                                      const Gazetteer& gazetteer) {
    auto patterns = build_patterns(gazetteer);
    std::vector<Mention> raw;
    for (const auto& leaf : note_content_leaves(note)) {
        if (!path_in_sections(leaf.path, {"HISTORY", "EXAMINATION", "IMPRESSION"})) continue;
        scan_leaf(accession, MentionKind::Finding, leaf.path, *leaf.value, patterns, raw);
    }
    std::vector<Mention> out;
    std::set<std::pair<std::string, std::string>> seen; // (normalized, section_path)
    for (auto& mention : raw) {
        if (seen.insert({mention.normalized, mention.section_path}).second) {
            out.push_back(std::move(mention));
        }
    }
    return out;
}

FrequencyTable frequency_table(const std::vector<Mention>& mentions, MentionKind kind,
                               CountMode mode) {
    std::map<std::string, long> counts;
    if (mode == CountMode::PerNotePresence) {
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& mention : mentions) {
            if (mention.kind != kind) continue;
            if (seen.insert({mention.accession_num, mention.normalized}).second) {
                ++counts[mention.normalized];
            }
        }
    } else {
        for (const auto& mention : mentions) {
            if (mention.kind == kind) ++counts[mention.normalized];
        }
    }
    FrequencyTable table;
    for (const auto& [normalized, count] : counts) {
        table.rows.push_back({normalized, count});
        table.total_mentions += count;
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const FrequencyRow& a, const FrequencyRow& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.normalized < b.normalized;
    });
    return table;
}

ordered_json mention_to_json(const Mention& mention) {
    ordered_json obj;
    obj["accession_num"] = mention.accession_num;
    obj["kind"] = mention_kind_name(mention.kind);
    obj["surface"] = mention.surface;
    obj["normalized"] = mention.normalized;
    obj["section_path"] = mention.section_path;
    return obj;
}

Mention mention_from_json(const json& value) {
    Mention mention;
    mention.accession_num = value.at("accession_num").get<std::string>();
    std::string kind = value.at("kind").get<std::string>();
    if (kind == "Medication") {
        mention.kind = MentionKind::Medication;
    } else if (kind == "Finding") {
        mention.kind = MentionKind::Finding;
    } else {
        throw Error(ErrorKind::MalformedLine, "unknown mention kind '" + kind + "'");
    }
    mention.surface = value.at("surface").get<std::string>();
    mention.normalized = value.at("normalized").get<std::string>();
    mention.section_path = value.at("section_path").get<std::string>();
    return mention;
}

std::string build_extraction_prompt(const std::string& accession, const StandardizedNote& note,
                                    MentionKind kind) {
    std::ostringstream out;
    const bool meds = kind == MentionKind::Medication;
    out << "You are a clinical information extraction assistant.\n";
    if (meds) {
        out << "List every medication mentioned in the PLAN section below.\n";
    } else {
        out << "List every sign or symptom mentioned in the HISTORY, EXAMINATION, and "
               "IMPRESSION sections below.\n";
    }
    out << "Respond with only a JSON array of objects with keys "
           "\"surface\", \"normalized\", and \"section\" (the section path the item was "
           "found in).\n\n";
    out << "Note " << accession << ":\n";
    for (const auto& leaf : note_content_leaves(note)) {
        bool wanted = meds ? path_in_sections(leaf.path, {"PLAN"})
                           : path_in_sections(leaf.path, {"HISTORY", "EXAMINATION", "IMPRESSION"});
        if (!wanted || leaf.value->empty()) continue;
        out << leaf.path << ": " << *leaf.value << "\n";
    }
    return out.str();
}

LlmExtractionResult parse_extraction_response(const std::string& accession, const std::string& raw,
                                              MentionKind kind) {
    LlmExtractionResult result;
    // Arrays also need the fence/prose salvage passes; wrap and reuse them.
    json doc = json::parse(raw, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        std::size_t first = raw.find('[');
        std::size_t last = raw.rfind(']');
        if (first != std::string::npos && last != std::string::npos && last > first) {
            doc = json::parse(raw.substr(first, last - first + 1), nullptr, false);
        }
    }
    if (doc.is_discarded() || !doc.is_array()) return result;
    result.parse_ok = true;

    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("normalized") || !item["normalized"].is_string()) {
            result.rejected.push_back(item.dump());
            continue;
        }
        Mention mention;
        mention.accession_num = accession;
        mention.kind = kind;
        mention.normalized = text::to_lower(item["normalized"].get<std::string>());
        mention.surface = item.value("surface", mention.normalized);
        mention.section_path = item.value("section", "");
        bool confined = kind == MentionKind::Medication
                            ? path_in_sections(mention.section_path, {"PLAN"})
                            : path_in_sections(mention.section_path,
                                               {"HISTORY", "EXAMINATION", "IMPRESSION"});
        if (!confined || mention.normalized.empty()) {
            result.rejected.push_back(item.dump());
            continue;
        }
        result.mentions.push_back(std::move(mention));
    }
    return result;
}

} // namespace notestd
