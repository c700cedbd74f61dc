#include "notestd/corpus.hpp"

#include "notestd/errors.hpp"
#include "notestd/text.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <unordered_set>

namespace notestd {

namespace {

using ordered_json = nlohmann::ordered_json;

// RFC-4180: comma-separated, fields optionally quoted with '"', quotes
// escaped by doubling, records end at CRLF or LF, quoted fields may span lines.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view raw) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
    const std::size_t n = raw.size();

    auto end_field = [&]() {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&]() {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    while (i < n) {
        char c = raw[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && raw[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field_started && field.empty()) {
                    in_quotes = true;
                    field_started = true;
                } else {
                    field.push_back(c); // stray quote inside unquoted field, keep as data
                }
                ++i;
                break;
            case ',':
                end_field();
                ++i;
                break;
            case '\r':
                if (i + 1 < n && raw[i + 1] == '\n') {
                    end_record();
                    i += 2;
                } else {
                    field.push_back(c);
                    ++i;
                }
                break;
            case '\n':
                end_record();
                ++i;
                break;
            default:
                field_started = true;
                field.push_back(c);
                ++i;
                break;
        }
    }
    if (in_quotes) throw Error(ErrorKind::MalformedLine, "unterminated quoted field at end of input");
    if (field_started || !field.empty() || !record.empty()) end_record();
    return records;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw Error(ErrorKind::MissingColumn, "column '" + name + "' not found in CSV header");
}

} // namespace

std::vector<SourceNote> parse_corpus_csv(std::string_view raw,
                                         const std::string& text_column,
                                         const std::optional<std::string>& id_column,
                                         const std::optional<std::string>& kind_column,
                                         std::vector<std::string>* kinds_out) {
    if (!text::is_valid_utf8(raw)) {
        throw Error(ErrorKind::EncodingError, "input is not valid UTF-8");
    }
    auto records = parse_csv_records(raw);
    if (records.empty()) throw Error(ErrorKind::EmptyCorpus, "no rows in CSV input");

    const auto& header = records.front();
    const std::size_t text_idx = find_column(header, text_column);
    std::optional<std::size_t> id_idx;
    if (id_column) id_idx = find_column(header, *id_column);
    std::optional<std::size_t> kind_idx;
    if (kind_column) kind_idx = find_column(header, *kind_column);

    if (records.size() == 1) throw Error(ErrorKind::EmptyCorpus, "CSV contains a header but no data rows");

    std::vector<SourceNote> notes;
    notes.reserve(records.size() - 1);
    std::unordered_set<std::string> seen;
    if (kinds_out) kinds_out->clear();

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& row = records[r];
        auto cell = [&](std::size_t idx) -> std::string {
            return idx < row.size() ? row[idx] : std::string();
        };
        SourceNote note;
        note.note_text = cell(text_idx);
        if (text::trim(note.note_text).empty()) {
            throw Error(ErrorKind::MalformedLine,
                        "row " + std::to_string(r + 1) + ": empty note text");
        }
        note.accession_num = id_idx ? cell(*id_idx) : std::to_string(r);
        if (note.accession_num.empty()) {
            throw Error(ErrorKind::MalformedLine,
                        "row " + std::to_string(r + 1) + ": empty accession number");
        }
        if (!seen.insert(note.accession_num).second) {
            throw Error(ErrorKind::DuplicateAccession,
                        "accession '" + note.accession_num + "' appears more than once");
        }
        if (kinds_out) kinds_out->push_back(kind_idx ? cell(*kind_idx) : std::string());
        notes.push_back(std::move(note));
    }
    return notes;
}

FilterOutcome filter_notes_audited(const std::vector<SourceNote>& notes, const FilterCriteria& criteria,
                                   const std::vector<std::string>* kinds) {
    FilterOutcome out;
    for (std::size_t i = 0; i < notes.size(); ++i) {
        const auto& note = notes[i];
        std::size_t chars = text::count_scalars(note.note_text);
        if (chars < criteria.min_chars) {
            out.dropped.push_back({note.accession_num,
                                   "length " + std::to_string(chars) + " < min_chars " +
                                       std::to_string(criteria.min_chars)});
            continue;
        }
        if (criteria.allowed_note_kinds && kinds && i < kinds->size()) {
            const std::string& kind = (*kinds)[i];
            if (!criteria.allowed_note_kinds->count(kind)) {
                out.dropped.push_back({note.accession_num, "note kind '" + kind + "' not allowed"});
                continue;
            }
        }
        out.kept.push_back(note);
    }
    return out;
}

std::vector<SourceNote> filter_notes(const std::vector<SourceNote>& notes, const FilterCriteria& criteria,
                                     const std::vector<std::string>* kinds) {
    return filter_notes_audited(notes, criteria, kinds).kept;
}

std::size_t write_notes_jsonl(const std::vector<SourceNote>& notes, std::ostream& sink) {
    for (const auto& note : notes) {
        ordered_json obj;
        obj["accession_num"] = note.accession_num;
        obj["note_text"] = note.note_text;
        sink << obj.dump() << '\n';
    }
    return notes.size();
}

std::vector<SourceNote> read_notes_jsonl(std::istream& source) {
    std::vector<SourceNote> notes;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("accession_num") ||
            !obj.contains("note_text") || !obj["accession_num"].is_string() ||
            !obj["note_text"].is_string()) {
            throw Error(ErrorKind::MalformedLine, "line " + std::to_string(line_no) +
                                                      ": expected {accession_num, note_text} object");
        }
        SourceNote note{obj["accession_num"].get<std::string>(), obj["note_text"].get<std::string>()};
        if (note.accession_num.empty() || text::trim(note.note_text).empty()) {
            throw Error(ErrorKind::MalformedLine,
                        "line " + std::to_string(line_no) + ": empty accession or note text");
        }
        if (!seen.insert(note.accession_num).second) {
            throw Error(ErrorKind::DuplicateAccession,
                        "accession '" + note.accession_num + "' appears more than once");
        }
        notes.push_back(std::move(note));
    }
    return notes;
}

std::size_t write_notes_jsonl_file(const std::vector<SourceNote>& notes, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    return write_notes_jsonl(notes, out);
}

std::vector<SourceNote> read_notes_jsonl_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    return read_notes_jsonl(in);
}

} // namespace notestd
