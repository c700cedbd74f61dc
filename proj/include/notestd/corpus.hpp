#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace notestd {

struct SourceNote {
    std::string accession_num;
    std::string note_text;

    bool operator==(const SourceNote&) const = default;
};

struct FilterCriteria {
    std::size_t min_chars = 2000;
    // Applied only when the corpus carries a note-kind column.
    std::optional<std::set<std::string>> allowed_note_kinds;
};

struct DroppedNote {
    std::string accession_num;
    std::string reason;
};

struct FilterOutcome {
    std::vector<SourceNote> kept;
    std::vector<DroppedNote> dropped;
};

// RFC-4180 CSV, first row is the header. When id_column is absent, accession
// numbers are assigned "1", "2", ... in row order. An optional kind_column
// captures note-kind metadata for FilterCriteria::allowed_note_kinds.
std::vector<SourceNote> parse_corpus_csv(std::string_view raw,
                                         const std::string& text_column,
                                         const std::optional<std::string>& id_column = std::nullopt,
                                         const std::optional<std::string>& kind_column = std::nullopt,
                                         std::vector<std::string>* kinds_out = nullptr);

std::vector<SourceNote> filter_notes(const std::vector<SourceNote>& notes, const FilterCriteria& criteria,
                                     const std::vector<std::string>* kinds = nullptr);

// Same filter, but reports what was dropped and why.
FilterOutcome filter_notes_audited(const std::vector<SourceNote>& notes, const FilterCriteria& criteria,
                                   const std::vector<std::string>* kinds = nullptr);

// One compact JSON object per line, keys exactly accession_num / note_text, LF endings.
std::size_t write_notes_jsonl(const std::vector<SourceNote>& notes, std::ostream& sink);
std::vector<SourceNote> read_notes_jsonl(std::istream& source);

std::size_t write_notes_jsonl_file(const std::vector<SourceNote>& notes, const std::string& path);
std::vector<SourceNote> read_notes_jsonl_file(const std::string& path);

} // namespace notestd
