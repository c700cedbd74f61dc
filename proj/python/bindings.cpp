#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "notestd/backend.hpp"
#include "notestd/corpus.hpp"
#include "notestd/errors.hpp"
#include "notestd/evaluation.hpp"
#include "notestd/extraction.hpp"
#include "notestd/fixtures.hpp"
#include "notestd/interop.hpp"
#include "notestd/llm_backend.hpp"
#include "notestd/note_model.hpp"
#include "notestd/pipeline.hpp"
#include "notestd/rules_engine.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace notestd;

namespace {

json parse_or_throw(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw std::invalid_argument("invalid JSON");
    return doc;
}

StandardizedNote note_from_text(const std::string& note_json) {
    return coerce_note(parse_or_throw(note_json));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Clinical note standardization pipeline (C++ core)";

    py::register_exception<Error>(m, "NotestdError");

    py::class_<SourceNote>(m, "SourceNote")
        .def(py::init<>())
        .def(py::init([](std::string accession, std::string text) {
                 return SourceNote{std::move(accession), std::move(text)};
             }),
             py::arg("accession_num"), py::arg("note_text"))
        .def_readwrite("accession_num", &SourceNote::accession_num)
        .def_readwrite("note_text", &SourceNote::note_text)
        .def("__repr__", [](const SourceNote& n) {
            return "SourceNote(accession_num='" + n.accession_num + "', chars=" +
                   std::to_string(n.note_text.size()) + ")";
        });

    py::class_<Mention>(m, "Mention")
        .def_readonly("accession_num", &Mention::accession_num)
        .def_property_readonly("kind",
                               [](const Mention& m_) { return mention_kind_name(m_.kind); })
        .def_readonly("surface", &Mention::surface)
        .def_readonly("normalized", &Mention::normalized)
        .def_readonly("section_path", &Mention::section_path)
        .def("__repr__", [](const Mention& m_) {
            return std::string("Mention(") + mention_kind_name(m_.kind) + ", '" + m_.normalized +
                   "', " + m_.section_path + ")";
        });

    py::class_<StandardizationResources>(m, "StandardizationResources");
    py::class_<Gazetteer>(m, "Gazetteer");
    py::class_<ConceptMap>(m, "ConceptMap");

    // corpus
    m.def("parse_corpus_csv",
          [](const std::string& csv, const std::string& text_column,
             std::optional<std::string> id_column) {
              return parse_corpus_csv(csv, text_column, id_column);
          },
          py::arg("csv_text"), py::arg("text_column") = "note_text",
          py::arg("id_column") = std::nullopt);
    m.def("filter_notes",
          [](const std::vector<SourceNote>& notes, std::size_t min_chars) {
              FilterCriteria criteria;
              criteria.min_chars = min_chars;
              return filter_notes(notes, criteria);
          },
          py::arg("notes"), py::arg("min_chars") = 2000);
    m.def("read_notes_jsonl", &read_notes_jsonl_file, py::arg("path"));
    m.def("write_notes_jsonl",
          [](const std::vector<SourceNote>& notes, const std::string& path) {
              return write_notes_jsonl_file(notes, path);
          },
          py::arg("notes"), py::arg("path"));

    // note model
    m.def("validate_note", [](const std::string& note_json) {
        ValidationReport report = validate_note(parse_or_throw(note_json));
        std::vector<py::tuple> violations;
        for (const auto& v : report.violations) {
            violations.push_back(py::make_tuple(v.path, violation_kind_name(v.kind), v.detail));
        }
        return py::make_tuple(report.valid, violations);
    });
    m.def("repair_json",
          [](const std::string& raw) { return repair_json(raw).dump(); });
    m.def("coerce_note", [](const std::string& note_json) {
        return serialize_note_compact(note_from_text(note_json));
    });
    m.def("schema_key_paths", [] { return schema_key_paths(); });

    // rules engine
    m.def("load_resources", &load_resources, py::arg("directory"));
    m.def("standardize_note",
          [](const SourceNote& note, const StandardizationResources& resources, bool pretty) {
              StandardizedNote result = standardize_rule_based(note, resources);
              return pretty ? serialize_note_pretty(result) : serialize_note_compact(result);
          },
          py::arg("note"), py::arg("resources"), py::arg("pretty") = false);
    m.def("standardize_corpus",
          [](const std::vector<SourceNote>& notes, const StandardizationResources& resources,
             int parallelism) {
              RulesBackend backend(resources);
              BatchResult batch = standardize_corpus(notes, backend, parallelism);
              std::vector<py::tuple> out;
              for (const auto& [source, note] : batch.results) {
                  out.push_back(
                      py::make_tuple(source.accession_num, serialize_note_compact(note)));
              }
              return out;
          },
          py::arg("notes"), py::arg("resources"), py::arg("parallelism") = 1);

    // metrics
    m.def("corpus_summary",
          [](const std::vector<SourceNote>& notes, const std::vector<std::string>& standardized,
             int bins) {
              if (notes.size() != standardized.size()) {
                  throw std::invalid_argument("notes and standardized lengths differ");
              }
              std::vector<NoteStats> stats;
              for (std::size_t i = 0; i < notes.size(); ++i) {
                  stats.push_back(compute_note_stats(notes[i], note_from_text(standardized[i])));
              }
              return summary_to_json(aggregate(stats, bins)).dump();
          },
          py::arg("notes"), py::arg("standardized"), py::arg("bins") = 20);

    // extraction
    m.def("load_gazetteer", &load_gazetteer, py::arg("path"));
    m.def("extract_medications",
          [](const std::string& accession, const std::string& note_json, const Gazetteer& gazetteer) {
              return extract_medications(accession, note_from_text(note_json), gazetteer);
          });
    m.def("extract_findings",
          [](const std::string& accession, const std::string& note_json, const Gazetteer& gazetteer) {
              return extract_findings(accession, note_from_text(note_json), gazetteer);
          });
    m.def("frequency_table",
          [](const std::vector<Mention>& mentions, const std::string& kind, bool per_note) {
              MentionKind k = kind == "Medication" ? MentionKind::Medication : MentionKind::Finding;
              FrequencyTable table = frequency_table(
                  mentions, k, per_note ? CountMode::PerNotePresence : CountMode::RawOccurrences);
              std::vector<py::tuple> rows;
              for (const auto& row : table.rows) {
                  rows.push_back(py::make_tuple(row.normalized, row.count));
              }
              return rows;
          },
          py::arg("mentions"), py::arg("kind"), py::arg("per_note") = true);

    // interop
    m.def("load_concept_map", &load_concept_map, py::arg("path"));
    m.def("bundle_mentions",
          [](const std::vector<Mention>& mentions, const ConceptMap& table,
             const std::string& preferred) {
              auto system = code_system_from_name(preferred);
              if (!system) throw std::invalid_argument("unknown code system " + preferred);
              std::vector<InteropResource> resources;
              for (const auto& mention : mentions) {
                  resources.push_back(
                      to_resource(mention, map_to_ontology(mention, table, *system)));
              }
              return bundle_to_string(resources);
          },
          py::arg("mentions"), py::arg("concept_map"), py::arg("preferred") = "SNOMED-CT");

    // evaluation
    m.def("completeness_check",
          [](const SourceNote& source, const std::string& note_json) {
              ContentDiff diff = completeness_check(source, note_from_text(note_json));
              py::dict out;
              out["missing_tokens"] = diff.missing_tokens;
              out["added_tokens"] = diff.added_tokens;
              out["ledger_explained"] = diff.ledger_explained;
              return out;
          });
    m.def("rate_quality",
          [](const SourceNote& source, const std::string& note_json,
             const StandardizationResources& resources) {
              QualityContext context;
              context.resources = &resources;
              QualityRatings r =
                  rate_quality(source, note_from_text(note_json), RatingMode::Heuristic, context);
              py::dict out;
              out["text_organization"] = r.text_organization;
              out["spelling_and_grammar"] = r.spelling_and_grammar;
              out["abbreviation_expansion"] = r.abbreviation_expansion;
              out["terminology_standardization"] = r.terminology_standardization;
              out["completeness"] = r.completeness;
              return out;
          });
    m.def("sample_for_review", &sample_for_review, py::arg("notes"), py::arg("n"), py::arg("seed"));

    // llm plumbing that works offline
    m.def("build_prompt", [](const SourceNote& note) { return build_prompt(note); });
    m.def("estimate_cost",
          [](const std::vector<SourceNote>& notes, double cost_in, double cost_out,
             int parallelism) {
              BackendConfig config;
              config.cost_per_input_token = cost_in;
              config.cost_per_output_token = cost_out;
              CostEstimate estimate = estimate_cost(notes, config, parallelism);
              py::dict out;
              out["total_cost"] = estimate.total_cost;
              out["serial_seconds"] = estimate.serial_seconds;
              out["parallel_seconds"] = estimate.parallel_seconds;
              return out;
          },
          py::arg("notes"), py::arg("cost_per_input_token") = 0.0,
          py::arg("cost_per_output_token") = 0.0, py::arg("parallelism") = 1);

    // fixtures
    m.def("generate_corpus",
          [](std::size_t n, std::uint64_t seed, const std::string& profile_json, bool noise) {
              GeneratorOptions options;
              options.out_of_lexicon_noise = noise;
              if (profile_json == "zero") {
                  options.profile = GeneratorProfile::all_zero();
              } else if (!profile_json.empty() && profile_json != "default") {
                  options.profile = profile_from_json(parse_or_throw(profile_json));
              }
              GeneratedCorpus corpus = generate_corpus(n, seed, options);
              std::vector<std::string> ledgers;
              for (const auto& ledger : corpus.ledgers) {
                  ledgers.push_back(ledger_to_json(ledger).dump());
              }
              return py::make_tuple(corpus.notes, ledgers);
          },
          py::arg("n"), py::arg("seed"), py::arg("profile") = "default",
          py::arg("noise") = false);
}
