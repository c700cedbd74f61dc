#include "notestd/backend.hpp"
#include "notestd/corpus.hpp"
#include "notestd/errors.hpp"
#include "notestd/evaluation.hpp"
#include "notestd/extraction.hpp"
#include "notestd/fixtures.hpp"
#include "notestd/hash.hpp"
#include "notestd/interop.hpp"
#include "notestd/llm_backend.hpp"
#include "notestd/note_model.hpp"
#include "notestd/pipeline.hpp"
#include "notestd/rules_engine.hpp"
#include "notestd/text.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace notestd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

struct RunConfig {
    std::string backend = "rules";
    int parallelism = 1;
    std::string resources;
    std::string gazetteers;
    std::string concept_map;
    std::string thresholds;
    std::string out_dir = "out";
    std::uint64_t seed = 20;
    int bins = 20;
    long min_chars = 2000;
    BackendConfig llm;

    std::string resources_dir() const {
        if (!resources.empty()) return resources;
        if (const char* env = std::getenv("NOTESTD_RESOURCES")) return env;
        return "resources";
    }
    std::string gazetteer_dir() const { return gazetteers.empty() ? resources_dir() : gazetteers; }
    std::string concept_map_path() const {
        return concept_map.empty() ? resources_dir() + "/concept_map.json" : concept_map;
    }

    json to_json() const {
        json j;
        j["backend"] = backend;
        j["parallelism"] = parallelism;
        j["resources"] = resources_dir();
        j["gazetteers"] = gazetteer_dir();
        j["concept_map"] = concept_map_path();
        j["out_dir"] = out_dir;
        j["seed"] = seed;
        j["bins"] = bins;
        j["min_chars"] = min_chars;
        j["llm"] = {{"endpoint_url", llm.endpoint_url},
                    {"model_id", llm.model_id},
                    {"temperature", llm.temperature},
                    {"max_output_tokens", llm.max_output_tokens},
                    {"max_retries", llm.max_retries},
                    {"requests_per_minute", llm.requests_per_minute},
                    {"cost_per_input_token", llm.cost_per_input_token},
                    {"cost_per_output_token", llm.cost_per_output_token},
                    {"request_timeout_seconds", llm.request_timeout_seconds},
                    {"api_key_env", llm.api_key_env}};
        return j;
    }
};

void load_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorKind::ConfigError, path + ": config must be a JSON object");
    }
    config.backend = doc.value("backend", config.backend);
    config.parallelism = doc.value("parallelism", config.parallelism);
    config.resources = doc.value("resources", config.resources);
    config.gazetteers = doc.value("gazetteers", config.gazetteers);
    config.concept_map = doc.value("concept_map", config.concept_map);
    config.thresholds = doc.value("thresholds", config.thresholds);
    config.out_dir = doc.value("out_dir", config.out_dir);
    config.seed = doc.value("seed", config.seed);
    config.bins = doc.value("bins", config.bins);
    config.min_chars = doc.value("min_chars", config.min_chars);
    if (doc.contains("llm") && doc["llm"].is_object()) {
        const json& l = doc["llm"];
        config.llm.endpoint_url = l.value("endpoint_url", config.llm.endpoint_url);
        config.llm.model_id = l.value("model_id", config.llm.model_id);
        config.llm.temperature = l.value("temperature", config.llm.temperature);
        config.llm.max_output_tokens = l.value("max_output_tokens", config.llm.max_output_tokens);
        config.llm.max_retries = l.value("max_retries", config.llm.max_retries);
        config.llm.requests_per_minute =
            l.value("requests_per_minute", config.llm.requests_per_minute);
        config.llm.cost_per_input_token =
            l.value("cost_per_input_token", config.llm.cost_per_input_token);
        config.llm.cost_per_output_token =
            l.value("cost_per_output_token", config.llm.cost_per_output_token);
        config.llm.request_timeout_seconds =
            l.value("request_timeout_seconds", config.llm.request_timeout_seconds);
        config.llm.api_key_env = l.value("api_key_env", config.llm.api_key_env);
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Manifest {
    std::string command;
    json config;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    json counts = json::object();

    void write(const std::string& out_dir) const {
        ordered_json doc;
        doc["command"] = command;
        doc["config_hash"] = sha256_hex(json(config).dump());
        ordered_json in = ordered_json::object();
        for (const auto& path : inputs) in[path] = sha256_file(path);
        doc["inputs"] = std::move(in);
        ordered_json out = ordered_json::object();
        for (const auto& path : outputs) out[path] = sha256_file(path);
        doc["outputs"] = std::move(out);
        doc["counts"] = counts;
        write_file_atomic(out_dir + "/run_manifest.json", doc.dump(4) + "\n");
    }
};

// Each standardized.jsonl line: {"accession_num", "source_chars", "note": {...}}.
struct StandardizedRecord {
    std::string accession_num;
    long source_chars = 0;
    StandardizedNote note;
};

std::vector<StandardizedRecord> read_standardized_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::vector<StandardizedRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("accession_num") ||
            !obj.contains("note")) {
            throw Error(ErrorKind::MalformedLine,
                        path + ":" + std::to_string(line_no) + ": bad standardized record");
        }
        StandardizedRecord record;
        record.accession_num = obj["accession_num"].get<std::string>();
        record.source_chars = obj.value("source_chars", 0L);
        record.note = coerce_note(obj["note"]);
        records.push_back(std::move(record));
    }
    return records;
}

std::unique_ptr<StandardizationBackend> make_backend(const RunConfig& config,
                                                     const std::string& transcripts) {
    if (config.backend == "rules") {
        return std::make_unique<RulesBackend>(load_resources(config.resources_dir()));
    }
    if (config.backend == "mock") {
        if (transcripts.empty()) {
            throw Error(ErrorKind::ConfigError, "mock backend requires --transcripts FILE");
        }
        return std::make_unique<MockBackend>(MockBackend::from_transcript_file(transcripts));
    }
    if (config.backend == "llm") {
        const char* key = std::getenv(config.llm.api_key_env.c_str());
        if (!key || std::string(key).empty()) {
            throw Error(ErrorKind::ConfigError,
                        "llm backend requires an API key in environment variable " +
                            config.llm.api_key_env);
        }
        auto backend = std::make_unique<LlmBackend>(config.llm);
        std::string prompt_path = config.resources_dir() + "/prompt_template.txt";
        if (fs::exists(prompt_path)) backend->set_prompt_template(read_file(prompt_path));
        return backend;
    }
    throw Error(ErrorKind::ConfigError, "unknown backend '" + config.backend + "'");
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& config, const std::string& csv_path, const std::string& text_column,
               const std::string& id_column, const std::string& kind_column,
               const std::vector<std::string>& allowed_kinds) {
    std::string raw = read_file(csv_path);
    std::optional<std::string> id = id_column.empty() ? std::nullopt : std::optional(id_column);
    std::optional<std::string> kind = kind_column.empty() ? std::nullopt : std::optional(kind_column);
    std::vector<std::string> kinds;
    auto notes = parse_corpus_csv(raw, text_column, id, kind, kind ? &kinds : nullptr);

    FilterCriteria criteria;
    criteria.min_chars = static_cast<std::size_t>(std::max(0L, config.min_chars));
    if (!allowed_kinds.empty()) {
        criteria.allowed_note_kinds.emplace(allowed_kinds.begin(), allowed_kinds.end());
    }
    FilterOutcome outcome = filter_notes_audited(notes, criteria, kind ? &kinds : nullptr);
    for (const auto& dropped : outcome.dropped) {
        std::cerr << "dropped accession " << dropped.accession_num << ": " << dropped.reason << "\n";
    }

    std::ostringstream body;
    write_notes_jsonl(outcome.kept, body);
    std::string out_path = config.out_dir + "/notes.jsonl";
    write_file_atomic(out_path, body.str());

    Manifest manifest{"ingest", config.to_json(), {csv_path}, {out_path}};
    manifest.counts = {{"rows", notes.size()},
                       {"kept", outcome.kept.size()},
                       {"dropped", outcome.dropped.size()}};
    manifest.write(config.out_dir);
    std::cout << "ingested " << outcome.kept.size() << " notes (" << outcome.dropped.size()
              << " dropped) -> " << out_path << "\n";
    return kExitOk;
}

int cmd_standardize(const RunConfig& config, const std::string& notes_path,
                    const std::string& transcripts, bool resume) {
    auto notes = read_notes_jsonl_file(notes_path);
    std::string out_path = config.out_dir + "/standardized.jsonl";
    std::string failures_path = config.out_dir + "/failures.jsonl";

    std::string existing;
    if (resume && fs::exists(out_path)) {
        std::set<std::string> done;
        for (const auto& record : read_standardized_jsonl(out_path)) {
            done.insert(record.accession_num);
        }
        std::vector<SourceNote> remaining;
        for (auto& note : notes) {
            if (!done.count(note.accession_num)) remaining.push_back(std::move(note));
        }
        std::cerr << "resume: skipping " << (notes.size() - remaining.size())
                  << " already-standardized notes\n";
        existing = read_file(out_path);
        notes = std::move(remaining);
    }

    auto backend = make_backend(config, transcripts);
    BatchResult batch = standardize_corpus(notes, *backend, std::max(1, config.parallelism));

    std::ostringstream body;
    body << existing;
    for (const auto& [source, note] : batch.results) {
        ordered_json line;
        line["accession_num"] = source.accession_num;
        line["source_chars"] = static_cast<long>(text::count_scalars(source.note_text));
        line["note"] = note_to_json(note);
        body << line.dump() << "\n";
    }
    write_file_atomic(out_path, body.str());

    std::ostringstream failures;
    for (const auto& failure : batch.failures) {
        ordered_json line;
        line["accession_num"] = failure.accession_num;
        line["failure"] = backend_failure_name(failure.failure);
        line["raw_response"] = failure.raw_response;
        failures << line.dump() << "\n";
    }
    write_file_atomic(failures_path, failures.str());

    Manifest manifest{"standardize", config.to_json(), {notes_path}, {out_path, failures_path}};
    manifest.counts = {{"input", notes.size()},
                       {"standardized", batch.results.size()},
                       {"failed", batch.failures.size()}};
    manifest.write(config.out_dir);
    std::cout << "standardized " << batch.results.size() << "/" << notes.size() << " notes with "
              << backend->name() << " backend -> " << out_path << "\n";
    if (!batch.failures.empty()) {
        std::cerr << batch.failures.size() << " notes failed; see " << failures_path << "\n";
        return kExitPartial;
    }
    return kExitOk;
}

int cmd_metrics(const RunConfig& config, const std::string& standardized_path) {
    auto records = read_standardized_jsonl(standardized_path);
    if (records.empty()) throw Error(ErrorKind::EmptyInput, "no standardized notes in input");

    std::vector<NoteStats> stats;
    std::ostringstream csv;
    csv << "accession_num,source_chars,standardized_chars,grammatical_errors,spelling_errors,"
           "abbreviations_expanded,non_standard_terms\n";
    for (const auto& record : records) {
        SourceNote pseudo{record.accession_num, "x"};
        NoteStats s = compute_note_stats(pseudo, record.note);
        s.source_chars = record.source_chars;
        stats.push_back(s);
        csv << s.accession_num << ',' << s.source_chars << ',' << s.standardized_chars << ','
            << s.grammatical_errors << ',' << s.spelling_errors << ',' << s.abbreviations_expanded
            << ',' << s.non_standard_terms << "\n";
    }
    CorpusSummary summary = aggregate(stats, config.bins);

    std::string stats_path = config.out_dir + "/stats.csv";
    std::string summary_path = config.out_dir + "/summary.json";
    write_file_atomic(stats_path, csv.str());
    write_file_atomic(summary_path, render_report(summary, ReportFormat::Json));

    std::vector<std::string> outputs = {stats_path, summary_path};
    for (const auto& name : metric_names()) {
        std::string path = config.out_dir + "/hist_" + name + ".svg";
        write_file_atomic(path, render_histogram_svg(name, summary.metrics.at(name)));
        outputs.push_back(path);
    }

    Manifest manifest{"metrics", config.to_json(), {standardized_path}, outputs};
    manifest.counts = {{"notes", records.size()}};
    manifest.write(config.out_dir);
    std::cout << render_report(summary, ReportFormat::Text);
    return kExitOk;
}

int cmd_extract(const RunConfig& config, const std::string& standardized_path,
                const std::string& count_mode) {
    auto records = read_standardized_jsonl(standardized_path);
    Gazetteer meds = load_gazetteer(config.gazetteer_dir() + "/gazetteer_medications.json");
    Gazetteer findings = load_gazetteer(config.gazetteer_dir() + "/gazetteer_findings.json");

    std::vector<Mention> mentions;
    for (const auto& record : records) {
        auto m = extract_medications(record.accession_num, record.note, meds);
        mentions.insert(mentions.end(), m.begin(), m.end());
        auto f = extract_findings(record.accession_num, record.note, findings);
        mentions.insert(mentions.end(), f.begin(), f.end());
    }

    CountMode mode = count_mode == "occurrences" ? CountMode::RawOccurrences
                                                 : CountMode::PerNotePresence;
    FrequencyTable med_table = frequency_table(mentions, MentionKind::Medication, mode);
    FrequencyTable finding_table = frequency_table(mentions, MentionKind::Finding, mode);

    std::ostringstream mention_lines;
    for (const auto& mention : mentions) mention_lines << mention_to_json(mention).dump() << "\n";
    auto table_csv = [](const FrequencyTable& table) {
        std::ostringstream out;
        out << "normalized,count\n";
        for (const auto& row : table.rows) out << csv_escape(row.normalized) << ',' << row.count << "\n";
        return out.str();
    };

    std::string mentions_path = config.out_dir + "/mentions.jsonl";
    std::string meds_path = config.out_dir + "/medications.csv";
    std::string findings_path = config.out_dir + "/findings.csv";
    write_file_atomic(mentions_path, mention_lines.str());
    write_file_atomic(meds_path, table_csv(med_table));
    write_file_atomic(findings_path, table_csv(finding_table));

    Manifest manifest{"extract", config.to_json(), {standardized_path},
                      {mentions_path, meds_path, findings_path}};
    manifest.counts = {{"notes", records.size()},
                       {"mentions", mentions.size()},
                       {"medication_terms", med_table.rows.size()},
                       {"finding_terms", finding_table.rows.size()}};
    manifest.write(config.out_dir);
    std::cout << "extracted " << mentions.size() << " mentions from " << records.size()
              << " notes -> " << mentions_path << "\n";
    return kExitOk;
}

int cmd_export_fhir(const RunConfig& config, const std::string& mentions_path,
                    const std::string& preferred) {
    ConceptMap table = load_concept_map(config.concept_map_path());
    auto preferred_system = code_system_from_name(preferred);
    if (!preferred_system) {
        throw Error(ErrorKind::ConfigError, "unknown code system '" + preferred + "'");
    }

    std::ifstream in(mentions_path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + mentions_path);
    std::vector<InteropResource> resources;
    std::map<std::string, long> unmapped;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) throw Error(ErrorKind::MalformedLine, "bad mention line");
        Mention mention = mention_from_json(obj);
        auto mapping = map_to_ontology(mention, table, *preferred_system);
        if (!mapping) ++unmapped[mention.normalized];
        resources.push_back(to_resource(mention, mapping));
    }

    std::string bundle_path = config.out_dir + "/bundle.json";
    std::string unmapped_path = config.out_dir + "/unmapped_terms.csv";
    write_file_atomic(bundle_path, bundle_to_string(resources));
    std::ostringstream gap;
    gap << "normalized,count\n";
    for (const auto& [term, count] : unmapped) gap << csv_escape(term) << ',' << count << "\n";
    write_file_atomic(unmapped_path, gap.str());

    Manifest manifest{"export-fhir", config.to_json(), {mentions_path},
                      {bundle_path, unmapped_path}};
    manifest.counts = {{"resources", resources.size()}, {"unmapped_terms", unmapped.size()}};
    manifest.write(config.out_dir);
    std::cout << "exported " << resources.size() << " resources (" << unmapped.size()
              << " unmapped terms) -> " << bundle_path << "\n";
    return kExitOk;
}

int cmd_evaluate(const RunConfig& config, const std::string& notes_path,
                 const std::string& standardized_path, long sample_n, bool sample_given,
                 const std::string& mode_name) {
    auto notes = read_notes_jsonl_file(notes_path);
    auto records = read_standardized_jsonl(standardized_path);
    std::map<std::string, const StandardizedNote*> by_accession;
    for (const auto& record : records) by_accession[record.accession_num] = &record.note;

    std::vector<std::pair<SourceNote, const StandardizedNote*>> pairs;
    for (const auto& note : notes) {
        auto it = by_accession.find(note.accession_num);
        if (it != by_accession.end()) pairs.emplace_back(note, it->second);
    }
    if (pairs.empty()) throw Error(ErrorKind::EmptyInput, "no (source, standardized) pairs matched");

    std::size_t n = sample_given ? static_cast<std::size_t>(sample_n)
                                 : std::min<std::size_t>(20, pairs.size());
    auto indices = sample_indices(pairs.size(), n, config.seed);

    RatingMode mode = RatingMode::Heuristic;
    if (mode_name == "llm-judge") mode = RatingMode::LlmJudge;

    QualityContext context;
    StandardizationResources resources = load_resources(config.resources_dir());
    context.resources = &resources;
    std::string thresholds_path = config.thresholds.empty()
                                      ? config.resources_dir() + "/rating_thresholds.json"
                                      : config.thresholds;
    if (fs::exists(thresholds_path)) context.thresholds = load_rating_thresholds(thresholds_path);
    std::unique_ptr<LlmBackend> judge_backend;
    if (mode == RatingMode::LlmJudge) {
        const char* key = std::getenv(config.llm.api_key_env.c_str());
        if (!key || std::string(key).empty()) {
            throw Error(ErrorKind::ConfigError,
                        "llm-judge mode requires an API key in environment variable " +
                            config.llm.api_key_env);
        }
        context.llm_complete = [&config](const std::string& prompt) {
            BackendOutcome outcome = submit(prompt, config.llm);
            return outcome.raw_response;
        };
    }

    std::ostringstream review, diffs, ratings_csv;
    ratings_csv << "accession_num,text_organization,spelling_and_grammar,abbreviation_expansion,"
                   "terminology_standardization,completeness\n";
    std::vector<QualityRatings> all_ratings;
    for (std::size_t idx : indices) {
        const auto& [source, standardized] = pairs[idx];
        ordered_json side_by_side;
        side_by_side["accession_num"] = source.accession_num;
        side_by_side["source_text"] = source.note_text;
        side_by_side["standardized"] = note_to_json(*standardized);
        review << side_by_side.dump() << "\n";

        ContentDiff diff = completeness_check(source, *standardized);
        ordered_json diff_line;
        diff_line["accession_num"] = source.accession_num;
        diff_line["missing_tokens"] = diff.missing_tokens;
        diff_line["added_tokens"] = diff.added_tokens;
        diff_line["ledger_explained"] = diff.ledger_explained;
        diffs << diff_line.dump() << "\n";

        QualityRatings ratings = rate_quality(source, *standardized, mode, context);
        all_ratings.push_back(ratings);
        ratings_csv << source.accession_num << ',' << ratings.text_organization << ','
                    << ratings.spelling_and_grammar << ',' << ratings.abbreviation_expansion << ','
                    << ratings.terminology_standardization << ',' << ratings.completeness << "\n";
    }

    std::string review_path = config.out_dir + "/review_sample.jsonl";
    std::string diffs_path = config.out_dir + "/content_diffs.jsonl";
    std::string ratings_path = config.out_dir + "/ratings.csv";
    write_file_atomic(review_path, review.str());
    write_file_atomic(diffs_path, diffs.str());
    write_file_atomic(ratings_path, ratings_csv.str());

    if (!all_ratings.empty()) {
        std::cout << "quality ratings (n=" << all_ratings.size() << ", mode " << mode_name << "):\n";
        for (const auto& row : aggregate_ratings(all_ratings)) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "  %-28s %.2f ± %.2f\n", row.metric.c_str(),
                          row.mean, row.sd);
            std::cout << buf;
        }
    }

    Manifest manifest{"evaluate", config.to_json(), {notes_path, standardized_path},
                      {review_path, diffs_path, ratings_path}};
    manifest.counts = {{"pairs", pairs.size()}, {"sampled", indices.size()}};
    manifest.write(config.out_dir);
    return kExitOk;
}

int cmd_estimate(const RunConfig& config, const std::string& notes_path) {
    auto notes = read_notes_jsonl_file(notes_path);
    CostEstimate estimate = estimate_cost(notes, config.llm, std::max(1, config.parallelism));

    ordered_json doc;
    doc["notes"] = notes.size();
    doc["total_cost"] = estimate.total_cost;
    doc["serial_seconds"] = estimate.serial_seconds;
    doc["parallel_seconds"] = estimate.parallel_seconds;
    doc["parallelism"] = config.parallelism;
    std::string out_path = config.out_dir + "/estimate.json";
    write_file_atomic(out_path, doc.dump(4) + "\n");

    Manifest manifest{"estimate", config.to_json(), {notes_path}, {out_path}};
    manifest.counts = {{"notes", notes.size()}};
    manifest.write(config.out_dir);

    std::cout << "notes: " << notes.size() << "\n"
              << "estimated cost: $" << estimate.total_cost << "\n"
              << "serial time: " << estimate.serial_seconds << " s\n"
              << "parallel time (x" << config.parallelism << "): " << estimate.parallel_seconds
              << " s\n";
    return kExitOk;
}

int cmd_fixtures_generate(const RunConfig& config, long n, const std::string& profile_path,
                          bool noise) {
    GeneratorOptions options;
    options.out_of_lexicon_noise = noise;
    if (profile_path == "zero") {
        options.profile = GeneratorProfile::all_zero();
    } else if (!profile_path.empty() && profile_path != "default") {
        std::ifstream in(profile_path);
        if (!in) throw Error(ErrorKind::ConfigError, "cannot open profile " + profile_path);
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded()) throw Error(ErrorKind::ConfigError, "bad profile JSON");
        options.profile = profile_from_json(doc);
    }

    GeneratedCorpus corpus = generate_corpus(static_cast<std::size_t>(n), config.seed, options);

    std::ostringstream notes, ledgers;
    write_notes_jsonl(corpus.notes, notes);
    for (const auto& ledger : corpus.ledgers) ledgers << ledger_to_json(ledger).dump() << "\n";

    std::string notes_path = config.out_dir + "/notes.jsonl";
    std::string ledger_path = config.out_dir + "/ledger.jsonl";
    write_file_atomic(notes_path, notes.str());
    write_file_atomic(ledger_path, ledgers.str());

    Manifest manifest{"fixtures-generate", config.to_json(), {}, {notes_path, ledger_path}};
    manifest.counts = {{"notes", corpus.notes.size()}};
    manifest.write(config.out_dir);
    std::cout << "generated " << corpus.notes.size() << " notes -> " << notes_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"notestd: clinical note standardization pipeline"};
    app.require_subcommand(1);

    RunConfig config;
    std::string config_file;
    // Config file values load first; explicitly passed flags then overwrite
    // them during the regular parse.
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") config_file = argv[i + 1];
    }
    if (config_file.empty()) {
        if (const char* env = std::getenv("NOTESTD_CONFIG")) config_file = env;
    }
    if (!config_file.empty()) {
        try {
            load_config_file(config, config_file);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitConfig;
        }
    }
    app.add_option("--config", config_file, "JSON config file; flags override its values");

    // Global knobs, shared across subcommands.
    auto add_common = [&](CLI::App* cmd) {
        cmd->fallthrough(); // let --config reach the top-level parser
        cmd->add_option("--out-dir", config.out_dir, "output directory");
        cmd->add_option("--resources", config.resources, "standardization resources directory");
        cmd->add_option("--seed", config.seed, "random seed");
        cmd->add_option("--bins", config.bins, "histogram bin count");
        cmd->add_option("--parallelism", config.parallelism, "worker thread count");
    };

    // ingest
    std::string csv_path, text_column = "note_text", id_column, kind_column;
    std::vector<std::string> allowed_kinds;
    auto* ingest = app.add_subcommand("ingest", "CSV corpus -> notes.jsonl with filtering");
    ingest->add_option("csv", csv_path, "input CSV file")->required();
    ingest->add_option("--text-column", text_column, "column with note text");
    ingest->add_option("--id-column", id_column, "column with accession numbers");
    ingest->add_option("--kind-column", kind_column, "column with note kinds");
    ingest->add_option("--allowed-kinds", allowed_kinds, "note kinds to keep");
    ingest->add_option("--min-chars", config.min_chars, "minimum note length in characters");
    add_common(ingest);

    // standardize
    std::string notes_path, transcripts;
    bool resume = false;
    auto* standardize = app.add_subcommand("standardize", "notes.jsonl -> standardized.jsonl");
    standardize->add_option("notes", notes_path, "notes.jsonl from ingest")->required();
    standardize->add_option("--backend", config.backend, "rules | llm | mock");
    standardize->add_option("--transcripts", transcripts, "mock backend transcript file");
    standardize->add_flag("--resume", resume, "skip accessions already in the output");
    add_common(standardize);

    // metrics
    std::string standardized_path;
    auto* metrics = app.add_subcommand("metrics", "standardized.jsonl -> summary + histograms");
    metrics->add_option("standardized", standardized_path, "standardized.jsonl")->required();
    add_common(metrics);

    // extract
    std::string extract_input, count_mode = "presence";
    auto* extract = app.add_subcommand("extract", "standardized.jsonl -> mentions + tables");
    extract->add_option("standardized", extract_input, "standardized.jsonl")->required();
    extract->add_option("--gazetteers", config.gazetteers, "gazetteer directory");
    extract->add_option("--count-mode", count_mode, "presence | occurrences");
    add_common(extract);

    // export-fhir
    std::string mentions_path, preferred_system = "SNOMED-CT";
    auto* export_fhir = app.add_subcommand("export-fhir", "mentions.jsonl -> bundle.json");
    export_fhir->add_option("mentions", mentions_path, "mentions.jsonl")->required();
    export_fhir->add_option("--concept-map", config.concept_map, "concept map JSON");
    export_fhir->add_option("--preferred-system", preferred_system,
                            "SNOMED-CT | RxNorm | LOINC | ICD");
    add_common(export_fhir);

    // evaluate
    std::string eval_notes, eval_standardized, eval_mode = "heuristic";
    long sample_n = 20;
    auto* evaluate = app.add_subcommand("evaluate", "source vs standardized quality review");
    evaluate->add_option("notes", eval_notes, "notes.jsonl")->required();
    evaluate->add_option("standardized", eval_standardized, "standardized.jsonl")->required();
    auto* sample_opt = evaluate->add_option("--sample", sample_n, "review sample size");
    evaluate->add_option("--mode", eval_mode, "heuristic | llm-judge");
    evaluate->add_option("--thresholds", config.thresholds, "rating thresholds JSON");
    add_common(evaluate);

    // estimate
    std::string estimate_notes;
    auto* estimate = app.add_subcommand("estimate", "cost/time estimate for LLM standardization");
    estimate->add_option("notes", estimate_notes, "notes.jsonl")->required();
    estimate->add_option("--cost-per-input-token", config.llm.cost_per_input_token,
                         "currency per input token");
    estimate->add_option("--cost-per-output-token", config.llm.cost_per_output_token,
                         "currency per output token");
    add_common(estimate);

    // fixtures generate
    long fixture_n = 10;
    std::string profile_path = "default";
    bool noise = false;
    auto* fixtures = app.add_subcommand("fixtures", "synthetic corpus tools");
    fixtures->fallthrough();
    auto* generate = fixtures->add_subcommand("generate", "emit notes.jsonl + ledger.jsonl");
    generate->add_option("--n", fixture_n, "number of notes")->required();
    generate->add_option("--profile", profile_path, "default | zero | path to profile JSON");
    generate->add_flag("--noise", noise, "inject out-of-lexicon noise");
    add_common(generate);

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(config.out_dir);

        if (ingest->parsed()) {
            return cmd_ingest(config, csv_path, text_column, id_column, kind_column, allowed_kinds);
        }
        if (standardize->parsed()) {
            return cmd_standardize(config, notes_path, transcripts, resume);
        }
        if (metrics->parsed()) return cmd_metrics(config, standardized_path);
        if (extract->parsed()) return cmd_extract(config, extract_input, count_mode);
        if (export_fhir->parsed()) return cmd_export_fhir(config, mentions_path, preferred_system);
        if (evaluate->parsed()) {
            return cmd_evaluate(config, eval_notes, eval_standardized, sample_n,
                                sample_opt->count() > 0, eval_mode);
        }
        if (estimate->parsed()) return cmd_estimate(config, estimate_notes);
        if (fixtures->parsed() && generate->parsed()) {
            return cmd_fixtures_generate(config, fixture_n, profile_path, noise);
        }
        std::cerr << "no subcommand selected\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitConfig;
    }
}
