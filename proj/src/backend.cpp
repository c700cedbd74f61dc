#include "notestd/backend.hpp"

#include "notestd/errors.hpp"
#include "notestd/llm_backend.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>

namespace notestd {

const char* backend_failure_name(BackendFailure f) {
    switch (f) {
        case BackendFailure::Transport: return "Transport";
        case BackendFailure::RateLimited: return "RateLimited";
        case BackendFailure::Unparseable: return "Unparseable";
        case BackendFailure::SchemaInvalid: return "SchemaInvalid";
    }
    return "?";
}

BackendOutcome RulesBackend::standardize(const SourceNote& note) {
    auto start = std::chrono::steady_clock::now();
    BackendOutcome outcome;
    outcome.note = standardize_rule_based(note, resources_);
    outcome.raw_response = serialize_note_compact(*outcome.note);
    outcome.attempts = 1;
    outcome.latency_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

MockBackend MockBackend::from_transcript_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorKind::ResourceInvalid, path + ": invalid transcript JSON");
    }
    MockBackend backend;
    if (doc.contains("default")) backend.set_default_response(doc["default"].get<std::string>());
    if (doc.contains("by_accession")) {
        for (auto it = doc["by_accession"].begin(); it != doc["by_accession"].end(); ++it) {
            backend.add_response(it.key(), it.value().get<std::string>());
        }
    }
    return backend;
}

BackendOutcome MockBackend::standardize(const SourceNote& note) {
    BackendOutcome outcome;
    outcome.attempts = 1;
    auto it = responses_.find(note.accession_num);
    if (it != responses_.end()) {
        outcome.raw_response = it->second;
    } else if (default_response_) {
        outcome.raw_response = *default_response_;
    } else {
        outcome.failure = BackendFailure::Transport;
        outcome.raw_response = "no scripted response for accession " + note.accession_num;
        return outcome;
    }
    ParseOutcome parsed = parse_response(outcome.raw_response);
    outcome.note = parsed.note;
    outcome.failure = parsed.failure;
    return outcome;
}

} // namespace notestd
