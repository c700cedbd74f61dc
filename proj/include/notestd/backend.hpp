#pragma once

#include "notestd/corpus.hpp"
#include "notestd/note_model.hpp"
#include "notestd/rules_engine.hpp"

#include <map>
#include <optional>
#include <string>

namespace notestd {

enum class BackendFailure { Transport, RateLimited, Unparseable, SchemaInvalid };

const char* backend_failure_name(BackendFailure f);

struct BackendOutcome {
    std::optional<StandardizedNote> note; // present xor failure present
    std::string raw_response;
    long attempts = 0;
    long input_tokens = 0;
    long output_tokens = 0;
    double latency_seconds = 0.0;
    std::optional<BackendFailure> failure;

    bool ok() const { return note.has_value(); }
};

// A standardization backend turns one source note into one outcome. Failures
// are data; implementations never throw past this boundary.
class StandardizationBackend {
public:
    virtual ~StandardizationBackend() = default;
    virtual BackendOutcome standardize(const SourceNote& note) = 0;
    virtual std::string name() const = 0;
};

class RulesBackend final : public StandardizationBackend {
public:
    explicit RulesBackend(StandardizationResources resources) : resources_(std::move(resources)) {}

    BackendOutcome standardize(const SourceNote& note) override;
    std::string name() const override { return "rules"; }

    const StandardizationResources& resources() const { return resources_; }

private:
    StandardizationResources resources_;
};

// Replays canned raw responses, keyed by accession with an optional default.
// Runs the same parse path as the live backend, so schema failures and
// unparseable replies behave identically.
class MockBackend final : public StandardizationBackend {
public:
    MockBackend() = default;

    void set_default_response(std::string raw) { default_response_ = std::move(raw); }
    void add_response(const std::string& accession, std::string raw) {
        responses_[accession] = std::move(raw);
    }

    // Fixture file: {"default": "...", "by_accession": {"7": "..."}}
    static MockBackend from_transcript_file(const std::string& path);

    BackendOutcome standardize(const SourceNote& note) override;
    std::string name() const override { return "mock"; }

private:
    std::map<std::string, std::string> responses_;
    std::optional<std::string> default_response_;
};

} // namespace notestd
