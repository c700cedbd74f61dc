#pragma once

#include "notestd/backend.hpp"
#include "notestd/corpus.hpp"
#include "notestd/note_model.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace notestd {

struct BackendConfig {
    std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
    std::string model_id = "gpt-4";
    double temperature = 0.0;
    long max_output_tokens = 4096;
    long max_retries = 3;
    double requests_per_minute = 60.0;
    double cost_per_input_token = 0.0;  // currency per token
    double cost_per_output_token = 0.0;
    double request_timeout_seconds = 120.0;
    std::string api_key_env = "NOTESTD_API_KEY";

    bool valid() const {
        return max_retries >= 0 && requests_per_minute > 0 && temperature >= 0.0 &&
               temperature <= 2.0;
    }
};

// Paper prompt text plus the delimited output-schema extension.
std::string default_prompt_template();

// Template (guidelines + output instruction) followed by the note text.
std::string build_prompt(const SourceNote& note);
std::string build_prompt(const SourceNote& note, const std::string& prompt_template);

// ---------------------------------------------------------------------------
// Clock and rate limiting (virtualizable for tests)

class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() = 0; // seconds, monotonic
    virtual void sleep_for(double seconds) = 0;
};

class RealClock final : public Clock {
public:
    double now() override;
    void sleep_for(double seconds) override;
};

class VirtualClock final : public Clock {
public:
    double now() override { return now_; }
    void sleep_for(double seconds) override {
        if (seconds > 0) now_ += seconds;
    }

private:
    double now_ = 0.0;
};

// Sliding-window limiter: at most `requests_per_minute` acquisitions in any
// 60-second window. Shared across worker threads.
class RateLimiter {
public:
    RateLimiter(double requests_per_minute, Clock& clock);
    void acquire();
    // Every grant ever issued, for window assertions in tests.
    std::vector<double> history() const;

private:
    double rpm_;
    Clock& clock_;
    mutable std::mutex mutex_;
    std::deque<double> issued_;
    std::vector<double> history_;
};

// ---------------------------------------------------------------------------
// Transport and wire mapping

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Either a response or a transport-level error message.
struct TransportResult {
    std::optional<HttpResponse> response;
    std::string error;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual TransportResult send(const std::string& url, const std::string& body,
                                 const std::string& api_key, double timeout_seconds) = 0;
};

// POSTs JSON over cpp-httplib.
class RealTransport final : public HttpTransport {
public:
    TransportResult send(const std::string& url, const std::string& body,
                         const std::string& api_key, double timeout_seconds) override;
};

// Replays a fixed list of results in order; repeats the last one when exhausted.
class ScriptedTransport final : public HttpTransport {
public:
    explicit ScriptedTransport(std::vector<TransportResult> script) : script_(std::move(script)) {}

    TransportResult send(const std::string& url, const std::string& body,
                         const std::string& api_key, double timeout_seconds) override;

    std::size_t calls() const { return calls_; }
    const std::vector<std::string>& request_bodies() const { return bodies_; }

private:
    std::vector<TransportResult> script_;
    std::vector<std::string> bodies_;
    std::size_t calls_ = 0;
};

// Provider wire format. The default maps to an OpenAI-style chat completion.
struct WireFormat {
    std::function<std::string(const BackendConfig&, const std::string& prompt)> make_request;
    // Extracts (text, input_tokens, output_tokens); tokens -1 when absent.
    std::function<bool(const std::string& body, std::string& text, long& input_tokens,
                       long& output_tokens)>
        parse_response;

    static WireFormat openai_chat();
};

// ---------------------------------------------------------------------------

struct ParseOutcome {
    std::optional<StandardizedNote> note;
    std::optional<BackendFailure> failure; // Unparseable or SchemaInvalid
    ValidationReport report;
};

// repair_json -> validate_note -> coerce_note.
ParseOutcome parse_response(const std::string& raw);

struct SubmitOptions {
    Clock* clock = nullptr;               // default: shared RealClock
    HttpTransport* transport = nullptr;   // default: RealTransport
    RateLimiter* limiter = nullptr;       // optional shared limiter
    std::uint64_t jitter_seed = 0;        // 0 = derive from time
    std::string api_key;                  // empty = read api_key_env
};

// One prompt -> one outcome; <= 1 + max_retries attempts with exponential
// backoff (2 s base, jittered) on transport errors and 429s. Never throws.
BackendOutcome submit(const std::string& prompt, const BackendConfig& config,
                      const SubmitOptions& options = {});

class LlmBackend final : public StandardizationBackend {
public:
    LlmBackend(BackendConfig config, SubmitOptions options = {});

    BackendOutcome standardize(const SourceNote& note) override;
    std::string name() const override { return "llm"; }

    void set_prompt_template(std::string tmpl) { prompt_template_ = std::move(tmpl); }

private:
    BackendConfig config_;
    SubmitOptions options_;
    std::unique_ptr<RateLimiter> owned_limiter_;
    std::string prompt_template_;
};

// ---------------------------------------------------------------------------
// Cost/time estimation

struct NoteEstimate {
    std::string accession_num;
    double seconds = 0.0;
    double cost = 0.0;
    long input_tokens = 0;
    long output_tokens = 0;
};

struct CostEstimate {
    double total_cost = 0.0;
    double serial_seconds = 0.0;
    double parallel_seconds = 0.0;
    std::vector<NoteEstimate> per_note;
};

// Per-note time: 20 s scaled by chars/6420, clamped to [5 s, 120 s].
// Tokens estimated as ceil(chars / 4) each way when not measured.
CostEstimate estimate_cost(const std::vector<SourceNote>& notes, const BackendConfig& config,
                           int parallelism = 1);

} // namespace notestd
