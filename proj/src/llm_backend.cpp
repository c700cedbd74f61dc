#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "notestd/llm_backend.hpp"

#include "notestd/errors.hpp"
#include "notestd/prng.hpp"
#include "notestd/text.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace notestd {

namespace {

constexpr const char* kPromptTemplate =
    R"(You are a highly skilled medical terminologist specializing in clinical note standardization.  Your task is to standardize this note and adhere to guidelines:

1. Expand Abbreviations:
   - Expand abbreviations to full words (e.g., BP -> blood pressure).
   - For common abbreviations, expand and retain in parentheses (e.g., MRI -> magnetic resonance imaging (MRI)).
   - Resolve context-specific terms (e.g., MS -> multiple sclerosis (MS)).

2. Correct Spelling and Grammar:
   - Fix errors while preserving clinical meaning.

3. Organize into Sections:
   - Use these headings: HISTORY, VITAL SIGNS, EXAMINATION, LABS, RADIOLOGY, IMPRESSION, and PLAN.
   - Move content to the correct sections and retain all data.

4. Standardize Terminology:
   - Replace non-standard terms with standard terms (e.g., heart attack -> myocardial infarction).

Standardize the provided clinical note as accurately as possible.

--- output format (tool instruction) ---
Respond with only the JSON object of this output schema:
{
   "HISTORY": {
      "Chief Complaint": "String",
      "Interim History": "String"
   },
   "VITAL SIGNS": {
      "Blood Pressure": "String",
      "Pulse": "String",
      "Temperature": "String",
      "Weight": "String"
   },
   "EXAMINATION": {
      "Mental Status": "String",
      "Cranial Nerves": "String",
      "Motor": "String",
      "Sensory": "String",
      "Reflexes": "String",
      "Coordination": "String",
      "Gait and Station": "String"
   },
   "LABS": "String",
   "RADIOLOGY": "String",
   "IMPRESSION": {
      "Assessment": "String"
   },
   "PLAN": {
      "Testing": "String",
      "Education Provided": {
         "Instructions": "String",
         "Barriers to Learning": "String",
         "Content": "String",
         "Outcome": "String"
      },
      "Return Visit": "String"
   },
   "Metrics": {
      "Grammatical Errors": "integer",
      "Abbreviations Expanded": ["String"],
      "Spelling Errors": ["String"],
      "Non-Standard Terms": ["String"]
   }
}
)";

Clock& default_clock() {
    static RealClock clock;
    return clock;
}

long ceil_div(long a, long b) { return (a + b - 1) / b; }

} // namespace

std::string default_prompt_template() { return kPromptTemplate; }

std::string build_prompt(const SourceNote& note, const std::string& prompt_template) {
    return prompt_template + "\n" + note.note_text;
}

std::string build_prompt(const SourceNote& note) {
    return build_prompt(note, default_prompt_template());
}

// ---------------------------------------------------------------------------

double RealClock::now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void RealClock::sleep_for(double seconds) {
    if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

RateLimiter::RateLimiter(double requests_per_minute, Clock& clock)
    : rpm_(requests_per_minute), clock_(clock) {}

void RateLimiter::acquire() {
    std::lock_guard<std::mutex> lock(mutex_);
    for (;;) {
        double now = clock_.now();
        while (!issued_.empty() && issued_.front() <= now - 60.0) issued_.pop_front();
        if (issued_.empty() || static_cast<double>(issued_.size()) < rpm_) {
            issued_.push_back(now);
            history_.push_back(now);
            return;
        }
        clock_.sleep_for(issued_.front() + 60.0 - now);
    }
}

std::vector<double> RateLimiter::history() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return history_;
}

// ---------------------------------------------------------------------------

TransportResult RealTransport::send(const std::string& url, const std::string& body,
                                    const std::string& api_key, double timeout_seconds) {
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return {std::nullopt, "malformed URL: " + url};
    std::size_t host_start = scheme_end + 3;
    std::size_t path_start = url.find('/', host_start);
    std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    auto secs = static_cast<time_t>(timeout_seconds);
    auto usecs = static_cast<time_t>((timeout_seconds - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    auto result = client.Post(path, headers, body, "application/json");
    if (!result) return {std::nullopt, httplib::to_string(result.error())};
    return {HttpResponse{result->status, result->body}, ""};
}

TransportResult ScriptedTransport::send(const std::string&, const std::string& body,
                                        const std::string&, double) {
    bodies_.push_back(body);
    std::size_t idx = std::min(calls_, script_.empty() ? 0 : script_.size() - 1);
    ++calls_;
    if (script_.empty()) return {std::nullopt, "empty script"};
    return script_[idx];
}

WireFormat WireFormat::openai_chat() {
    WireFormat wire;
    wire.make_request = [](const BackendConfig& config, const std::string& prompt) {
        json body;
        body["model"] = config.model_id;
        body["temperature"] = config.temperature;
        body["max_tokens"] = config.max_output_tokens;
        body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
        return body.dump();
    };
    wire.parse_response = [](const std::string& body, std::string& out_text, long& in_tokens,
                             long& out_tokens) {
        json doc = json::parse(body, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) return false;
        in_tokens = -1;
        out_tokens = -1;
        if (doc.contains("usage") && doc["usage"].is_object()) {
            const json& usage = doc["usage"];
            if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number()) {
                in_tokens = usage["prompt_tokens"].get<long>();
            }
            if (usage.contains("completion_tokens") && usage["completion_tokens"].is_number()) {
                out_tokens = usage["completion_tokens"].get<long>();
            }
        }
        if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
            return false;
        }
        const json& choice = doc["choices"][0];
        if (!choice.contains("message") || !choice["message"].contains("content") ||
            !choice["message"]["content"].is_string()) {
            return false;
        }
        out_text = choice["message"]["content"].get<std::string>();
        return true;
    };
    return wire;
}

// ---------------------------------------------------------------------------

ParseOutcome parse_response(const std::string& raw) {
    ParseOutcome outcome;
    json value;
    try {
        value = repair_json(raw);
    } catch (const Error&) {
        outcome.failure = BackendFailure::Unparseable;
        return outcome;
    }
    outcome.report = validate_note(value);
    try {
        outcome.note = coerce_note(value);
    } catch (const Error&) {
        outcome.failure = BackendFailure::SchemaInvalid;
        outcome.note.reset();
    }
    return outcome;
}

BackendOutcome submit(const std::string& prompt, const BackendConfig& config,
                      const SubmitOptions& options) {
    BackendOutcome outcome;
    Clock& clock = options.clock ? *options.clock : default_clock();
    RealTransport real_transport;
    HttpTransport& transport = options.transport ? *options.transport : real_transport;

    if (!config.valid()) {
        outcome.failure = BackendFailure::Transport;
        outcome.raw_response = "invalid backend config";
        return outcome;
    }

    std::string api_key = options.api_key;
    if (api_key.empty()) {
        if (const char* env = std::getenv(config.api_key_env.c_str())) api_key = env;
    }

    WireFormat wire = WireFormat::openai_chat();
    std::uint64_t seed = options.jitter_seed
                             ? options.jitter_seed
                             : static_cast<std::uint64_t>(clock.now() * 1e6) + 0x5bd1e995;
    Prng rng(seed);

    const double start = clock.now();
    std::optional<BackendFailure> last_failure;
    std::string last_body;

    for (long attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            double jitter = 0.5 + rng.uniform();
            clock.sleep_for(2.0 * std::pow(2.0, static_cast<double>(attempt - 1)) * jitter);
        }
        if (options.limiter) options.limiter->acquire();
        ++outcome.attempts;

        std::string request = wire.make_request(config, prompt);
        TransportResult result =
            transport.send(config.endpoint_url, request, api_key, config.request_timeout_seconds);
        if (!result.response) {
            last_failure = BackendFailure::Transport;
            last_body = result.error;
            continue;
        }
        const HttpResponse& response = *result.response;
        last_body = response.body;
        if (response.status == 429) {
            last_failure = BackendFailure::RateLimited;
            continue;
        }
        if (response.status >= 500) {
            last_failure = BackendFailure::Transport;
            continue;
        }
        if (response.status < 200 || response.status >= 300) {
            // Other 4xx (auth, bad request) will not improve with retries.
            last_failure = BackendFailure::Transport;
            break;
        }

        std::string model_text;
        long in_tokens = -1;
        long out_tokens = -1;
        if (!wire.parse_response(response.body, model_text, in_tokens, out_tokens)) {
            last_failure = BackendFailure::Unparseable;
            outcome.raw_response = response.body;
            break;
        }
        outcome.raw_response = model_text;
        outcome.input_tokens = in_tokens >= 0
                                   ? in_tokens
                                   : ceil_div(static_cast<long>(text::count_scalars(prompt)), 4);
        outcome.output_tokens = out_tokens >= 0
                                    ? out_tokens
                                    : ceil_div(static_cast<long>(text::count_scalars(model_text)), 4);

        ParseOutcome parsed = parse_response(model_text);
        outcome.note = parsed.note;
        outcome.failure = parsed.failure;
        outcome.latency_seconds = clock.now() - start;
        return outcome;
    }

    outcome.failure = last_failure ? last_failure : std::optional<BackendFailure>(BackendFailure::Transport);
    if (outcome.raw_response.empty()) outcome.raw_response = last_body;
    outcome.latency_seconds = clock.now() - start;
    return outcome;
}

LlmBackend::LlmBackend(BackendConfig config, SubmitOptions options)
    : config_(std::move(config)), options_(options), prompt_template_(default_prompt_template()) {
    if (!options_.clock) options_.clock = &default_clock();
    if (!options_.limiter) {
        owned_limiter_ = std::make_unique<RateLimiter>(config_.requests_per_minute, *options_.clock);
        options_.limiter = owned_limiter_.get();
    }
}

BackendOutcome LlmBackend::standardize(const SourceNote& note) {
    std::string prompt = build_prompt(note, prompt_template_);
    return submit(prompt, config_, options_);
}

// ---------------------------------------------------------------------------

CostEstimate estimate_cost(const std::vector<SourceNote>& notes, const BackendConfig& config,
                           int parallelism) {
    CostEstimate estimate;
    for (const auto& note : notes) {
        NoteEstimate item;
        item.accession_num = note.accession_num;
        const auto chars = static_cast<double>(text::count_scalars(note.note_text));
        item.seconds = std::clamp(20.0 * chars / 6420.0, 5.0, 120.0);
        item.input_tokens = ceil_div(static_cast<long>(chars), 4);
        item.output_tokens = ceil_div(static_cast<long>(chars), 4);
        item.cost = static_cast<double>(item.input_tokens) * config.cost_per_input_token +
                    static_cast<double>(item.output_tokens) * config.cost_per_output_token;
        estimate.total_cost += item.cost;
        estimate.serial_seconds += item.seconds;
        estimate.per_note.push_back(std::move(item));
    }
    estimate.parallel_seconds = estimate.serial_seconds / std::max(1, parallelism);
    return estimate;
}

} // namespace notestd
