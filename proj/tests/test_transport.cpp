// In-process loopback server coverage for the real HTTP transport.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "notestd/llm_backend.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <thread>

using namespace notestd;

namespace {

struct LoopbackServer {
    httplib::Server server;
    std::thread worker;
    int port = 0;

    template <typename Handler>
    explicit LoopbackServer(Handler handler) {
        server.Post("/v1/chat/completions", handler);
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        worker = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~LoopbackServer() {
        server.stop();
        worker.join();
    }

    std::string url() const {
        return "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    }
};

std::string ok_envelope() {
    nlohmann::json content = nlohmann::json::parse(
        test_support::read_file(test_support::data_dir() + "/golden_note.json"));
    nlohmann::json body;
    body["choices"] = nlohmann::json::array(
        {nlohmann::json{{"message", {{"role", "assistant"}, {"content", content.dump()}}}}});
    body["usage"] = {{"prompt_tokens", 42}, {"completion_tokens", 17}};
    return body.dump();
}

} // namespace

TEST_CASE("RealTransport posts JSON and returns the body") {
    std::string seen_auth;
    std::string seen_body;
    LoopbackServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen_auth = req.get_header_value("Authorization");
        seen_body = req.body;
        res.set_content(ok_envelope(), "application/json");
    });

    RealTransport transport;
    TransportResult result = transport.send(server.url(), "{\"model\":\"gpt-4\"}", "sk-test", 10.0);
    REQUIRE(result.response.has_value());
    CHECK(result.response->status == 200);
    CHECK(seen_auth == "Bearer sk-test");
    CHECK(seen_body == "{\"model\":\"gpt-4\"}");
}

TEST_CASE("submit works end to end over loopback HTTP") {
    std::atomic<int> hits{0};
    LoopbackServer server([&](const httplib::Request&, httplib::Response& res) {
        if (hits.fetch_add(1) == 0) {
            res.status = 429;
            res.set_content("slow down", "text/plain");
        } else {
            res.set_content(ok_envelope(), "application/json");
        }
    });

    BackendConfig config;
    config.endpoint_url = server.url();
    config.max_retries = 2;
    config.requests_per_minute = 100000;

    VirtualClock clock; // keeps the backoff sleep instant
    SubmitOptions options;
    options.clock = &clock;
    options.jitter_seed = 5;
    options.api_key = "sk-test";
    BackendOutcome outcome = submit("standardize this", config, options);
    REQUIRE(outcome.ok());
    CHECK(outcome.attempts == 2);
    CHECK(outcome.input_tokens == 42);
    CHECK(outcome.output_tokens == 17);
}

TEST_CASE("connection failures surface as transport errors") {
    BackendConfig config;
    config.endpoint_url = "http://127.0.0.1:9/v1/chat/completions"; // discard port, closed
    config.max_retries = 1;
    config.requests_per_minute = 100000;
    config.request_timeout_seconds = 2.0;

    VirtualClock clock;
    SubmitOptions options;
    options.clock = &clock;
    options.jitter_seed = 5;
    BackendOutcome outcome = submit("x", config, options);
    CHECK_FALSE(outcome.ok());
    CHECK(outcome.failure == BackendFailure::Transport);
    CHECK(outcome.attempts == 2);
}
