#include <httplib.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "pdnet/extraction.hpp"
#include "pdnet/jsonl.hpp"

namespace pdnet {

ReplayClient::ReplayClient(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_))
        throw ExtractionUnavailable("replay directory not found: " + dir_.string());
}

std::string ReplayClient::fixture_name(const std::string& prompt) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(prompt)));
    return std::string(buf) + ".txt";
}

std::string ReplayClient::complete(const std::string& prompt) {
    std::filesystem::path path = dir_ / fixture_name(prompt);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ExtractionUnavailable("no replay fixture " + path.string() +
                                    " for this prompt; refusing to fall through");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ExtractionUnavailable("endpoint URL needs a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

RemoteClient::RemoteClient(std::string base_url, std::string api_key, std::string model,
                           int min_interval_ms)
    : base_url_(std::move(base_url)),
      api_key_(std::move(api_key)),
      model_(std::move(model)),
      min_interval_ms_(min_interval_ms) {}

std::unique_ptr<RemoteClient> RemoteClient::from_env() {
    const char* base = std::getenv("PDNET_API_BASE");
    const char* key = std::getenv("PDNET_API_KEY");
    const char* model = std::getenv("PDNET_MODEL");
    return std::make_unique<RemoteClient>(base ? base : "https://api.openai.com/v1",
                                          key ? key : "", model ? model : "gpt-4o-mini");
}

std::string RemoteClient::complete(const std::string& prompt) {
    std::lock_guard<std::mutex> lock(mu_);
    if (min_interval_ms_ > 0 && last_call_.time_since_epoch().count() != 0) {
        auto earliest = last_call_ + std::chrono::milliseconds(min_interval_ms_);
        auto now = std::chrono::steady_clock::now();
        if (now < earliest) std::this_thread::sleep_for(earliest - now);
    }
    last_call_ = std::chrono::steady_clock::now();

    SplitUrl split = split_url(base_url_);
    std::string path = split.path;
    if (!path.ends_with("/chat/completions")) {
        while (path.ends_with("/")) path.pop_back();
        path += "/chat/completions";
    }

    json body = {{"model", model_},
                 {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
    httplib::Client cli(split.origin);
    cli.set_connection_timeout(30);
    cli.set_read_timeout(120);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = cli.Post(path, headers, body.dump(), "application/json");
    if (!res)
        throw ExtractionUnavailable("completion endpoint unreachable: " +
                                    httplib::to_string(res.error()));
    if (res->status != 200)
        throw ExtractionUnavailable("completion endpoint returned status " +
                                    std::to_string(res->status) + ": " + res->body);
    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded())
        throw ExtractionUnavailable("completion endpoint returned non-JSON body");
    try {
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw ExtractionUnavailable("completion response missing choices[0].message.content");
    }
}

MockClient::MockClient(std::string default_response)
    : default_response_(std::move(default_response)) {}

void MockClient::push_response(std::string response) {
    std::lock_guard<std::mutex> lock(mu_);
    script_.push_back(std::move(response));
}

std::string MockClient::complete(const std::string& prompt) {
    std::lock_guard<std::mutex> lock(mu_);
    prompts_.push_back(prompt);
    if (script_.empty()) return default_response_;
    std::string out = std::move(script_.front());
    script_.pop_front();
    return out;
}

std::vector<std::string> MockClient::prompts() const {
    std::lock_guard<std::mutex> lock(mu_);
    return prompts_;
}

}  // namespace pdnet
