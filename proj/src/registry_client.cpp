#include "sbomaudit/registry_client.hpp"

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

#include "sbomaudit/errors.hpp"
#include "sbomaudit/http_config.hpp"

namespace sbomaudit {
namespace {

struct SplitUrl {
    std::string origin;    // scheme://host[:port], client constructor form
    std::string host_key;  // host[:port], pacing key
    std::string path;      // leading slash, query preserved
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        fail(ErrorKind::invalid_argument, "not an absolute URL: " + url);
    }
    auto authority_start = scheme_end + 3;
    auto path_start = url.find('/', authority_start);
    SplitUrl out;
    if (path_start == std::string::npos) {
        out.origin = url;
        out.path = "/";
    } else {
        out.origin = url.substr(0, path_start);
        out.path = url.substr(path_start);
    }
    out.host_key = out.origin.substr(authority_start);
    if (out.host_key.empty()) {
        fail(ErrorKind::invalid_argument, "URL has no host: " + url);
    }
    return out;
}

bool is_retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

bool is_retryable_error(httplib::Error err) {
    switch (err) {
        case httplib::Error::Connection:
        case httplib::Error::ConnectionTimeout:
        case httplib::Error::Read:
        case httplib::Error::Write:
            return true;
        default:
            return false;
    }
}

// Blocking counting semaphore; std::counting_semaphore wants a compile-time
// ceiling and the cap here comes from runtime policy.
class Gate {
public:
    explicit Gate(int slots) : slots_(slots) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [this] { return slots_ > 0; });
        --slots_;
    }

    void release() {
        {
            std::lock_guard lock(mutex_);
            ++slots_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int slots_;
};

struct SlotGuard {
    Gate& gate;
    explicit SlotGuard(Gate& g) : gate(g) { gate.acquire(); }
    ~SlotGuard() { gate.release(); }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;
};

std::string trim(std::string_view text) {
    auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(begin, end - begin + 1));
}

std::vector<FileEntry> parse_html_index(std::string_view body) {
    std::vector<FileEntry> entries;
    std::string lowered = to_lower(std::string(body));
    std::size_t pos = 0;
    while ((pos = lowered.find("<a ", pos)) != std::string::npos) {
        auto tag_end = lowered.find('>', pos);
        if (tag_end == std::string::npos) break;
        auto href = lowered.find("href", pos);
        if (href == std::string::npos || href > tag_end) {
            pos = tag_end + 1;
            continue;
        }
        auto eq = body.find('=', href);
        if (eq == std::string_view::npos || eq > tag_end) {
            pos = tag_end + 1;
            continue;
        }
        auto value_start = body.find_first_not_of(" \t", eq + 1);
        if (value_start == std::string_view::npos || value_start >= tag_end) {
            pos = tag_end + 1;
            continue;
        }
        std::string value;
        char quote = body[value_start];
        if (quote == '"' || quote == '\'') {
            auto value_end = body.find(quote, value_start + 1);
            if (value_end == std::string_view::npos) break;
            value = std::string(body.substr(value_start + 1, value_end - value_start - 1));
        } else {
            auto value_end = body.find_first_of(" \t>", value_start);
            value = std::string(body.substr(value_start, value_end - value_start));
        }
        pos = tag_end + 1;

        // Relative names only; navigation and external links are not files.
        if (value.empty() || value == "../" || value == ".." || value[0] == '?' ||
            value[0] == '#' || value.find("://") != std::string::npos || value[0] == '/') {
            continue;
        }
        if (value.starts_with("./")) value.erase(0, 2);
        bool is_dir = value.ends_with("/");
        if (is_dir) value.pop_back();
        if (value.empty() || value.find('/') != std::string::npos) continue;
        entries.push_back({value, is_dir});
    }
    if (entries.empty()) {
        fail(ErrorKind::malformed_index, "HTML page contains no listing anchors");
    }
    return entries;
}

std::vector<FileEntry> parse_text_index(std::string_view body) {
    std::vector<FileEntry> entries;
    std::size_t start = 0;
    while (start <= body.size()) {
        auto newline = body.find('\n', start);
        auto raw = body.substr(start, newline == std::string_view::npos ? std::string_view::npos
                                                                        : newline - start);
        start = newline == std::string_view::npos ? body.size() + 1 : newline + 1;
        auto line = trim(raw);
        if (line.empty()) continue;
        bool is_dir = line.ends_with("/");
        if (is_dir) line.pop_back();
        if (line.empty() || line.find('/') != std::string::npos ||
            line.find_first_of(" \t<>") != std::string::npos) {
            fail(ErrorKind::malformed_index, "not a directory index line: '" + line + "'");
        }
        entries.push_back({line, is_dir});
    }
    return entries;
}

}  // namespace

void FetchPolicy::validate() const {
    if (max_concurrency < 1) {
        fail(ErrorKind::invalid_argument, "max_concurrency must be >= 1");
    }
    if (max_retries < 0) {
        fail(ErrorKind::invalid_argument, "max_retries must be >= 0");
    }
    if (backoff_base.count() <= 0 || per_request_timeout.count() <= 0 ||
        min_request_interval.count() <= 0) {
        fail(ErrorKind::invalid_argument, "fetch policy durations must be positive");
    }
    if (max_body_bytes == 0) {
        fail(ErrorKind::invalid_argument, "max_body_bytes must be positive");
    }
}

std::vector<FileEntry> parse_directory_index(std::string_view body) {
    auto first = body.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        fail(ErrorKind::malformed_index, "empty index page");
    }
    std::vector<FileEntry> raw = body[first] == '<' ? parse_html_index(body)
                                                    : parse_text_index(body);
    std::vector<FileEntry> entries;
    for (auto& entry : raw) {
        bool seen = std::any_of(entries.begin(), entries.end(), [&](const FileEntry& e) {
            return e.name == entry.name;
        });
        if (!seen) entries.push_back(std::move(entry));
    }
    return entries;
}

struct RegistryClient::Impl {
    FetchPolicy policy;
    Gate gate;
    std::mutex state_mutex;
    std::map<std::string, std::chrono::steady_clock::time_point> next_slot;
    Stats stats;

    explicit Impl(FetchPolicy p) : policy(std::move(p)), gate(policy.max_concurrency) {}

    void pace(const std::string& host_key) {
        std::chrono::steady_clock::time_point wait_until;
        {
            std::lock_guard lock(state_mutex);
            auto now = std::chrono::steady_clock::now();
            auto& slot = next_slot[host_key];
            wait_until = std::max(now, slot);
            slot = wait_until + policy.min_request_interval;
        }
        std::this_thread::sleep_until(wait_until);
    }

    void bump(std::uint64_t Stats::* counter) {
        std::lock_guard lock(state_mutex);
        stats.*counter += 1;
    }

    // One GET with retries/backoff; 404 raises not_found, an oversized body
    // raises size_limit_exceeded, everything else exhausts into
    // transient_failure.
    std::vector<std::uint8_t> get_with_policy(const std::string& url) {
        auto parts = split_url(url);
        std::string last_problem = "no attempt made";
        for (int attempt = 0;; ++attempt) {
            bool too_large = false;
            std::vector<std::uint8_t> body;
            httplib::Result result = [&] {
                SlotGuard slot(gate);
                pace(parts.host_key);
                bump(&Stats::requests);
                httplib::Client client(parts.origin);
                client.set_follow_location(true);
                client.set_connection_timeout(policy.per_request_timeout);
                client.set_read_timeout(policy.per_request_timeout);
                client.set_write_timeout(policy.per_request_timeout);
                return client.Get(parts.path, httplib::Headers{},
                                  [&](const char* data, std::size_t length) {
                                      if (body.size() + length > policy.max_body_bytes) {
                                          too_large = true;
                                          return false;
                                      }
                                      auto* bytes = reinterpret_cast<const std::uint8_t*>(data);
                                      body.insert(body.end(), bytes, bytes + length);
                                      return true;
                                  });
            }();

            if (too_large) {
                bump(&Stats::failures);
                fail(ErrorKind::size_limit_exceeded,
                     "response for " + url + " exceeds " +
                         std::to_string(policy.max_body_bytes) + " bytes");
            }
            bool retryable = false;
            if (result) {
                if (result->status == 200) return body;
                if (result->status == 404) {
                    bump(&Stats::not_found);
                    fail(ErrorKind::not_found, "HTTP 404 for " + url);
                }
                retryable = is_retryable_status(result->status);
                last_problem = "HTTP " + std::to_string(result->status);
            } else {
                retryable = is_retryable_error(result.error());
                last_problem = httplib::to_string(result.error());
            }

            if (!retryable || attempt >= policy.max_retries) {
                bump(&Stats::failures);
                fail(ErrorKind::transient_failure,
                     "GET " + url + " failed after " + std::to_string(attempt + 1) +
                         " attempt(s): " + last_problem);
            }
            bump(&Stats::retries);
            std::this_thread::sleep_for(policy.backoff_base * (1 << attempt));
        }
    }
};

RegistryClient::RegistryClient(FetchPolicy policy) {
    policy.validate();
    impl_ = std::make_unique<Impl>(std::move(policy));
}

RegistryClient::~RegistryClient() = default;

FileListing RegistryClient::list_release_files(const std::string& root, const Gav& gav) {
    FileListing listing;
    listing.directory_url = registry_directory_url(root, gav);
    auto body = impl_->get_with_policy(listing.directory_url);
    listing.entries = parse_directory_index(
        std::string_view(reinterpret_cast<const char*>(body.data()), body.size()));
    return listing;
}

std::vector<std::uint8_t> RegistryClient::fetch_file(const std::string& url) {
    return impl_->get_with_policy(url);
}

const FetchPolicy& RegistryClient::policy() const { return impl_->policy; }

RegistryClient::Stats RegistryClient::stats() const {
    std::lock_guard lock(impl_->state_mutex);
    return impl_->stats;
}

}  // namespace sbomaudit
