// External SAS adapters: a worker process speaking line-delimited JSON over
// stdin/stdout, and an HTTP endpoint taking the same JSON bodies.

#include "sasrate/error.hpp"
#include "sasrate/io.hpp"
#include "sasrate/sas.hpp"

#include "http_util.hpp"

#include <httplib.h>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

namespace sasrate {

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
    static std::once_flag once;
    std::call_once(once, [] {
        struct sigaction sa {};
        sa.sa_handler = SIG_IGN;
        sigaction(SIGPIPE, &sa, nullptr);
    });
}

void require_unique_ids(std::span<const ScoreRequest> requests) {
    std::set<std::string_view> ids;
    for (const auto& r : requests) {
        if (!ids.insert(r.id).second) throw Error(ErrorKind::InvalidValue, "duplicate request id '" + r.id + "'");
    }
}

// Owns the child process and both pipe ends; kills the child if the exchange
// is abandoned.
class WorkerProcess {
public:
    explicit WorkerProcess(const std::string& command) {
        ignore_sigpipe();
        int to_child[2];
        int from_child[2];
        if (pipe2(to_child, O_CLOEXEC) != 0) throw Error(ErrorKind::WorkerCrashed, "pipe: " + std::string(std::strerror(errno)));
        if (pipe2(from_child, O_CLOEXEC) != 0) {
            ::close(to_child[0]);
            ::close(to_child[1]);
            throw Error(ErrorKind::WorkerCrashed, "pipe: " + std::string(std::strerror(errno)));
        }
        pid_ = fork();
        if (pid_ < 0) throw Error(ErrorKind::WorkerCrashed, "fork: " + std::string(std::strerror(errno)));
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        stdin_ = to_child[1];
        stdout_ = from_child[0];
    }

    WorkerProcess(const WorkerProcess&) = delete;
    WorkerProcess& operator=(const WorkerProcess&) = delete;

    ~WorkerProcess() {
        close_stdin();
        if (stdout_ >= 0) ::close(stdout_);
        if (pid_ > 0 && !reaped_) {
            kill(pid_, SIGKILL);
            waitpid(pid_, nullptr, 0);
        }
    }

    void send_line(const std::string& line) {
        std::size_t off = 0;
        while (off < line.size()) {
            const ssize_t n = ::write(stdin_, line.data() + off, line.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorKind::WorkerCrashed, "worker stopped reading requests (" +
                                                          std::string(std::strerror(errno)) + ")");
            }
            off += static_cast<std::size_t>(n);
        }
    }

    void close_stdin() {
        if (stdin_ >= 0) {
            ::close(stdin_);
            stdin_ = -1;
        }
    }

    // Waits up to `wait` for output. Returns nullopt on timeout and an empty
    // string at end of stream.
    std::optional<std::string> read_some(std::chrono::milliseconds wait) {
        pollfd pfd{stdout_, POLLIN, 0};
        int rc;
        do {
            rc = poll(&pfd, 1, static_cast<int>(std::max<std::int64_t>(0, wait.count())));
        } while (rc < 0 && errno == EINTR);
        if (rc < 0) throw Error(ErrorKind::WorkerCrashed, "poll: " + std::string(std::strerror(errno)));
        if (rc == 0) return std::nullopt;
        char buf[65536];
        ssize_t n;
        do {
            n = ::read(stdout_, buf, sizeof buf);
        } while (n < 0 && errno == EINTR);
        if (n < 0) throw Error(ErrorKind::WorkerCrashed, "read: " + std::string(std::strerror(errno)));
        return std::string(buf, static_cast<std::size_t>(n));
    }

    // Gives the worker a moment to exit on its own after stdin closes.
    void finish() {
        close_stdin();
        const auto until = Clock::now() + std::chrono::seconds(2);
        while (Clock::now() < until) {
            if (waitpid(pid_, nullptr, WNOHANG) == pid_) {
                reaped_ = true;
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
    }

private:
    pid_t pid_ = -1;
    int stdin_ = -1;
    int stdout_ = -1;
    bool reaped_ = false;
};

struct ParsedReply {
    std::string id;
    double score;
};

ParsedReply parse_reply(std::string_view line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::parse_error&) {
        throw Error(ErrorKind::ProtocolViolation, "reply is not JSON: '" + std::string(line.substr(0, 200)) + "'");
    }
    if (!j.is_object()) throw Error(ErrorKind::ProtocolViolation, "reply is not a JSON object");
    if (!j.contains("id") || !j["id"].is_string()) throw Error(ErrorKind::ProtocolViolation, "reply has no string 'id'");
    if (!j.contains("score") || !j["score"].is_number())
        throw Error(ErrorKind::ProtocolViolation, "reply '" + j["id"].get<std::string>() + "' has no numeric 'score'");
    ParsedReply reply{j["id"].get<std::string>(), j["score"].get<double>()};
    if (!(reply.score >= -1.0 && reply.score <= 1.0))
        throw Error(ErrorKind::ScoreOutOfRange,
                    "reply '" + reply.id + "' score " + std::to_string(reply.score) + " outside [-1, 1]");
    return reply;
}

std::vector<ScoredRecord> collect(std::span<const ScoreRequest> requests, const std::vector<double>& scores,
                                  const std::string& sas_id) {
    std::vector<ScoredRecord> out;
    out.reserve(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) out.push_back({requests[i].id, sas_id, SentimentScore(scores[i])});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.record_id < b.record_id; });
    return out;
}

} // namespace

std::vector<ScoredRecord> score_worker(const std::string& command, std::span<const ScoreRequest> requests,
                                       const std::string& sas_id, const WorkerOptions& options) {
    require_unique_ids(requests);
    if (requests.empty()) return {};
    const std::size_t window = std::max<std::size_t>(1, options.max_in_flight);

    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < requests.size(); ++i) index_of.emplace(requests[i].id, i);

    WorkerProcess worker(command);
    std::map<std::string, Clock::time_point> in_flight;
    std::vector<double> scores(requests.size());
    std::size_t next = 0;
    std::size_t answered = 0;
    std::string buffer;

    while (answered < requests.size()) {
        while (next < requests.size() && in_flight.size() < window) {
            const auto& req = requests[next++];
            worker.send_line(Json{{"id", req.id}, {"text", req.text}}.dump() + "\n");
            in_flight.emplace(req.id, Clock::now() + options.timeout);
        }
        if (next == requests.size()) worker.close_stdin();

        auto oldest = std::min_element(in_flight.begin(), in_flight.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
        const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(oldest->second - Clock::now());
        auto chunk = worker.read_some(wait);
        if (!chunk) {
            throw Error(ErrorKind::Timeout, "worker gave no reply for '" + oldest->first + "' within " +
                                                std::to_string(options.timeout.count()) + " ms");
        }
        if (chunk->empty()) {
            throw Error(ErrorKind::WorkerCrashed, "worker exited with " + std::to_string(requests.size() - answered) +
                                                      " request(s) unanswered");
        }
        buffer += *chunk;
        for (auto nl = buffer.find('\n'); nl != std::string::npos; nl = buffer.find('\n')) {
            std::string line = buffer.substr(0, nl);
            buffer.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto reply = parse_reply(line);
            auto it = in_flight.find(reply.id);
            if (it == in_flight.end())
                throw Error(ErrorKind::ProtocolViolation, "reply for unknown or already answered id '" + reply.id + "'");
            in_flight.erase(it);
            scores[index_of.at(reply.id)] = reply.score;
            ++answered;
        }
    }
    worker.finish();
    return collect(requests, scores, sas_id);
}

std::vector<ScoredRecord> score_http(const std::string& endpoint, std::span<const ScoreRequest> requests,
                                     const std::string& sas_id, const HttpOptions& options) {
    require_unique_ids(requests);
    if (requests.empty()) return {};
    const auto url = detail::split_url(endpoint, "/score");
    const int attempts = std::max(1, options.attempts);

    std::vector<double> scores(requests.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto run = [&] {
        httplib::Client client(url.base);
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
        const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        client.set_write_timeout(secs.count(), usecs.count());
        try {
            for (std::size_t i = next++; i < requests.size() && !failed; i = next++) {
                const auto& req = requests[i];
                const std::string body = Json{{"id", req.id}, {"text", req.text}}.dump();
                std::string last_failure;
                bool done = false;
                for (int attempt = 1; attempt <= attempts && !done; ++attempt) {
                    auto res = client.Post(url.path, body, "application/json");
                    if (!res) {
                        last_failure = "request failed (" + httplib::to_string(res.error()) + ")";
                    } else if (res->status == 200) {
                        const auto reply = parse_reply(res->body);
                        if (reply.id != req.id)
                            throw Error(ErrorKind::ProtocolViolation,
                                        "reply id '" + reply.id + "' does not match request '" + req.id + "'");
                        scores[i] = reply.score;
                        done = true;
                    } else if (res->status >= 500) {
                        last_failure = "HTTP " + std::to_string(res->status);
                    } else {
                        throw Error(ErrorKind::AdapterError,
                                    endpoint + " answered HTTP " + std::to_string(res->status) + " for '" + req.id + "'");
                    }
                    if (!done && attempt < attempts) detail::backoff_sleep(options.backoff, attempt);
                }
                if (!done)
                    throw Error(ErrorKind::AdapterError, endpoint + ": " + last_failure + " after " +
                                                             std::to_string(attempts) + " attempt(s)");
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
        }
    };

    const std::size_t threads = std::min(std::max<std::size_t>(1, options.max_in_flight), requests.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return collect(requests, scores, sas_id);
}

} // namespace sasrate
