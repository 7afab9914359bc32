#pragma once

#include "sasrate/error.hpp"

#include <chrono>
#include <string>
#include <string_view>
#include <thread>

namespace sasrate::detail {

struct UrlParts {
    std::string base; // scheme://host[:port]
    std::string path;
};

// Splits "http://host:port/path"; an empty or "/" path becomes default_path.
inline UrlParts split_url(const std::string& url, std::string_view default_path) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos || !url.starts_with("http"))
        throw Error(ErrorKind::InvalidValue, "endpoint '" + url + "' is not an http(s) URL");
    const auto slash = url.find('/', scheme + 3);
    UrlParts parts;
    parts.base = url.substr(0, slash);
    parts.path = slash == std::string::npos ? "" : url.substr(slash);
    if (parts.path.empty() || parts.path == "/") parts.path = std::string(default_path);
    return parts;
}

inline void backoff_sleep(std::chrono::milliseconds base, int attempt) {
    std::this_thread::sleep_for(base * (1 << (attempt - 1)));
}

} // namespace sasrate::detail
