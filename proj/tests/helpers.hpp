#pragma once

#include <doctest.h>

#include "sasrate/error.hpp"

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

// CHECK that `expr` throws sasrate::Error of the given kind.
#define CHECK_KIND(expr, error_kind)                                                                               \
    do {                                                                                                           \
        bool thrown_ = false;                                                                                      \
        try {                                                                                                      \
            (void)(expr);                                                                                          \
        } catch (const sasrate::Error& e_) {                                                                       \
            thrown_ = true;                                                                                        \
            CHECK_MESSAGE(e_.kind() == (error_kind), "got " << sasrate::to_string(e_.kind()) << ": " << std::string(e_.what())); \
        }                                                                                                          \
        CHECK_MESSAGE(thrown_, "no sasrate::Error thrown by " #expr);                                              \
    } while (0)

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("sasrate-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};
