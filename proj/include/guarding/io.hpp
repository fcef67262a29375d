#pragma once
/// @file io.hpp
/// @brief Deterministic text output helpers shared by the CSV/SVG/JSON
/// emitters: shortest round-trip double formatting and atomic file writes.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "guarding/core.hpp"

namespace guarding {

struct IoError : Error {
    using Error::Error;
};

/// Shortest decimal representation that round-trips the double. Byte-stable
/// across runs, which keeps repeated CLI invocations byte-identical.
inline std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Writes content to path via a temporary file plus rename, so observers
/// never see a partially written artifact.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!dir.empty() && !fs::exists(dir)) {
        throw IoError("output directory does not exist: " + dir.string());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw IoError("short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename temporary file onto " + path.string());
    }
}

}  // namespace guarding
