#pragma once
#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sglasso::cli {

using json = nlohmann::ordered_json;

/// Exit statuses shared by every subcommand.
enum ExitCode : int
{
    kOk = 0,
    kRuntimeError = 1,
    kUsageError = 2,
    kNotConverged = 3,
};

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// UTC time as 2026-01-31T12:00:00Z.
std::string utc_timestamp();

/*
 * One invocation of a subcommand: owns the output directory and the
 * manifest. The directory is --out when given, otherwise
 * $SGLASSO_OUT_DIR (or ./runs) / <UTC time>-<digest of flags and seeds>.
 */
class Run
{
public:
    Run(std::string command, json flags, json seeds, const std::string& out_override);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    /// Records an input file and its digest in the manifest.
    void add_input(const std::string& role, const std::filesystem::path& path);

    void write_text(const std::string& name, std::string_view text);
    void write_json(const std::string& name, const json& j);

    /// Writes error.json and the manifest; returns kRuntimeError.
    int fail(const std::string& kind, const std::string& message);
    /// Writes the manifest with the final status and returns it.
    int finish(int exit_code);

private:
    void write_manifest(int exit_code);

    std::string command_;
    json flags_;
    json seeds_;
    json inputs_ = json::object();
    std::vector<std::string> outputs_;
    std::string started_;
    std::filesystem::path dir_;
};

} // namespace sglasso::cli
