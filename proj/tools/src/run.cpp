#include "run.hpp"

#include <sglasso/matrix_io.hpp>

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <memory>
#include <stdexcept>

namespace sglasso::cli {

namespace fs = std::filesystem;

#ifndef SGLASSO_VERSION
#define SGLASSO_VERSION "unknown"
#endif

std::string sha256_hex(std::string_view bytes)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::string sha256_file(const fs::path& path)
{
    return sha256_hex(read_text(path));
}

namespace {

std::string format_utc(const char* fmt)
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, fmt, &tm);
    return buf;
}

fs::path unique_run_dir(const fs::path& base, const std::string& stem)
{
    fs::path dir = base / stem;
    for (int i = 2; fs::exists(dir); ++i) dir = base / (stem + "-" + std::to_string(i));
    return dir;
}

} // namespace

std::string utc_timestamp()
{
    return format_utc("%Y-%m-%dT%H:%M:%SZ");
}

Run::Run(std::string command, json flags, json seeds, const std::string& out_override)
    : command_(std::move(command)), flags_(std::move(flags)), seeds_(std::move(seeds)), started_(utc_timestamp())
{
    if (!out_override.empty()) {
        dir_ = out_override;
    } else {
        const char* env = std::getenv("SGLASSO_OUT_DIR");
        const fs::path base = env && *env ? fs::path(env) : fs::path("runs");
        json key = {{"command", command_}, {"flags", flags_}, {"seeds", seeds_}};
        const std::string digest = sha256_hex(key.dump()).substr(0, 12);
        dir_ = unique_run_dir(base, format_utc("%Y%m%dT%H%M%SZ") + "-" + digest);
    }
    fs::create_directories(dir_);
}

void Run::add_input(const std::string& role, const fs::path& path)
{
    inputs_[role] = {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void Run::write_text(const std::string& name, std::string_view text)
{
    write_text_atomic(dir_ / name, text);
    outputs_.push_back(name);
}

void Run::write_json(const std::string& name, const json& j)
{
    write_text(name, j.dump(2) + "\n");
}

int Run::fail(const std::string& kind, const std::string& message)
{
    write_json("error.json", {{"command", command_}, {"error", kind}, {"message", message}});
    return finish(kRuntimeError);
}

int Run::finish(int exit_code)
{
    write_manifest(exit_code);
    return exit_code;
}

void Run::write_manifest(int exit_code)
{
    json m;
    m["command"] = command_;
    m["flags"] = flags_;
    m["seeds"] = seeds_;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    m["version"] = SGLASSO_VERSION;
    m["started_at"] = started_;
    m["finished_at"] = utc_timestamp();
    m["exit_code"] = exit_code;
    write_text_atomic(dir_ / "manifest.json", m.dump(2) + "\n");
}

} // namespace sglasso::cli
