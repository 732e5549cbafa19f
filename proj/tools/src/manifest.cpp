#include "elastica/cli/manifest.hpp"

#include <array>
#include <ctime>
#include <memory>

#include <openssl/evp.h>

#include "elastica/errors.hpp"

#ifndef ELASTICA_VERSION
#define ELASTICA_VERSION "0.0.0"
#endif

namespace elastica::cli {

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw Error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0xF]);
    }
    return out;
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::array<char, 32> buf{};
    const std::size_t n = std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf.data(), n);
}

nlohmann::json to_json(const RunManifest& m) {
    return {
        {"tool_version", m.tool_version}, {"config_digest", m.config_digest}, {"master_seed", m.master_seed},
        {"started_at", m.started_at},     {"finished_at", m.finished_at},     {"subcommand", m.subcommand},
    };
}

std::string tool_version() {
    return ELASTICA_VERSION;
}

}  // namespace elastica::cli
