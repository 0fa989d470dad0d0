#pragma once

// Job description, result envelopes and the on-disk result cache behind the cmfield tool.

#include "cmfield/bignum.hpp"
#include "cmfield/errors.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cmf {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr Bits kMaxPrecision = 1048576;

struct JobConfig {
    std::string command;                        // forms, minpoly, bound, normal-basis, delta, ray, hensel, verify
    std::map<std::string, std::int64_t> ints;   // d_K, N, p, m, n, l, power as applicable
    std::string suite;                          // verify only
    Bits precision = kDefaultPrecision;
    bool force = false;
    std::string output_format = "json";         // json | text
    std::optional<std::string> cache_dir;
    unsigned threads = 0;
};

/// DEFAULT_PRECISION_BITS when set and valid, else 512.
Bits default_precision();
/// CACHE_DIR when set.
std::optional<std::string> default_cache_dir();

/// 0 ok, 1 verify failure, 2 bad input, 3 rounding, 4 condition, 5 precision, 6 split prime, 7 ratio.
int exit_code_for(ErrorKind kind);

struct JobResult {
    Json envelope;
    int exit_code = 0;
};

/// Validates the config, consults the cache, runs the command and assembles the envelope.
/// Library errors become an "error" member plus the mapped exit code; nothing is thrown.
JobResult run_job(const JobConfig& cfg);

struct ComputeResult {
    Json outputs;
    std::vector<std::string> warnings;
    Bits precision_used = 0;
    bool verify_failed = false;
};

/// The command-specific outputs, without caching or timing. Throws cmf::Error.
ComputeResult compute_outputs(const JobConfig& cfg);

/// Hex FNV-1a digest of (command, inputs, precision, version).
std::string cache_key(const JobConfig& cfg);

/// Human-readable rendering of an envelope.
std::string render_text(const Json& envelope);

} // namespace cmf
