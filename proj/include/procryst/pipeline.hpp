#pragma once

#include "procryst/caps.hpp"
#include "procryst/catalog.hpp"
#include "procryst/conjugacy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace procryst {

struct RunOptions {
    int threads = 1;
    bool h2_bar_cochains = false; // use bar-cochain H^2(G, M/qM) in the size test
    Caps caps;
};

struct SeparationResult {
    int qclass = 0;
    int zclass_a = 0;
    int zclass_b = 0;
    bool separated = false;
    bool skipped = false;
    SeparationMethod method = SeparationMethod::None;
    std::string note;
    std::int64_t millis = 0;
};

struct VerificationResult {
    int qclass = 0;
    int zclass = 0;
    int stage = 0; // 1, 4 or 5; 0 = failed, -1 = skipped
    Int orbit_count = 0;
    int spacegroups = 0;
    std::string note;
    std::int64_t millis = 0;
};

SeparationResult separate_pair(const ZClassEntry& a, const ZClassEntry& b,
                               const RunOptions& opts = RunOptions{});
VerificationResult verify_zclass(const ZClassEntry& e, const RunOptions& opts = RunOptions{});

struct RunReport {
    int dimension = 0;
    std::vector<SeparationResult> pairs;
    std::vector<VerificationResult> entries;
    std::vector<ValidationIssue> validation;

    // per-method counts in the fixed order: cohomology-size, mod-2, zp-2,
    // mod-3, zp-3, mod-5, zp-5, combined-pi
    std::vector<int> separation_histogram() const;
    // counts for stages 1, 4, 5, failed, skipped
    std::vector<int> stage_histogram() const;
    int exit_code() const; // 0 ok, 2 mathematical failure, 3 capped, 4 invalid

    std::string summary() const;       // deterministic text block
    std::string csv() const;           // one row per pair and per entry
};

RunReport run_dimension(const Catalog& c, const RunOptions& opts = RunOptions{});

} // namespace procryst
