#pragma once
// Backend-dispatching entry points shared by the CLI and the Python module.
#include "g2t/verify.hpp"

#include <string>
#include <utility>
#include <vector>

namespace g2t {

// A map the lift refuses; kind is NotHarmonic, NotNilconformal or RankDrop.
struct RejectedMap : InputError {
    std::string kind, point;
    RejectedMap(std::string k, std::string p, const std::string& msg)
        : InputError(msg), kind(std::move(k)), point(std::move(p)) {}
};

struct LiftResult {
    Report report;
    json flags;  // one flag, or a list when several points were given
};

// points are "re,im" strings with decimal or p/q parts; empty means the input's own base point.
LiftResult run_lift(const json& input, const Config& cfg, const std::string& s = "auto",
                    const std::vector<std::string>& points = {});

// cfg.example must be s2 or s3; uses cfg.t and cfg.jet_order.
json build_loop(const Config& cfg);
Report check_loop(const json& loop, const Config& cfg);

std::vector<std::pair<std::string, json>> fixture_files(const Config& cfg);

}  // namespace g2t
