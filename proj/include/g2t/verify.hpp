#pragma once
#include "g2t/io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace g2t {

struct Config {
    std::string backend = "exact";
    double tol = kDefaultTol;
    int jet_order = 3;
    std::uint64_t seed = 42;
    int points = 20;
    std::string example = "all";  // loops suite: s2, s3 or all
    double t = 1.0;
};

void validate(const Config& c);
json config_to_json(const Config& c);

struct Check {
    std::string id;
    std::string status;  // pass, fail or error
    std::optional<double> residual;
    std::string anchor;
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<Check> checks;
    Config config;

    bool all_pass() const;
    void sort_checks();
    json to_json() const;
    std::string to_text() const;
};

const std::vector<std::string>& suite_names();
// Throws InputError for an unknown suite or invalid config.
Report run_suite(const std::string& suite, const Config& config);

}  // namespace g2t
