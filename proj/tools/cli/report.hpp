#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace whlab::cli {

enum class Status { Pass, Fail, Inconclusive };
const char* to_string(Status s) noexcept;

struct CheckRecord {
    std::string name;
    std::string anchor;       ///< the claim being checked, in words
    double measured = 0.0;
    double expected = 0.0;
    std::string relation;     ///< "<=", ">=" or "~=" (|measured - expected| <= tolerance)
    double tolerance = 0.0;
    Status status = Status::Fail;
    std::string detail;
};

CheckRecord at_most(std::string name, std::string anchor, double measured, double bound);
CheckRecord at_least(std::string name, std::string anchor, double measured, double bound);
CheckRecord close_to(std::string name, std::string anchor, double measured, double expected,
                     double tolerance);

class InvalidReport : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VerificationReport {
    std::string command;
    std::vector<CheckRecord> checks;
    nlohmann::json config;
    nlohmann::json environment;
    std::vector<std::string> artifacts;  ///< relative to the run directory

    void add(CheckRecord r) { checks.push_back(std::move(r)); }
    /// fail if any record fails, else inconclusive if any is, else pass.
    Status overall() const;
    /// 0 pass, 2 fail, 3 inconclusive only.
    int exit_code() const;
    nlohmann::json to_json() const;
};

/// Sorted keys, two-space indent, doubles as %.17g, non-finite as null.
std::string canonical_dump(const nlohmann::json& doc);

/// Throws InvalidReport for an empty check list; IO failures throw std::runtime_error.
void write_report(const VerificationReport& report, const std::filesystem::path& path);

}  // namespace whlab::cli
