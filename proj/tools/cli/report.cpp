#include "report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "whlab/csv.hpp"

namespace whlab::cli {
namespace {

using nlohmann::json;

void dump(const json& v, std::ostringstream& os, int indent) {
    const std::string pad(indent + 2, ' ');
    const std::string close(indent, ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            // nlohmann's default object type is a std::map, so items() is already sorted
            os << "{\n";
            bool first = true;
            for (const auto& [k, item] : v.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << json(k).dump() << ": ";
                dump(item, os, indent + 2);
            }
            os << '\n' << close << '}';
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                dump(v[i], os, indent + 2);
            }
            os << '\n' << close << ']';
            return;
        }
        case json::value_t::number_float: {
            const double d = v.get<double>();
            os << (std::isfinite(d) ? csv::format_double(d) : "null");
            return;
        }
        default:
            os << v.dump();
    }
}

CheckRecord make(std::string name, std::string anchor, double measured, double expected,
                 std::string relation, double tolerance, bool ok) {
    CheckRecord r;
    r.name = std::move(name);
    r.anchor = std::move(anchor);
    r.measured = measured;
    r.expected = expected;
    r.relation = std::move(relation);
    r.tolerance = tolerance;
    r.status = ok ? Status::Pass : Status::Fail;
    return r;
}

}  // namespace

const char* to_string(Status s) noexcept {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

CheckRecord at_most(std::string name, std::string anchor, double measured, double bound) {
    return make(std::move(name), std::move(anchor), measured, bound, "<=", 0.0, measured <= bound);
}

CheckRecord at_least(std::string name, std::string anchor, double measured, double bound) {
    return make(std::move(name), std::move(anchor), measured, bound, ">=", 0.0, measured >= bound);
}

CheckRecord close_to(std::string name, std::string anchor, double measured, double expected,
                     double tolerance) {
    return make(std::move(name), std::move(anchor), measured, expected, "~=", tolerance,
                std::abs(measured - expected) <= tolerance);
}

Status VerificationReport::overall() const {
    bool inconclusive = false;
    for (const auto& c : checks) {
        if (c.status == Status::Fail) return Status::Fail;
        inconclusive = inconclusive || c.status == Status::Inconclusive;
    }
    return inconclusive ? Status::Inconclusive : Status::Pass;
}

int VerificationReport::exit_code() const {
    switch (overall()) {
        case Status::Pass: return 0;
        case Status::Fail: return 2;
        case Status::Inconclusive: return 3;
    }
    return 2;
}

nlohmann::json VerificationReport::to_json() const {
    json checks_json = json::array();
    int counts[3] = {0, 0, 0};
    for (const auto& c : checks) {
        checks_json.push_back({{"name", c.name},
                               {"anchor", c.anchor},
                               {"measured", c.measured},
                               {"expected", c.expected},
                               {"relation", c.relation},
                               {"tolerance", c.tolerance},
                               {"status", to_string(c.status)},
                               {"detail", c.detail}});
        ++counts[static_cast<int>(c.status)];
    }
    return {{"command", command},
            {"status", to_string(overall())},
            {"summary", {{"pass", counts[0]}, {"fail", counts[1]}, {"inconclusive", counts[2]}}},
            {"checks", checks_json},
            {"config", config},
            {"environment", environment},
            {"artifacts", artifacts}};
}

std::string canonical_dump(const nlohmann::json& doc) {
    std::ostringstream os;
    dump(doc, os, 0);
    os << '\n';
    return os.str();
}

void write_report(const VerificationReport& report, const std::filesystem::path& path) {
    if (report.checks.empty()) throw InvalidReport("report has no check records");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report " + path.string());
    out << canonical_dump(report.to_json());
    if (!out) throw std::runtime_error("failed writing report " + path.string());
}

}  // namespace whlab::cli
