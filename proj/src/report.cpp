#include "sparselab/report.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sparselab/errors.hpp"

namespace sparselab {

void Report::aggregate() {
    max_ratio = 0.0;
    eta_min = 1.0;
    carleson_max = 0.0;
    for (const CaseRecord& c : cases) {
        max_ratio = std::max(max_ratio, c.ratio);
        if (c.sparse_entries > 0) {
            eta_min = std::min(eta_min, c.eta);
            carleson_max = std::max(carleson_max, c.carleson);
        }
        if (!c.invariant_failures.empty()) status = std::max(status, 1);
    }
}

std::string digest_of(std::span<const GridFunction> inputs) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const GridFunction& f : inputs) {
        for (const cplx& z : f.samples()) {
            const double re = z.real(), im = z.imag();
            mix(&re, sizeof re);
            mix(&im, sizeof im);
        }
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

namespace {

nlohmann::ordered_json case_json(const CaseRecord& c) {
    nlohmann::ordered_json j;
    j["inputsDigest"] = c.inputs_digest;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["ratio"] = c.ratio;
    j["fsLhs"] = c.fs_lhs;
    j["fsRhs"] = c.fs_rhs;
    j["fsRatio"] = c.fs_ratio;
    j["localRatio"] = c.local_ratio;
    j["sparseFamilySummary"] = {{"entries", c.sparse_entries},
                                {"eta", c.eta},
                                {"carleson", c.carleson},
                                {"C", c.C_used}};
    j["invariantFailures"] = c.invariant_failures;
    return j;
}

} // namespace

std::string report_json(const Report& r) {
    nlohmann::ordered_json j;
    j["operator"] = r.operator_name;
    j["suiteKind"] = r.suite_kind;
    j["seed"] = r.seed;
    j["gridCount"] = r.grid_count;
    j["q"] = r.q;
    j["cases"] = nlohmann::ordered_json::array();
    for (const CaseRecord& c : r.cases) j["cases"].push_back(case_json(c));
    j["aggregates"] = {{"maxRatio", r.max_ratio},
                       {"etaMin", r.eta_min},
                       {"carlesonMax", r.carleson_max}};
    j["status"] = r.status;
    return j.dump(2);
}

std::string report_csv(const Report& r) {
    std::ostringstream os;
    os.precision(17);
    os << "case,inputsDigest,lhs,rhs,ratio,fsLhs,fsRhs,fsRatio,localRatio,"
          "sparseEntries,eta,carleson,C,invariantFailures\n";
    for (std::size_t i = 0; i < r.cases.size(); ++i) {
        const CaseRecord& c = r.cases[i];
        os << i << "," << c.inputs_digest << "," << c.lhs << "," << c.rhs << "," << c.ratio << ","
           << c.fs_lhs << "," << c.fs_rhs << "," << c.fs_ratio << "," << c.local_ratio << ","
           << c.sparse_entries << "," << c.eta << "," << c.carleson << "," << c.C_used << ",";
        for (std::size_t k = 0; k < c.invariant_failures.size(); ++k) {
            if (k) os << ";";
            os << c.invariant_failures[k];
        }
        os << "\n";
    }
    return os.str();
}

void emit_report(const Report& r, const std::string& format, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IOFailure("cannot open " + path);
    if (format == "json") os << report_json(r);
    else if (format == "csv") os << report_csv(r);
    else throw BadConfig("unknown report format: " + format);
    if (!os) throw IOFailure("write failed: " + path);
}

} // namespace sparselab
