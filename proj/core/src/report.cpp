#include "rilab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace rilab {

std::string format_double(double v) {
    char buf[40];
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

void write_csv(const ExperimentReport &rep, const std::string &path) {
    std::vector<RecordRow> rows = rep.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const RecordRow &a, const RecordRow &b) {
        return std::tie(a.experiment, a.rep, a.statistic) <
               std::tie(b.experiment, b.rep, b.statistic);
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out << "experiment,rep,seed,statistic,value,std_error\n";
    for (const RecordRow &r : rows)
        out << r.experiment << ',' << r.rep << ',' << r.seed << ',' << r.statistic << ','
            << format_double(r.value) << ',' << format_double(r.std_error) << '\n';
}

void write_json_summary(const ExperimentReport &rep, const std::string &path) {
    nlohmann::json j;
    j["name"] = rep.name;
    j["config"] = rep.config_echo;
    j["summary"] = rep.summary;
    j["runtime_sec"] = rep.runtime_sec;
    j["passed"] = rep.passed();
    nlohmann::json flags = nlohmann::json::object();
    for (const auto &f : rep.flags) flags[f.first] = f.second;
    j["flags"] = flags;
    j["notes"] = rep.notes;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write json: " + path);
    out << j.dump(2) << '\n';
}

} // namespace rilab
