#ifndef RILAB_REPORT_HPP
#define RILAB_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rilab {

struct RecordRow {
    std::string experiment;
    long long rep = 0;
    uint64_t seed = 0;
    std::string statistic;
    double value = 0;
    double std_error = 0;
};

struct ExperimentReport {
    std::string name;
    std::map<std::string, std::string> config_echo;
    std::vector<RecordRow> rows;
    std::map<std::string, double> summary;
    // declared checks; a false entry makes the run a threshold failure
    std::vector<std::pair<std::string, bool>> flags;
    std::vector<std::string> notes; // bias notes, runtimes, fitted constants
    double runtime_sec = 0;

    bool passed() const {
        for (const auto &f : flags)
            if (!f.second) return false;
        return true;
    }
    void flag(const std::string &name_, bool ok) { flags.emplace_back(name_, ok); }
    void row(const std::string &stat, long long rep, uint64_t seed, double value,
             double std_error = 0) {
        rows.push_back({name, rep, seed, stat, value, std_error});
    }
};

// canonical CSV: header experiment,rep,seed,statistic,value,std_error; rows
// sorted so worker scheduling cannot change the bytes
void write_csv(const ExperimentReport &rep, const std::string &path);
// JSON sidecar with config echo, summary, flags and notes
void write_json_summary(const ExperimentReport &rep, const std::string &path);

std::string format_double(double v); // shortest round-trip form, locale-free

} // namespace rilab

#endif
