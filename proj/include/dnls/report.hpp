#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dnls {

struct Verdict {
    std::string name;
    double value = 0.0;
    std::string relation;  // "<", "<=", ">=", "in", "holds"
    double tol = 0.0;
    double tol_hi = 0.0;
    bool pass = false;
    std::string ref;  // identity being checked
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<Table> tables;
    std::vector<Verdict> verdicts;
    std::vector<std::string> notes;

    void param(const std::string& key, const std::string& value);
    void param(const std::string& key, double value);
    void scalar(const std::string& key, double value);
    double get(const std::string& key) const;  // throws if absent
    Table& table(const std::string& name, std::vector<std::string> columns);
    const Table& find_table(const std::string& name) const;

    bool less(const std::string& name, double value, double tol, const std::string& ref = "");
    bool at_least(const std::string& name, double value, double tol, const std::string& ref = "");
    bool within(const std::string& name, double value, double lo, double hi, const std::string& ref = "");
    bool holds(const std::string& name, bool ok, const std::string& ref = "");

    bool all_pass() const;
    void merge(const Report& other, const std::string& prefix = "");
};

std::string to_json(const Report& r);
std::string to_csv(const Table& t);

// formatting that round-trips doubles and is independent of the locale
std::string fmt(double v);

}  // namespace dnls
