#include "dnls/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace dnls {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void Report::param(const std::string& key, const std::string& value) { parameters.emplace_back(key, value); }
void Report::param(const std::string& key, double value) { parameters.emplace_back(key, fmt(value)); }
void Report::scalar(const std::string& key, double value) { scalars.emplace_back(key, value); }

double Report::get(const std::string& key) const {
    for (const auto& [k, v] : scalars)
        if (k == key) return v;
    throw std::out_of_range("report: no scalar '" + key + "'");
}

Table& Report::table(const std::string& name, std::vector<std::string> columns) {
    tables.push_back(Table{name, std::move(columns), {}});
    return tables.back();
}

const Table& Report::find_table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return t;
    throw std::out_of_range("report: no table '" + name + "'");
}

bool Report::less(const std::string& name, double value, double tol, const std::string& ref) {
    const bool ok = value < tol;
    verdicts.push_back(Verdict{name, value, "<", tol, 0.0, ok, ref});
    return ok;
}

bool Report::at_least(const std::string& name, double value, double tol, const std::string& ref) {
    const bool ok = value >= tol;
    verdicts.push_back(Verdict{name, value, ">=", tol, 0.0, ok, ref});
    return ok;
}

bool Report::within(const std::string& name, double value, double lo, double hi, const std::string& ref) {
    const bool ok = value >= lo && value <= hi;
    verdicts.push_back(Verdict{name, value, "in", lo, hi, ok, ref});
    return ok;
}

bool Report::holds(const std::string& name, bool ok, const std::string& ref) {
    verdicts.push_back(Verdict{name, ok ? 1.0 : 0.0, "holds", 0.0, 0.0, ok, ref});
    return ok;
}

bool Report::all_pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

void Report::merge(const Report& o, const std::string& prefix) {
    for (const auto& [k, v] : o.scalars) scalars.emplace_back(prefix + k, v);
    for (auto t : o.tables) {
        t.name = prefix + t.name;
        tables.push_back(std::move(t));
    }
    for (auto v : o.verdicts) {
        v.name = prefix + v.name;
        verdicts.push_back(std::move(v));
    }
    for (const auto& n : o.notes) notes.push_back(n);
}

namespace {

nlohmann::ordered_json num(double v) {
    if (std::isfinite(v)) return v;
    return fmt(v);  // JSON has no inf/nan
}

}  // namespace

std::string to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.parameters) j["parameters"][k] = v;
    j["results"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.scalars) j["results"][k] = num(v);
    j["tables"] = nlohmann::ordered_json::array();
    for (const auto& t : r.tables) {
        nlohmann::ordered_json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        jt["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json jr = nlohmann::ordered_json::array();
            for (double v : row) jr.push_back(num(v));
            jt["rows"].push_back(jr);
        }
        j["tables"].push_back(jt);
    }
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : r.verdicts) {
        nlohmann::ordered_json jv;
        jv["name"] = v.name;
        jv["value"] = num(v.value);
        jv["relation"] = v.relation;
        jv["tolerance"] = num(v.tol);
        if (v.relation == "in") jv["tolerance_hi"] = num(v.tol_hi);
        jv["pass"] = v.pass;
        if (!v.ref.empty()) jv["checks"] = v.ref;
        j["verdicts"].push_back(jv);
    }
    j["notes"] = r.notes;
    j["pass"] = r.all_pass();
    return j.dump(2);
}

std::string to_csv(const Table& t) {
    std::string out;
    for (size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt(row[i]);
        out += "\n";
    }
    return out;
}

}  // namespace dnls
