#include "tfs/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tfs/error.hpp"
#include "tfs/version.hpp"

namespace tfs {

using nlohmann::json;

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

void emit(const json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: sorted keys
                if (!first) out += ",\n";
                first = false;
                out += inner + json(it.key()).dump() + ": ";
                emit(it.value(), out, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (std::all_of(j.begin(), j.end(), is_scalar)) {
                out += "[";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ", ";
                    first = false;
                    emit(e, out, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ",\n";
                first = false;
                out += inner;
                emit(e, out, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string canonical_json(const json& value) {
    std::string out;
    emit(value, out, 0);
    out += '\n';
    return out;
}

json tool_info() { return {{"name", kToolName}, {"version", kToolVersion}}; }

json to_json(const SelectionConfig& c) {
    json j;
    j["method"] = std::string(to_string(c.method));
    if (c.method == Method::tfs) {
        j["metric"] = std::string(to_string(c.metric));
        j["square"] = c.squared;
    }
    j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
    j["theta"] = c.theta ? json(*c.theta) : json(nullptr);
    j["k"] = c.cardinality;
    return j;
}

SelectionConfig selection_config_from_json(const json& j) {
    try {
        SelectionConfig c;
        c.method = parse_method(j.at("method").get<std::string>());
        if (j.contains("metric") && !j["metric"].is_null()) c.metric = parse_metric(j["metric"].get<std::string>());
        if (j.contains("square")) c.squared = j["square"].get<bool>();
        if (j.contains("alpha") && !j["alpha"].is_null()) c.alpha = j["alpha"].get<double>();
        if (j.contains("theta") && !j["theta"].is_null()) c.theta = j["theta"].get<double>();
        if (j.contains("k")) {
            const auto k = j["k"].get<long long>();
            if (k <= 0) throw ValidationError("k must be a positive integer");
            c.cardinality = static_cast<std::size_t>(k);
        }
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad selection config: ") + e.what());
    }
}

json to_json(const TmfgGraph& g) {
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    json cliques = json::array(), separators = json::array(), triangles = json::array(), log = json::array();
    for (const auto& c : g.cliques) cliques.push_back(c);
    for (const auto& s : g.separators) separators.push_back(s);
    for (const auto& t : g.triangles) triangles.push_back(t);
    for (const auto& ins : g.insertion_log)
        log.push_back({{"vertex", ins.vertex}, {"host", ins.host}, {"gain", ins.gain}});
    return {{"n", g.n},
            {"edges", edges},
            {"cliques", cliques},
            {"separators", separators},
            {"triangles", triangles},
            {"insertion_log", log}};
}

json to_json(const TTestResult& r) {
    return {{"t_statistic", r.t_statistic},
            {"degrees_of_freedom", r.degrees_of_freedom},
            {"p_value", r.p_value},
            {"mean_difference", r.mean_difference},
            {"sigma", r.sigma},
            {"differences", r.differences},
            {"flag", std::string(to_string(r.flag))}};
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace tfs
