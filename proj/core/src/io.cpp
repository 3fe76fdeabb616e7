#include "pq/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pq::io {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedInputError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInputError("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw MalformedInputError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    return j;
}

GeneratedCorpus load_point_cloud(const std::string& path) {
    json j = load_json(path);
    if (!j.contains("points") || !j["points"].is_array())
        throw MalformedInputError(path + ": missing \"points\" array");
    std::vector<std::array<double, 2>> pts;
    for (const auto& row : j["points"]) {
        if (!row.is_array() || row.size() != 2)
            throw MalformedInputError(path + ": each point must be [x, y]");
        pts.push_back({row[0].get<double>(), row[1].get<double>()});
    }
    GeneratedCorpus corpus;
    corpus.space = MetricSpace::from_points(pts);
    const int n = corpus.space.n;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (corpus.space.d(i, k) <= 0.0)
                throw MalformedInputError(path + ": duplicate points " + std::to_string(i) +
                                          " and " + std::to_string(k) +
                                          " (zero distance); merge them before loading");
    if (j.contains("labels")) {
        for (const auto& l : j["labels"]) corpus.space.labels.push_back(l.get<std::string>());
        if (corpus.space.labels.size() != static_cast<std::size_t>(n))
            throw MalformedInputError(path + ": labels length mismatch");
    }
    if (j.contains("truth")) {
        std::vector<int> t;
        for (const auto& v : j["truth"]) t.push_back(v.get<int>());
        corpus.truth_congested = SubsetRef::of(std::move(t));
        if (!corpus.truth_congested.valid_for(n))
            throw MalformedInputError(path + ": truth indices out of range");
    }
    if (j.contains("name")) corpus.name = j["name"].get<std::string>();
    if (j.contains("params"))
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
            corpus.params[it.key()] = it.value().get<double>();
    return corpus;
}

void save_point_cloud(const std::string& path, const GeneratedCorpus& corpus) {
    json j;
    j["name"] = corpus.name;
    json params = json::object();
    for (const auto& [k, v] : corpus.params) params[k] = v;
    j["params"] = params;
    json pts = json::array();
    for (const auto& p : corpus.space.coords) pts.push_back({p[0], p[1]});
    j["points"] = pts;
    if (!corpus.space.labels.empty()) j["labels"] = corpus.space.labels;
    j["truth"] = corpus.truth_congested.indices;
    save_json(path, j);
}

namespace {

bool numeric_token(const std::string& tok) {
    if (tok.empty()) return false;
    char* end = nullptr;
    std::strtod(tok.c_str(), &end);
    while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    return end && *end == '\0';
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == ';' || c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

MetricSpace load_distance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        auto toks = split_csv_line(line);
        if (first) {
            first = false;
            if (!numeric_token(toks.front())) continue;  // header row
        }
        std::vector<double> row;
        for (const auto& t : toks) {
            if (!numeric_token(t))
                throw MalformedInputError(path + ": non-numeric entry '" + t + "'");
            row.push_back(std::strtod(t.c_str(), nullptr));
        }
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw MalformedInputError(path + ": empty matrix");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n)
            throw MalformedInputError(path + ": matrix is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    auto space = MetricSpace::from_matrix(n, std::move(flat));
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (space.d(i, k) <= 0.0)
                throw MalformedInputError(path + ": duplicate points " + std::to_string(i) +
                                          " and " + std::to_string(k) +
                                          " (zero distance); merge them before loading");
    return space;
}

void save_matrix_csv(const std::string& path, int rows, int cols,
                     const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedInputError("cannot open for writing: " + path);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (j) out << ',';
            out << format_double(values[static_cast<std::size_t>(i) * cols + j]);
        }
        out << '\n';
    }
}

std::vector<int> load_int_array(const std::string& path,
                                const std::vector<std::string>& keys) {
    json j = load_json(path);
    const json* arr = nullptr;
    if (j.is_array()) {
        arr = &j;
    } else {
        for (const auto& k : keys)
            if (j.contains(k) && j[k].is_array()) {
                arr = &j[k];
                break;
            }
    }
    if (!arr) throw MalformedInputError(path + ": expected an integer array");
    std::vector<int> out;
    for (const auto& v : *arr) out.push_back(v.get<int>());
    return out;
}

Partition load_partition(const std::string& path, int n) {
    auto class_of = load_int_array(path, {"class_of", "partition"});
    if (static_cast<int>(class_of.size()) != n)
        throw MalformedInputError(path + ": partition length " +
                                  std::to_string(class_of.size()) + " does not match n=" +
                                  std::to_string(n));
    return Partition::from_class_of(class_of);
}

SubsetRef load_subset(const std::string& path, int n) {
    auto idx = load_int_array(path, {"indices", "subset", "F"});
    auto s = SubsetRef::of(std::move(idx));
    if (!s.valid_for(n))
        throw MalformedInputError(path + ": subset indices out of range for n=" +
                                  std::to_string(n));
    return s;
}

json to_json(const PropertyReport& report) {
    json j;
    j["name"] = report.name;
    j["ok"] = report.ok();
    j["checked"] = report.checked;
    if (!report.notice.empty()) j["notice"] = report.notice;
    json v = json::array();
    for (const auto& viol : report.violations) {
        json row;
        row["check"] = viol.check;
        json idx = json::array();
        for (int i : viol.idx)
            if (i >= 0) idx.push_back(i);
        row["indices"] = idx;
        row["lhs"] = viol.lhs;
        row["rhs"] = viol.rhs;
        row["tolerance"] = viol.tolerance;
        v.push_back(row);
    }
    j["violations"] = v;
    return j;
}

json to_json(const ValidationReport& report) {
    json j;
    j["ok"] = report.ok();
    json v = json::array();
    for (const auto& issue : report.issues) {
        json row;
        row["check"] = issue.check;
        json idx = json::array();
        for (int i : issue.idx)
            if (i >= 0) idx.push_back(i);
        row["indices"] = idx;
        row["lhs"] = issue.lhs;
        row["rhs"] = issue.rhs;
        row["tolerance"] = issue.tolerance;
        v.push_back(row);
    }
    j["violations"] = v;
    return j;
}

json to_json(const CongestionParams& params) {
    json j;
    j["r"] = params.r;
    j["R"] = params.R;
    j["delta"] = params.delta;
    j["kappa_thin"] = params.kappa_thin;
    j["coarse"] = params.coarse;
    return j;
}

namespace {

json matrix_or_sidecar(const std::string& prefix, const std::string& tag, int rows, int cols,
                       const std::vector<double>& values) {
    json j;
    j["rows"] = rows;
    j["cols"] = cols;
    if (rows <= kInlineMatrixLimit && cols <= kInlineMatrixLimit) {
        json m = json::array();
        for (int i = 0; i < rows; ++i) {
            json row = json::array();
            for (int c = 0; c < cols; ++c)
                row.push_back(values[static_cast<std::size_t>(i) * cols + c]);
            m.push_back(row);
        }
        j["values"] = m;
    } else {
        const std::string sidecar = prefix + "." + tag + ".csv";
        save_matrix_csv(sidecar, rows, cols, values);
        // reference by file name; artifacts stay relocatable as a set
        auto slash = sidecar.find_last_of('/');
        j["csv"] = slash == std::string::npos ? sidecar : sidecar.substr(slash + 1);
    }
    return j;
}

}  // namespace

void save_quotient(const std::string& prefix, const QuotientSpace& qspace, double tau_merge,
                   const std::string& solver, const std::vector<StringWitness>* witnesses) {
    const int K = qspace.Q.K();
    json j;
    j["metadata"] = {{"tau_merge", tau_merge},
                     {"solver", solver},
                     {"equality_rel_tol", 1e-12},
                     {"classes", K}};
    j["pi"] = qspace.pi;
    json classes = json::array();
    for (const auto& c : qspace.Q.classes) classes.push_back(c);
    j["classes"] = classes;
    j["nabla"] = matrix_or_sidecar(prefix, "nabla", K, K, qspace.nabla);
    save_matrix_csv(prefix + ".nabla.csv", K, K, qspace.nabla);
    if (witnesses) {
        json w = json::array();
        for (const auto& wit : *witnesses) {
            json row;
            row["class_sequence"] = wit.class_sequence;
            row["total"] = wit.total;
            w.push_back(row);
        }
        j["witnesses"] = w;
    }
    save_json(prefix + ".quotient.json", j);
}

json pipeline_report_json(const PipelineReport& report, const std::string& prefix) {
    json j;
    j["params"] = {{"scales", to_json(report.scales_used)},
                   {"residual_scales", to_json(report.residual_scales_used)},
                   {"delta_f", report.delta_f},
                   {"tau_merge", report.tau_merge},
                   {"collar", report.collar}};
    if (!report.warning.empty()) j["warning"] = report.warning;
    json decomp;
    decomp["N"] = report.decomposition.N.indices;
    decomp["F"] = report.decomposition.F.indices;
    decomp["O"] = report.decomposition.O.indices;
    json sf = json::array();
    for (const auto& c : report.decomposition.SF.classes) sf.push_back(c);
    decomp["SF"] = sf;
    j["decomposition"] = decomp;
    json q;
    q["pi"] = report.qspace.pi;
    q["classes"] = report.qspace.Q.K();
    q["f_image_classes"] = report.f_image_classes;
    q["nabla"] = matrix_or_sidecar(prefix, "nabla", report.qspace.Q.K(), report.qspace.Q.K(),
                                   report.qspace.nabla);
    j["quotient"] = q;
    j["residual"] = report.residual.indices;
    j["residual_empty"] = report.residual_empty();
    j["checks"] = {{"separation", to_json(report.separation)},
                   {"local_isometry", to_json(report.local_isometry)},
                   {"pseudometric", to_json(report.pseudometric)}};
    return j;
}

void save_pipeline_report(const std::string& path, const PipelineReport& report) {
    std::string prefix = path;
    if (prefix.size() > 5 && prefix.substr(prefix.size() - 5) == ".json")
        prefix = prefix.substr(0, prefix.size() - 5);
    save_json(path, pipeline_report_json(report, prefix));
}

}  // namespace pq::io
