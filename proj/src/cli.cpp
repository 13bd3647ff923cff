#include "tfs/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tfs/error.hpp"
#include "tfs/metrics.hpp"
#include "tfs/report.hpp"
#include "tfs/similarity.hpp"
#include "tfs/tmfg.hpp"
#include "tfs/version.hpp"

namespace tfs::cli {

using nlohmann::json;

namespace {

template <typename T>
T get_field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config field '") + key + "': " + e.what());
    }
}

std::vector<double> double_list(const json& j, const char* key) {
    auto v = get_field<std::vector<double>>(j, key);
    if (v.empty()) throw ValidationError(std::string("config field '") + key + "' must not be empty");
    return v;
}

std::size_t positive(long long v, const char* what) {
    if (v <= 0) throw ValidationError(std::string(what) + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("run config must be a JSON object");
    static const std::set<std::string> known{"dataset",       "label_column", "provided_test", "test_fraction",
                                             "methods",       "grid",         "cardinalities", "classifiers",
                                             "cv_k",          "seed",         "ttest_repetitions",
                                             "output_dir"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ValidationError("unknown config field '" + it.key() + "'");

    RunConfig c;
    c.dataset = get_field<std::string>(j, "dataset");
    if (j.contains("label_column") && !j["label_column"].is_null())
        c.label_column = get_field<std::string>(j, "label_column");
    if (!c.label_column) throw ValidationError("config field 'label_column' is required for evaluation");
    if (j.contains("provided_test") && !j["provided_test"].is_null())
        c.provided_test = get_field<std::string>(j, "provided_test");
    if (j.contains("test_fraction")) c.test_fraction = get_field<double>(j, "test_fraction");
    if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) throw ValidationError("test_fraction must lie in (0, 1)");
    if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& m : get_field<std::vector<std::string>>(j, "methods")) c.methods.push_back(parse_method(m));
        if (c.methods.empty()) throw ValidationError("config field 'methods' must not be empty");
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("inffs")) {
            const auto& gi = g["inffs"];
            if (gi.contains("alpha")) c.grid.inffs_alpha = double_list(gi, "alpha");
            if (gi.contains("theta")) c.grid.inffs_theta = double_list(gi, "theta");
        }
        if (g.contains("tfs")) {
            const auto& gt = g["tfs"];
            if (gt.contains("metrics")) {
                c.grid.tfs_metrics.clear();
                for (const auto& m : get_field<std::vector<std::string>>(gt, "metrics"))
                    c.grid.tfs_metrics.push_back(parse_metric(m));
            }
            if (gt.contains("square")) c.grid.tfs_square = get_field<std::vector<bool>>(gt, "square");
            if (gt.contains("alpha")) c.grid.tfs_alpha = double_list(gt, "alpha");
        }
    }
    if (j.contains("cardinalities")) {
        c.cardinalities.clear();
        for (auto k : get_field<std::vector<long long>>(j, "cardinalities"))
            c.cardinalities.push_back(positive(k, "cardinality"));
        if (c.cardinalities.empty()) throw ValidationError("config field 'cardinalities' must not be empty");
    }
    if (j.contains("classifiers")) {
        c.classifiers.clear();
        for (const auto& k : get_field<std::vector<std::string>>(j, "classifiers"))
            c.classifiers.push_back(parse_classifier(k));
        if (c.classifiers.empty()) throw ValidationError("config field 'classifiers' must not be empty");
    }
    if (j.contains("cv_k")) c.cv_k = positive(get_field<long long>(j, "cv_k"), "cv_k");
    if (c.cv_k < 2) throw ValidationError("cv_k must be at least 2");
    if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("ttest_repetitions")) c.ttest_repetitions = get_field<std::size_t>(j, "ttest_repetitions");
    if (c.ttest_repetitions == 1) throw ValidationError("ttest_repetitions must be 0 (off) or at least 2");
    if (j.contains("output_dir")) c.output_dir = get_field<std::string>(j, "output_dir");
    return c;
}

json to_json(const RunConfig& c) {
    json methods = json::array(), metrics = json::array(), classifiers = json::array();
    for (auto m : c.methods) methods.push_back(std::string(to_string(m)));
    for (auto m : c.grid.tfs_metrics) metrics.push_back(std::string(to_string(m)));
    for (auto k : c.classifiers) classifiers.push_back(std::string(to_string(k)));
    json square = json::array();
    for (bool b : c.grid.tfs_square) square.push_back(b);
    return {{"dataset", c.dataset},
            {"label_column", c.label_column ? json(*c.label_column) : json(nullptr)},
            {"provided_test", c.provided_test ? json(*c.provided_test) : json(nullptr)},
            {"test_fraction", c.test_fraction},
            {"methods", methods},
            {"grid",
             {{"inffs", {{"alpha", c.grid.inffs_alpha}, {"theta", c.grid.inffs_theta}}},
              {"tfs", {{"metrics", metrics}, {"square", square}, {"alpha", c.grid.tfs_alpha}}}}},
            {"cardinalities", c.cardinalities},
            {"classifiers", classifiers},
            {"cv_k", c.cv_k},
            {"seed", c.seed},
            {"ttest_repetitions", c.ttest_repetitions},
            {"output_dir", c.output_dir}};
}

ClassifierSpec classifier_spec(ClassifierKind kind, std::uint64_t seed) {
    ClassifierSpec s;
    s.kind = kind;
    s.seed = seed;
    return s;
}

namespace {

// Re-expresses the labels of both matrices over the union of their classes.
void align_classes(FeatureMatrix& a, FeatureMatrix& b) {
    if (a.class_names == b.class_names) return;
    std::set<std::string> names(a.class_names.begin(), a.class_names.end());
    names.insert(b.class_names.begin(), b.class_names.end());
    std::vector<std::string> merged(names.begin(), names.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < merged.size(); ++i) index[merged[i]] = static_cast<int>(i);
    for (FeatureMatrix* m : {&a, &b}) {
        for (auto& l : *m->labels) l = index.at(m->class_names[l]);
        m->class_names = merged;
    }
}

FeatureMatrix concat_rows(const FeatureMatrix& a, const FeatureMatrix& b) {
    FeatureMatrix out = a;
    out.values = Matrix(a.samples() + b.samples(), a.features());
    for (std::size_t r = 0; r < a.samples(); ++r) std::copy_n(a.values.row(r).begin(), a.features(), out.values.row(r).begin());
    for (std::size_t r = 0; r < b.samples(); ++r)
        std::copy_n(b.values.row(r).begin(), b.features(), out.values.row(a.samples() + r).begin());
    out.labels->insert(out.labels->end(), b.labels->begin(), b.labels->end());
    return out;
}

json metrics_json(std::span<const int> y, std::span<const int> pred) {
    const auto f1 = f1_scores(y, pred);
    const auto m = mcc_detailed(y, pred);
    return {{"balanced_accuracy", balanced_accuracy(y, pred)},
            {"f1_paper", f1.f1_paper},
            {"f1_macro", f1.f1_macro},
            {"mcc", m.value},
            {"mcc_degenerate", m.degenerate}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

EvaluationReport run_evaluation(const RunConfig& config, std::size_t threads) {
    FeatureMatrix data = load_csv(config.dataset, config.label_column);
    data.validate();
    FeatureMatrix train, test;
    if (config.provided_test) {
        train = data;
        test = load_csv(*config.provided_test, config.label_column);
        if (test.feature_names != train.feature_names)
            throw ValidationError("provided test set has different feature columns than the dataset");
        align_classes(train, test);
    } else {
        const auto split = stratified_split(data, config.test_fraction, config.seed);
        train = data.subset_rows(split.train_indices);
        test = data.subset_rows(split.test_indices);
    }
    const FeatureMatrix others[] = {test};
    auto pruned = prune_constant_features(train, others);
    train = std::move(pruned.train);
    test = std::move(pruned.others[0]);

    std::vector<ClassifierSpec> specs;
    for (auto k : config.classifiers) specs.push_back(classifier_spec(k, config.seed));

    GridSearchOptions options;
    options.cv_k = config.cv_k;
    options.seed = config.seed;
    options.threads = threads;
    options.grid = config.grid;

    json rows = json::array();
    std::string csv =
        "method,classifier,cardinality,status,balanced_accuracy,f1_paper,f1_macro,mcc,cv_score,chosen_config,error\n";
    // best config per (method, classifier, k), for the optional t-test
    std::map<std::tuple<Method, std::size_t, std::size_t>, SelectionConfig> chosen;

    for (Method method : config.methods) {
        std::vector<std::size_t> feasible;
        for (auto k : config.cardinalities)
            if (k <= train.features()) feasible.push_back(k);

        std::vector<std::vector<GridResult>> cells;
        std::string method_error;
        if (!feasible.empty()) {
            try {
                cells = grid_search_cells(train, method, specs, feasible, options);
            } catch (const std::exception& e) {
                method_error = e.what();
            }
        }

        std::map<std::string, FeatureRanking> ranking_cache;
        for (std::size_t ki = 0; ki < config.cardinalities.size(); ++ki) {
            const std::size_t k = config.cardinalities[ki];
            const auto feasible_pos = std::find(feasible.begin(), feasible.end(), k) - feasible.begin();
            for (std::size_t ci = 0; ci < specs.size(); ++ci) {
                json row{{"method", std::string(to_string(method))},
                         {"classifier", std::string(to_string(specs[ci].kind))},
                         {"cardinality", k}};
                std::string error;
                if (k > train.features()) {
                    error = "cardinality " + std::to_string(k) + " exceeds the " + std::to_string(train.features()) +
                            " features left after pruning";
                } else if (!method_error.empty()) {
                    error = method_error;
                } else {
                    try {
                        const GridResult& gr = cells[ci][static_cast<std::size_t>(feasible_pos)];
                        const std::string key = gr.best.describe();
                        auto it = ranking_cache.find(key);
                        if (it == ranking_cache.end())
                            it = ranking_cache.emplace(key, rank_with_constant_tail(train, gr.best)).first;
                        const auto pred = select_and_predict(train, test, it->second, k, specs[ci]);
                        row["metrics"] = metrics_json(*test.labels, pred);
                        row["chosen_config"] = tfs::to_json(gr.best);
                        row["cv_score"] = gr.cv_score;
                        chosen[{method, ci, k}] = gr.best;
                    } catch (const std::exception& e) {
                        error = e.what();
                    }
                }
                row["status"] = error.empty() ? "ok" : "failed";
                if (!error.empty()) row["error"] = error;

                std::ostringstream line;
                line << to_string(method) << ',' << to_string(specs[ci].kind) << ',' << k << ','
                     << (error.empty() ? "ok" : "failed") << ',';
                if (error.empty()) {
                    const auto& m = row["metrics"];
                    line << format_double(m["balanced_accuracy"].get<double>()) << ','
                         << format_double(m["f1_paper"].get<double>()) << ','
                         << format_double(m["f1_macro"].get<double>()) << ',' << format_double(m["mcc"].get<double>())
                         << ',' << format_double(row["cv_score"].get<double>()) << ','
                         << csv_field(chosen[{method, ci, k}].describe()) << ',';
                } else {
                    line << ",,,,,," << csv_field(error);
                }
                csv += line.str() + '\n';
                rows.push_back(std::move(row));
            }
        }
    }

    json ttests = json::array();
    if (config.ttest_repetitions >= 2 && config.methods.size() >= 2) {
        const FeatureMatrix pooled = concat_rows(train, test);
        const Method a = config.methods[0], b = config.methods[1];
        for (std::size_t ki = 0; ki < config.cardinalities.size(); ++ki) {
            const std::size_t k = config.cardinalities[ki];
            for (std::size_t ci = 0; ci < specs.size(); ++ci) {
                const auto ia = chosen.find({a, ci, k});
                const auto ib = chosen.find({b, ci, k});
                if (ia == chosen.end() || ib == chosen.end()) continue;
                json entry{{"a", tfs::to_json(ia->second)},
                           {"b", tfs::to_json(ib->second)},
                           {"classifier", std::string(to_string(specs[ci].kind))},
                           {"cardinality", k},
                           {"repetitions", config.ttest_repetitions}};
                try {
                    entry["result"] = tfs::to_json(paired_cv_ttest(make_pipeline(ia->second, specs[ci]),
                                                                   make_pipeline(ib->second, specs[ci]), pooled,
                                                                   config.ttest_repetitions, config.seed));
                    entry["status"] = "ok";
                } catch (const std::exception& e) {
                    entry["status"] = "failed";
                    entry["error"] = e.what();
                }
                ttests.push_back(std::move(entry));
            }
        }
    }

    json doc{{"tool", tool_info()},
             {"config", to_json(config)},
             {"seed", config.seed},
             {"dataset_summary",
              {{"train_samples", train.samples()},
               {"test_samples", test.samples()},
               {"features_after_pruning", train.features()},
               {"features", data.features()},
               {"classes", train.class_names}}},
             {"rows", rows},
             {"ttests", ttests}};
    return {std::move(doc), std::move(csv)};
}

// ------------------------------------------------------------------ CLI

namespace {

struct Globals {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t threads = 1;
    std::string output_dir = ".";
    bool output_dir_given = false;
};

std::size_t default_threads() {
    if (const char* env = std::getenv("TFS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

struct SelectionFlags {
    std::string method = "tfs";
    std::string metric = "pearson";
    bool square = false;
    double alpha = 0.0, theta = 0.0;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* theta_opt = nullptr;
};

void add_selection_flags(CLI::App* cmd, SelectionFlags& f, bool with_method) {
    if (with_method) cmd->add_option("--method", f.method, "tfs or inffs")->capture_default_str();
    cmd->add_option("--metric", f.metric, "pearson, spearman or energy")->capture_default_str();
    cmd->add_flag("--square", f.square, "square the correlation matrix (pearson/spearman only)");
    f.alpha_opt = cmd->add_option("--alpha", f.alpha, "energy weight in [0,1] (energy metric and inffs)");
    if (with_method) f.theta_opt = cmd->add_option("--theta", f.theta, "inffs regulariser in (0,1]");
}

SelectionConfig config_from_flags(const SelectionFlags& f, long long k) {
    SelectionConfig c;
    c.method = parse_method(f.method);
    if (c.method == Method::tfs) {
        c.metric = parse_metric(f.metric);
    } else if (f.metric != "pearson" && f.metric != "energy") {
        throw ValidationError("--metric does not apply to inffs (its adjacency is the energy metric)");
    }
    c.squared = f.square;
    if (f.alpha_opt && f.alpha_opt->count()) c.alpha = f.alpha;
    if (f.theta_opt && f.theta_opt->count()) c.theta = f.theta;
    else if (c.method == Method::inffs) c.theta = 0.9;
    c.cardinality = positive(k, "--k");
    c.validate();
    return c;
}

struct Prepared {
    FeatureMatrix data;
    std::vector<std::size_t> kept;
};

Prepared load_features(const std::string& input, const std::string& label_col) {
    Prepared p;
    p.data = load_csv(input, label_col.empty() ? std::nullopt : std::optional<std::string>(label_col));
    p.data.validate();
    p.kept = non_constant_features(p.data.values);
    p.data = p.data.subset_columns(p.kept);
    return p;
}

std::string default_path(const Globals& g, const std::string& given, const char* name) {
    if (!given.empty()) return given;
    return (std::filesystem::path(g.output_dir) / name).string();
}

int cmd_select(const Globals& g, const SelectionFlags& f, long long k, const std::string& input,
               const std::string& label_col, const std::string& output, const std::string& dump_sim,
               const std::string& dump_graph, std::ostream& out) {
    const SelectionConfig config = config_from_flags(f, k);
    if (!dump_graph.empty() && config.method != Method::tfs)
        throw ValidationError("--dump-graph needs --method tfs");
    const auto prep = load_features(input, label_col);
    const FeatureMatrix& x = prep.data;
    if (config.cardinality > x.features())
        throw ValidationError("--k " + std::to_string(config.cardinality) + " exceeds the " +
                              std::to_string(x.features()) + " non-constant features");
    if (config.method == Method::tfs && x.features() < 4)
        throw ValidationError("tfs needs at least 4 non-constant features");

    const SimilarityMatrix sim = config.method == Method::tfs
                                     ? similarity_matrix(x, config.metric, config.squared, config.alpha)
                                     : energy_matrix(x, *config.alpha);
    if (!dump_sim.empty()) write_similarity_csv(sim, x.feature_names, dump_sim);

    FeatureRanking ranking;
    if (config.method == Method::tfs) {
        TmfgGraph graph;
        ranking = tfs_rank_from_similarity(sim, &graph);
        if (!dump_graph.empty()) {
            json gj = tfs::to_json(graph);
            gj["features"] = prep.kept;
            gj["feature_names"] = x.feature_names;
            gj["tool"] = tool_info();
            gj["seed"] = g.seed;
            write_text_file(dump_graph, canonical_json(gj));
        }
    } else {
        ranking = inffs_score_from_adjacency(sim.values, *config.theta);
    }

    json order = json::array(), names = json::array(), full = json::array();
    for (std::size_t i = 0; i < ranking.order.size(); ++i) {
        const std::size_t original = prep.kept[ranking.order[i]];
        full.push_back(original);
        if (i < config.cardinality) {
            order.push_back(original);
            names.push_back(x.feature_names[ranking.order[i]]);
        }
    }
    json scores = json::object();
    for (std::size_t i = 0; i < prep.kept.size(); ++i) scores[x.feature_names[i]] = ranking.scores[i];

    json cfg = tfs::to_json(config);
    cfg["input"] = input;
    cfg["label_column"] = label_col.empty() ? json(nullptr) : json(label_col);
    const json doc{{"tool", tool_info()},
                   {"config", cfg},
                   {"seed", g.seed},
                   {"method", std::string(to_string(config.method))},
                   {"order", order},
                   {"selected_names", names},
                   {"full_order", full},
                   {"scores", scores},
                   {"tie_rule", ranking.tie_rule}};
    const std::string path = default_path(g, output, "ranking.json");
    write_text_file(path, canonical_json(doc));
    out << "selected " << order.size() << " features -> " << path << '\n';
    return 0;
}

int cmd_build_graph(const Globals& g, const SelectionFlags& f, const std::string& input, const std::string& label_col,
                    const std::string& output, std::ostream& out) {
    SelectionConfig config = config_from_flags(f, 1);
    const auto prep = load_features(input, label_col);
    if (prep.data.features() < 4) throw ValidationError("a TMFG needs at least 4 non-constant features");
    const auto sim = similarity_matrix(prep.data, config.metric, config.squared, config.alpha);
    const auto graph = build_tmfg(sim);
    json gj = tfs::to_json(graph);
    gj["features"] = prep.kept;
    gj["feature_names"] = prep.data.feature_names;
    gj["tool"] = tool_info();
    gj["seed"] = g.seed;
    json cfg = tfs::to_json(config);
    cfg.erase("k");
    cfg["input"] = input;
    cfg["label_column"] = label_col.empty() ? json(nullptr) : json(label_col);
    gj["config"] = cfg;
    const std::string path = default_path(g, output, "graph.json");
    write_text_file(path, canonical_json(gj));
    out << "graph with " << graph.n << " vertices and " << graph.edge_count() << " edges -> " << path << '\n';
    return 0;
}

int cmd_validate(const std::string& input, const std::string& label_col, double alpha, std::ostream& out) {
    const auto prep = load_features(input, label_col);
    const std::size_t n = prep.data.features();
    if (n < 4) throw ValidationError("a TMFG needs at least 4 non-constant features, found " + std::to_string(n));
    out << "features: " << n << '\n';
    bool all_ok = true;
    auto verdict = [&](bool ok) {
        all_ok = all_ok && ok;
        return ok ? "PASS" : "FAIL";
    };
    for (Metric m : {Metric::pearson, Metric::spearman, Metric::energy}) {
        const auto sim = m == Metric::energy ? energy_matrix(prep.data, alpha) : similarity_matrix(prep.data, m, false, {});
        const auto graph = build_tmfg(sim);
        out << '[' << to_string(m) << "]\n";
        out << "  edges = 3n-6: " << verdict(graph.edge_count() == 3 * n - 6) << " (" << graph.edge_count() << ")\n";
        out << "  connected: " << verdict(is_connected(graph)) << '\n';
        out << "  chordal: " << verdict(is_chordal(graph)) << '\n';
        out << "  cliques = n-3: " << verdict(graph.cliques.size() == n - 3) << '\n';
        out << "  separators = n-4: " << verdict(graph.separators.size() == n - 4) << '\n';
        std::map<int, int> hist;
        for (int d : degree_centrality(graph)) ++hist[d];
        out << "  degree histogram: {";
        bool first = true;
        for (auto [d, c] : hist) {
            out << (first ? "" : ", ") << d << ':' << c;
            first = false;
        }
        out << "}\n";
    }
    return all_ok ? 0 : 1;
}

struct PipelineSpec {
    SelectionConfig selection;
    ClassifierKind classifier;
    json raw;
};

PipelineSpec load_pipeline_spec(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw IoError("cannot parse '" + path + "': " + e.what());
    }
    PipelineSpec spec{selection_config_from_json(j),
                      parse_classifier(j.contains("classifier") ? j["classifier"].get<std::string>() : "knn"), j};
    return spec;
}

int cmd_ttest(const Globals& g, const std::string& a_path, const std::string& b_path, long long reps,
              const std::string& input, const std::string& label_col, const std::string& output, std::ostream& out) {
    const auto a = load_pipeline_spec(a_path);
    const auto b = load_pipeline_spec(b_path);
    const std::size_t r = positive(reps, "--reps");
    if (r < 2) throw ValidationError("--reps must be at least 2");
    if (label_col.empty()) throw ValidationError("ttest needs --label-col");
    FeatureMatrix data = load_csv(input, label_col);
    data.validate();

    const auto result = paired_cv_ttest(make_pipeline(a.selection, classifier_spec(a.classifier, g.seed)),
                                        make_pipeline(b.selection, classifier_spec(b.classifier, g.seed)), data, r,
                                        g.seed);
    json cfg{{"a", a.raw}, {"b", b.raw}, {"repetitions", r}, {"input", input}, {"label_column", label_col}};
    const json doc{{"tool", tool_info()}, {"config", cfg}, {"seed", g.seed}, {"result", tfs::to_json(result)}};
    const std::string path = default_path(g, output, "ttest.json");
    write_text_file(path, canonical_json(doc));
    out << "t = " << format_double(result.t_statistic) << ", df = " << result.degrees_of_freedom
        << ", p = " << format_double(result.p_value) << " (" << to_string(result.flag) << ") -> " << path << '\n';
    return 0;
}

int cmd_evaluate(const Globals& g, const std::string& config_path, const std::string& provided, std::ostream& out) {
    json j;
    try {
        j = json::parse(read_text_file(config_path));
    } catch (const json::parse_error& e) {
        throw ValidationError("cannot parse '" + config_path + "': " + e.what());
    }
    RunConfig config = run_config_from_json(j);
    if (g.seed_given) config.seed = g.seed;
    if (g.output_dir_given) config.output_dir = g.output_dir;
    if (!provided.empty()) config.provided_test = provided;

    const auto report = run_evaluation(config, g.threads);
    const auto dir = std::filesystem::path(config.output_dir);
    write_text_file((dir / "report.json").string(), canonical_json(report.document));
    write_text_file((dir / "report.csv").string(), report.csv);
    std::size_t failed = 0;
    for (const auto& row : report.document["rows"]) failed += row["status"] == "failed";
    out << report.document["rows"].size() << " rows (" << failed << " failed) -> " << (dir / "report.json").string()
        << '\n';
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topological feature selection toolkit", "tfs"};
    app.require_subcommand(1);
    // subcommands inherit this, so global flags may follow the subcommand
    app.fallthrough();
    Globals g;
    g.threads = default_threads();
    auto* seed_opt = app.add_option("--seed", g.seed, "random seed (default 0)");
    app.add_option("--threads", g.threads, "worker threads for grid search (env TFS_THREADS)");
    auto* outdir_opt = app.add_option("--output-dir", g.output_dir, "directory for emitted files");
    app.set_version_flag("--version", std::string(kToolVersion));

    SelectionFlags sel_flags, graph_flags;
    long long k = 0, reps = 15;
    std::string input, label_col, output, dump_sim, dump_graph, a_path, b_path, config_path, provided;
    double validate_alpha = 0.5;

    auto* select = app.add_subcommand("select", "rank features and write the top-k selection");
    add_selection_flags(select, sel_flags, true);
    select->add_option("--k", k, "number of features to select")->required();
    select->add_option("--input", input, "input CSV")->required();
    select->add_option("--label-col", label_col, "label column to exclude from the features");
    select->add_option("--output", output, "ranking JSON (default <output-dir>/ranking.json)");
    select->add_option("--dump-similarity", dump_sim, "write the similarity matrix as CSV");
    select->add_option("--dump-graph", dump_graph, "write the TMFG as JSON (tfs only)");

    auto* graph = app.add_subcommand("build-graph", "build the TMFG of a dataset and write it as JSON");
    add_selection_flags(graph, graph_flags, false);
    graph->add_option("--input", input, "input CSV")->required();
    graph->add_option("--label-col", label_col, "label column to exclude");
    graph->add_option("--output", output, "graph JSON (default <output-dir>/graph.json)");

    auto* validate = app.add_subcommand("validate", "check TMFG structural invariants under every metric");
    validate->add_option("--input", input, "input CSV")->required();
    validate->add_option("--label-col", label_col, "label column to exclude");
    validate->add_option("--alpha", validate_alpha, "alpha for the energy metric")->capture_default_str();

    auto* evaluate = app.add_subcommand("evaluate", "run the full benchmark pipeline from a JSON config");
    evaluate->add_option("--config", config_path, "run config JSON")->required();
    evaluate->add_option("--use-provided-split", provided, "CSV used as the test set instead of a split");

    auto* ttest = app.add_subcommand("ttest", "paired R x 2 cross-validated t-test between two pipelines");
    ttest->add_option("--a", a_path, "pipeline A JSON")->required();
    ttest->add_option("--b", b_path, "pipeline B JSON")->required();
    ttest->add_option("--reps", reps, "repetitions R (2R differences)")->capture_default_str();
    ttest->add_option("--input", input, "dataset CSV")->required();
    ttest->add_option("--label-col", label_col, "label column")->required();
    ttest->add_option("--output", output, "result JSON (default <output-dir>/ttest.json)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    g.seed_given = seed_opt->count() > 0;
    g.output_dir_given = outdir_opt->count() > 0;
    if (g.threads == 0) g.threads = 1;

    try {
        if (*select) return cmd_select(g, sel_flags, k, input, label_col, output, dump_sim, dump_graph, out);
        if (*graph) return cmd_build_graph(g, graph_flags, input, label_col, output, out);
        if (*validate) return cmd_validate(input, label_col, validate_alpha, out);
        if (*evaluate) return cmd_evaluate(g, config_path, provided, out);
        if (*ttest) return cmd_ttest(g, a_path, b_path, reps, input, label_col, output, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace tfs::cli
