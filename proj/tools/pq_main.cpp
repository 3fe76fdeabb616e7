// pq — partition-quotient metric toolkit command line.
//
// Subcommands: generate, analyze, quotient, verify, pipeline.
// Exit codes: 0 success; 2 bad generator params; 3 metric-validation or input
// failure (analyze); 4 partition/point-count mismatch (quotient); 5 property
// violations (verify); 6 non-empty residual congestion (pipeline); 1 other.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pq/congestion.hpp"
#include "pq/continua.hpp"
#include "pq/io.hpp"
#include "pq/metric_space.hpp"
#include "pq/quotient.hpp"

namespace {

using pq::io::json;

struct ScaleFlags {
    double r = 0.0;
    double R = 0.0;
    double delta = 0.0;
    double kappa_thin = 1.8;
    double coarse = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--r", r, "inner probe radius (default 3*delta)");
        cmd->add_option("--R", R, "locality bound for connectivity (default unbounded)");
        cmd->add_option("--delta", delta,
                        "connectivity resolution (default 2*max nearest-neighbor distance)");
        cmd->add_option("--kappa-thin", kappa_thin,
                        "own-component thinness gate multiplier; <=0 disables");
        cmd->add_option("--coarse", coarse,
                        "foreign structure must persist at coarse*delta; <=1 disables");
    }

    pq::ScalePolicy policy(const pq::MetricSpace& space) const {
        pq::ScalePolicy p;
        p.kappa_thin = kappa_thin;
        p.coarse = coarse;
        const double d = delta > 0.0 ? delta : 2.0 * space.max_nn_distance();
        if (delta > 0.0) p.explicit_delta = delta;
        if (r > 0.0) p.r_over_delta = r / d;
        if (R > 0.0) p.R_over_delta = R / d;
        return p;
    }
};

pq::GeneratedCorpus load_input(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        pq::GeneratedCorpus c;
        c.space = pq::io::load_distance_csv(path);
        c.name = path;
        return c;
    }
    return pq::io::load_point_cloud(path);
}

json scored_detection(const pq::GeneratedCorpus& corpus, const pq::CongestionResult& result) {
    json j;
    j["detected"] = result.points.indices;
    j["count"] = result.points.size();
    j["delta_graph_connected"] = result.delta_graph_connected;
    j["delta_components"] = result.delta_component_count;
    if (!result.warning.empty()) j["warning"] = result.warning;
    if (!corpus.truth_congested.empty()) {
        int tp = 0;
        for (int i : result.points.indices)
            if (corpus.truth_congested.contains(i)) ++tp;
        j["truth_size"] = corpus.truth_congested.size();
        j["precision"] =
            result.points.empty() ? 0.0 : static_cast<double>(tp) / result.points.size();
        j["recall"] = static_cast<double>(tp) / corpus.truth_congested.size();
    }
    return j;
}

int cmd_generate(const std::string& name, int n, const std::string& output,
                 const std::vector<std::string>& kv) {
    std::map<std::string, double> params;
    for (const auto& s : kv) {
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::cerr << "bad --param (want key=value): " << s << "\n";
            return 2;
        }
        params[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    }
    try {
        auto corpus = pq::generate(name, n, params);
        pq::io::save_point_cloud(output, corpus);
        std::cerr << "wrote " << output << " (" << corpus.space.n << " points, "
                  << corpus.truth_congested.size() << " truth-congested)\n";
        return 0;
    } catch (const pq::UnknownGeneratorError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const pq::BudgetError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

int cmd_analyze(const std::string& input, const std::string& output, const ScaleFlags& scales,
                const std::string& multiscale, bool check_triangle) {
    pq::GeneratedCorpus corpus;
    try {
        corpus = load_input(input);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    auto validation = pq::validate_metric(corpus.space, check_triangle);
    if (!validation.ok()) {
        std::cerr << "metric validation failed with " << validation.issues.size()
                  << " issue(s)\n";
        pq::io::save_json(output, pq::io::to_json(validation));
        return 3;
    }
    auto policy = scales.policy(corpus.space);
    json report;
    report["input"] = input;
    auto params = policy.resolve(corpus.space);
    report["params"] = pq::io::to_json(params);
    report["analysis"] = scored_detection(corpus, pq::congestion_set(corpus.space, params));
    if (!multiscale.empty()) {
        json sections = json::array();
        std::stringstream ss(multiscale);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            pq::ScalePolicy p = policy;
            p.explicit_delta = std::stod(tok);
            auto sp = p.resolve(corpus.space);
            json section;
            section["params"] = pq::io::to_json(sp);
            section["analysis"] = scored_detection(corpus, pq::congestion_set(corpus.space, sp));
            sections.push_back(section);
        }
        report["multiscale"] = sections;  // per-scale sections, no aggregation
    }
    pq::io::save_json(output, report);
    return 0;
}

int cmd_quotient(const std::string& input, const std::string& output,
                 const std::string& partition_file, const std::string& f_subset,
                 double delta_f, double tau_merge, bool emit_witnesses) {
    auto corpus = load_input(input);
    const int n = corpus.space.n;
    pq::Partition partition;
    try {
        if (!partition_file.empty()) {
            partition = pq::io::load_partition(partition_file, n);
        } else if (!f_subset.empty()) {
            auto F = pq::io::load_subset(f_subset, n);
            const double df =
                delta_f > 0.0 ? delta_f : 2.0 * corpus.space.max_nn_distance();
            partition = pq::canonical_partition(corpus.space, F, df).partition;
        } else {
            partition = pq::Partition::singletons(n);
        }
    } catch (const pq::io::MalformedInputError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    }
    auto qpm = pq::delta_p(corpus.space, partition);
    auto qspace = pq::quotient_space(qpm, tau_merge);
    std::vector<pq::StringWitness> witnesses;
    const std::vector<pq::StringWitness>* wptr = nullptr;
    if (emit_witnesses) {
        auto graph = pq::class_graph(corpus.space, partition);
        for (int a = 0; a < qpm.K(); ++a)
            for (int b = 0; b < qpm.K(); ++b)
                if (a != b) witnesses.push_back(pq::string_witness(graph, qpm, a, b));
        wptr = &witnesses;
    }
    pq::io::save_quotient(output, qspace, tau_merge, "dijkstra-dense", wptr);
    std::cerr << "wrote " << output << ".quotient.json and " << output << ".nabla.csv\n";
    return 0;
}

int cmd_verify(const std::string& input, const std::string& output,
               const std::string& f_subset, const ScaleFlags& scales, bool use_oracle,
               bool check_triangle) {
    auto corpus = load_input(input);
    auto validation = pq::validate_metric(corpus.space, check_triangle);
    json report;
    report["metric_validation"] = pq::io::to_json(validation);
    bool all_ok = validation.ok();

    pq::SubsetRef F;
    if (!f_subset.empty())
        F = pq::io::load_subset(f_subset, corpus.space.n);
    else {
        auto params = scales.policy(corpus.space).resolve(corpus.space);
        F = pq::congestion_set(corpus.space, params).points;
    }
    const double df = 2.0 * corpus.space.max_nn_distance();
    auto decomp = pq::canonical_partition(corpus.space, F, df);
    auto qpm = pq::delta_p(corpus.space, decomp.partition);

    auto add = [&](const pq::PropertyReport& r) {
        report["checks"][r.name] = pq::io::to_json(r);
        all_ok = all_ok && r.ok();
    };
    add(pq::verify_pseudometric(corpus.space, qpm));
    add(pq::lower_bound_check(corpus.space, qpm, F));
    add(pq::local_isometry_check(corpus.space, qpm, F));
    if (!F.empty() && corpus.space.triangle_certified)
        add(pq::f_restricted_delta(corpus.space, qpm, F).equality);
    auto qspace = pq::quotient_space(qpm, 0.0);
    std::vector<int> f_classes;
    for (int k = 0; k < qspace.Q.K(); ++k)
        if (!F.empty() && F.contains(qspace.Q.classes[k].front())) f_classes.push_back(k);
    add(pq::separation_check(qspace, f_classes));
    if (use_oracle) {
        if (qpm.K() > 9) {
            report["oracle"] = {{"notice", "class count exceeds the enumeration budget (9); "
                                           "oracle comparison skipped"}};
        } else {
            auto oracle = pq::delta_p_oracle(corpus.space, decomp.partition);
            auto dense = qpm.dense();
            const double tol = 1e-12 * qpm.diameter;
            long bad = 0;
            for (std::size_t i = 0; i < dense.size(); ++i)
                if (std::abs(dense[i] - oracle[i]) > tol) ++bad;
            report["oracle"] = {{"mismatches", bad}, {"tolerance", tol}};
            all_ok = all_ok && bad == 0;
        }
    }
    report["ok"] = all_ok;
    if (!output.empty()) pq::io::save_json(output, report);
    if (!all_ok) {
        std::cerr << "verification found violations\n";
        return 5;
    }
    std::cerr << "all checks passed\n";
    return 0;
}

int cmd_pipeline(const std::string& input, const std::string& output, const ScaleFlags& scales,
                 double delta_f, double tau_merge, double collar,
                 double exclude_truth_fraction, bool expect_residual) {
    auto corpus = load_input(input);
    pq::PipelineConfig config;
    config.scales = scales.policy(corpus.space);
    config.delta_f = delta_f;
    config.tau_merge = tau_merge;
    config.collar = collar;

    if (exclude_truth_fraction > 0.0) {
        if (corpus.truth_congested.empty()) {
            std::cerr << "--exclude-truth-fraction needs truth labels in the input\n";
            return 1;
        }
        // drop the lowest-coordinate fraction of the truth locus from F
        auto truth = corpus.truth_congested.indices;
        std::sort(truth.begin(), truth.end(), [&](int a, int b) {
            if (corpus.space.coords.empty()) return a < b;
            auto& pa = corpus.space.coords[a];
            auto& pb = corpus.space.coords[b];
            return pa[1] != pb[1] ? pa[1] < pb[1] : a < b;
        });
        const auto cut = static_cast<std::size_t>(exclude_truth_fraction * truth.size());
        config.exclude_from_f =
            pq::SubsetRef::of(std::vector<int>(truth.begin(), truth.begin() + cut));
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto report = pq::peano_pipeline(corpus.space, config);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    pq::io::save_pipeline_report(output, report);
    std::cerr << "pipeline: " << ms << " ms, detected " << report.primary.points.size()
              << ", quotient classes " << report.qspace.Q.K() << ", residual "
              << report.residual.size() << "\n";
    if (!report.warning.empty()) std::cerr << "warning: " << report.warning << "\n";

    const bool ok = report.residual_empty() && report.checks_ok();
    if (expect_residual) {
        if (report.residual_empty()) {
            std::cerr << "--expect-residual: residual congestion is empty\n";
            return 1;
        }
        return 6;
    }
    if (!report.residual_empty()) return 6;
    return ok ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partition-quotient metric toolkit"};
    app.set_config("--config");
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "sample a classical continuum");
    std::string gen_name, gen_output;
    int gen_n = 1000;
    std::vector<std::string> gen_params;
    gen->add_option("--name", gen_name, "generator id")->required();
    gen->add_option("--n", gen_n, "point budget");
    gen->add_option("--output", gen_output, "output JSON path (default <name>_n<count>.json)");
    gen->add_option("--param", gen_params, "generator parameter key=value");

    // analyze
    auto* ana = app.add_subcommand("analyze", "detect congestion points");
    std::string ana_in, ana_out = "analysis.json", ana_multi;
    bool ana_tri = false;
    ScaleFlags ana_scales;
    ana->add_option("--input", ana_in)->required();
    ana->add_option("--output", ana_out);
    ana->add_option("--multiscale", ana_multi, "comma-separated delta list");
    ana->add_flag("--check-triangle", ana_tri);
    ana_scales.attach(ana);

    // quotient
    auto* quo = app.add_subcommand("quotient", "compute the quotient metric space");
    std::string quo_in, quo_out = "quotient", quo_partition, quo_f;
    double quo_delta_f = 0.0, quo_tau = 0.0;
    bool quo_wit = false;
    quo->add_option("--input", quo_in)->required();
    quo->add_option("--output", quo_out, "output prefix");
    quo->add_option("--partition", quo_partition, "partition JSON (class_of array)");
    quo->add_option("--f-subset", quo_f, "F subset JSON (indices array)");
    quo->add_option("--delta-f", quo_delta_f, "component resolution on F");
    quo->add_option("--tau-merge", quo_tau, "zero-delta merge slack");
    quo->add_flag("--emit-witnesses", quo_wit);

    // verify
    auto* ver = app.add_subcommand("verify", "run the property checks");
    std::string ver_in, ver_out, ver_f;
    bool ver_oracle = false, ver_tri = false;
    ScaleFlags ver_scales;
    ver->add_option("--input", ver_in)->required();
    ver->add_option("--output", ver_out, "optional report path");
    ver->add_option("--f-subset", ver_f, "explicit F (default: detected congestion)");
    ver->add_flag("--oracle", ver_oracle, "compare against the brute-force oracle");
    ver->add_flag("--check-triangle", ver_tri);
    ver_scales.attach(ver);

    // pipeline
    auto* pip = app.add_subcommand("pipeline", "end-to-end quotient pipeline");
    std::string pip_in, pip_out = "pipeline.json";
    double pip_delta_f = 0.0, pip_tau = 0.0, pip_collar = 0.0, pip_exclude = 0.0;
    bool pip_expect = false;
    ScaleFlags pip_scales;
    pip->add_option("--input", pip_in)->required();
    pip->add_option("--output", pip_out);
    pip->add_option("--delta-f", pip_delta_f);
    pip->add_option("--tau-merge", pip_tau);
    pip->add_option("--collar", pip_collar, "thicken F by this radius");
    pip->add_option("--exclude-truth-fraction", pip_exclude,
                    "drop this fraction of the truth locus from F");
    pip->add_flag("--expect-residual", pip_expect,
                  "assert that residual congestion is non-empty");
    pip_scales.attach(pip);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (gen_output.empty())
                gen_output = gen_name + "_n" + std::to_string(gen_n) + ".json";
            return cmd_generate(gen_name, gen_n, gen_output, gen_params);
        }
        if (ana->parsed()) return cmd_analyze(ana_in, ana_out, ana_scales, ana_multi, ana_tri);
        if (quo->parsed())
            return cmd_quotient(quo_in, quo_out, quo_partition, quo_f, quo_delta_f, quo_tau,
                                quo_wit);
        if (ver->parsed())
            return cmd_verify(ver_in, ver_out, ver_f, ver_scales, ver_oracle, ver_tri);
        if (pip->parsed())
            return cmd_pipeline(pip_in, pip_out, pip_scales, pip_delta_f, pip_tau, pip_collar,
                                pip_exclude, pip_expect);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
