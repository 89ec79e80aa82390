#include "tendeval/cli.hpp"

#include "tendeval/alignment.hpp"
#include "tendeval/consistency.hpp"
#include "tendeval/dataset.hpp"
#include "tendeval/error.hpp"
#include "tendeval/mds.hpp"
#include "tendeval/report.hpp"
#include "tendeval/simulation.hpp"
#include "tendeval/svg.hpp"
#include "tendeval/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace tendeval {

namespace {

using ojson = nlohmann::ordered_json;

// Reads a JSON object as CLI11 config items. Top-level scalar keys apply to
// the active subcommand; nested objects name a subcommand explicitly.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override
    {
        return "{}";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        ojson j;
        try {
            j = ojson::parse(input);
        } catch (const nlohmann::json::parse_error& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object())
            throw CLI::ConversionError("config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [name, inner] : value.items())
                    items.push_back(item({key}, name, inner));
            } else if (!subcommand_.empty()) {
                items.push_back(item({subcommand_}, key, value));
            } else {
                items.push_back(item({}, key, value));
            }
        }
        return items;
    }

private:
    static std::string scalar(const ojson& v)
    {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_boolean())
            return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& name,
                                const ojson& value)
    {
        CLI::ConfigItem ci;
        ci.parents = std::move(parents);
        ci.name = name;
        if (value.is_array()) {
            for (const auto& v : value)
                ci.inputs.push_back(scalar(v));
        } else {
            ci.inputs.push_back(scalar(value));
        }
        return ci;
    }

    std::string subcommand_;
};

struct LabelOptions {
    std::vector<int> labels;
    bool infer = false;

    std::optional<LabelDomain> domain() const
    {
        if (labels.empty())
            return std::nullopt;
        return LabelDomain(labels);
    }
};

void add_label_options(CLI::App* sub, LabelOptions& o)
{
    auto* labels = sub->add_option("--labels", o.labels, "Label domain, comma separated")
                       ->delimiter(',');
    auto* infer = sub->add_flag("--infer-labels", o.infer,
                                "Infer the label domain from the data (default without --labels)");
    labels->excludes(infer);
}

AnnotationSet with_domain(const AnnotationSet& ann, const LabelDomain& domain)
{
    return AnnotationSet::from_records(ann.records(), domain);
}

LabelDomain union_domain(const AnnotationSet& a, const AnnotationSet& b)
{
    auto labels = a.domain().labels();
    labels.insert(labels.end(), b.domain().labels().begin(), b.domain().labels().end());
    return LabelDomain(std::move(labels));
}

/// Loads two annotation-style files against a common label domain.
std::pair<AnnotationSet, AnnotationSet> load_pair(const std::string& first,
                                                  const std::string& second,
                                                  const LabelOptions& labels)
{
    auto a = load_annotations(first, labels.domain());
    auto b = load_annotations(second, labels.domain());
    if (!labels.domain()) {
        const auto domain = union_domain(a, b);
        a = with_domain(a, domain);
        b = with_domain(b, domain);
    }
    return {std::move(a), std::move(b)};
}

ojson excluded_json(const std::vector<ExcludedPair>& excluded,
                    const std::vector<std::string>& annotators)
{
    ojson out = ojson::array();
    for (const auto& e : excluded)
        out.push_back({{"a", annotators[e.k]}, {"b", annotators[e.l]}, {"reason", e.reason}});
    return out;
}

void note_degenerate(EvalReport& report, const ConsistencyMatrix& m, const std::string& name)
{
    for (const auto& [k, l] : m.degenerate_pairs)
        report.warnings.push_back(name + ": kappa(" + m.annotators[k] + ", " + m.annotators[l] +
                                  ") used the constant-rater rule");
}

ojson overlaps_json(const ConsistencyMatrix& m)
{
    ojson rows = ojson::array();
    for (std::size_t k = 0; k < m.size(); ++k) {
        ojson row = ojson::array();
        for (std::size_t l = 0; l < m.size(); ++l)
            row.push_back(m.overlap(k, l));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    out << text;
}

Exec exec_of(bool serial) { return serial ? Exec::serial : Exec::parallel; }

struct Embedded {
    Embedding2D embedding;
    std::size_t imputed = 0;
};

Embedded embed(const SimilarityMatrix& s)
{
    const auto d = to_dissimilarity(s);
    Embedded out{classical_mds(d), d.imputed_pair_count()};
    if (out.imputed > 0)
        out.embedding.warnings.push_back(std::to_string(out.imputed) +
                                         " missing pairs imputed with the mean dissimilarity");
    return out;
}

// ---------------------------------------------------------------- dic

struct DicArgs {
    std::string annotations, predictions, out, heatmap, heatmap_pred;
    std::size_t tau = kDefaultMinOverlap;
    LabelOptions labels;
    bool serial = false;
};

int run_dic(const DicArgs& a, std::ostream& out, std::ostream& err)
{
    auto [ann, pred_all] = load_pair(a.annotations, a.predictions, a.labels);
    const std::size_t pred_total = pred_all.label_count();
    const auto pred = restrict_to(pred_all, ann);

    EvalReport report = make_report("dic");
    report.config = {{"annotations", a.annotations},
                     {"predictions", a.predictions},
                     {"min_overlap", a.tau},
                     {"label_domain", ann.domain().labels()},
                     {"exec", a.serial ? "serial" : "parallel"}};
    if (pred.label_count() < pred_total)
        report.warnings.push_back(std::to_string(pred_total - pred.label_count()) +
                                  " prediction records have no matching annotation and were "
                                  "ignored");
    if (pred.label_count() < ann.label_count())
        report.warnings.push_back(std::to_string(ann.label_count() - pred.label_count()) +
                                  " annotations have no matching prediction");

    const auto m_true = consistency_matrix(ann, a.tau, exec_of(a.serial));
    const auto m_pred = consistency_matrix(pred, a.tau, exec_of(a.serial));
    const auto result = dic(m_true, m_pred);

    report.annotators = ann.annotators();
    report.matrices["true"] = {"ground_truth_kappa", m_true.kappa};
    report.matrices["pred"] = {"predicted_kappa", m_pred.kappa};
    report.scores["dic"] = result.score;
    report.details["dic"] = {{"numerator", result.numerator},
                             {"denominator", result.denominator},
                             {"pairs_used", result.pairs_used},
                             {"tau", a.tau},
                             {"excluded_pairs", excluded_json(result.excluded_pairs,
                                                              ann.annotators())}};
    report.details["overlaps"] = overlaps_json(m_true);
    note_degenerate(report, m_true, "ground truth");
    note_degenerate(report, m_pred, "predictions");

    save_report(a.out, report);
    out << a.out << '\n';
    if (!a.heatmap.empty()) {
        write_text(a.heatmap, heatmap_svg(m_true.kappa, ann.annotators(),
                                          "Ground-truth consistency (Cohen's kappa)"));
        out << a.heatmap << '\n';
    }
    if (!a.heatmap_pred.empty()) {
        char title[96];
        std::snprintf(title, sizeof title, "Predicted consistency (DIC %.4f)", result.score);
        write_text(a.heatmap_pred, heatmap_svg(m_pred.kappa, ann.annotators(), title));
        out << a.heatmap_pred << '\n';
    }
    for (const auto& w : report.warnings)
        err << "warning: " << w << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- bae

struct BaeArgs {
    std::string annotations, features, attentions, importance, importance_ref, out, mds_svg;
    std::size_t tau = kDefaultMinOverlap;
    LabelOptions labels;
    bool normalize = false;
    bool serial = false;
    double cluster_threshold = kDefaultClusterThreshold;
};

ojson bae_json(const BaeResult& r, const std::vector<std::string>& annotators)
{
    return {{"level", r.level == BaeLevel::feature ? "feature" : "region"},
            {"numerator", r.numerator},
            {"denominator", r.denominator},
            {"pairs_used", r.pairs_used},
            {"normalized", r.normalized},
            {"excluded_pairs", excluded_json(r.excluded_pairs, annotators)}};
}

int run_bae(const BaeArgs& a, std::ostream& out, std::ostream& err)
{
    const auto ann = load_annotations(a.annotations, a.labels.domain());
    const auto exec = exec_of(a.serial);
    const auto m_true = consistency_matrix(ann, a.tau, exec);
    const auto s_true = to_similarity(m_true);

    EvalReport report = make_report("bae");
    report.config = {{"annotations", a.annotations},
                     {"features", a.features},
                     {"attentions", a.attentions.empty() ? ojson(nullptr) : ojson(a.attentions)},
                     {"min_overlap", a.tau},
                     {"normalize", a.normalize},
                     {"label_domain", ann.domain().labels()},
                     {"cos_aggregation", "mean of off-diagonal feature cosines"},
                     {"grad_aggregation", "mean per-key Pearson correlation"},
                     {"exec", a.serial ? "serial" : "parallel"}};
    report.annotators = ann.annotators();
    report.matrices["true"] = {to_string(s_true.kind), s_true.values};
    note_degenerate(report, m_true, "ground truth");

    const auto features = load_features(a.features);
    const auto s_feature = model_similarity(features, exec);
    const auto feature_result = bae(s_feature, s_true, a.normalize);
    report.matrices["feature"] = {to_string(s_feature.kind), s_feature.values};
    report.scores["bae_feature"] = feature_result.score;
    report.scores["cos"] = mean_pairwise_cosine(features);
    report.details["bae_feature"] = bae_json(feature_result, ann.annotators());

    if (!a.attentions.empty()) {
        const auto attentions = load_attentions(a.attentions);
        const auto s_region = model_similarity(attentions, exec);
        const auto region_result = bae(s_region, s_true, a.normalize);
        report.matrices["region"] = {to_string(s_region.kind), s_region.values};
        report.scores["bae_region"] = region_result.score;
        report.details["bae_region"] = bae_json(region_result, ann.annotators());
    }
    if (!a.importance.empty()) {
        if (a.importance_ref.empty())
            throw InputError("--importance requires --importance-ref");
        report.scores["grad"] = importance_correlation(load_features(a.importance),
                                                       load_features(a.importance_ref));
        report.config["importance"] = a.importance;
        report.config["importance_ref"] = a.importance_ref;
    }
    if (a.normalize)
        report.warnings.push_back("similarity matrices min-max rescaled before comparison");

    if (!a.mds_svg.empty()) {
        // Feature-level projection in the frame of the ground-truth projection.
        const auto truth = embed(s_true);
        auto model = embed(s_feature);
        const auto aligned = procrustes_align(truth.embedding.coords, model.embedding.coords);
        model.embedding.coords = aligned.aligned;
        const auto clusters = agreement_clusters(s_true, a.cluster_threshold);
        char title[96];
        std::snprintf(title, sizeof title, "Feature-level MDS (BAE %.4f, disparity %.4f)",
                      feature_result.score, aligned.disparity);
        write_text(a.mds_svg, scatter_svg(model.embedding, clusters, title));
        report.details["mds"] = {{"procrustes_disparity", aligned.disparity},
                                 {"stress_true", truth.embedding.stress},
                                 {"stress_feature", model.embedding.stress},
                                 {"cluster_threshold", a.cluster_threshold}};
        for (const auto& w : truth.embedding.warnings)
            report.warnings.push_back("mds (true): " + w);
        for (const auto& w : model.embedding.warnings)
            report.warnings.push_back("mds (feature): " + w);
    }

    save_report(a.out, report);
    out << a.out << '\n';
    if (!a.mds_svg.empty())
        out << a.mds_svg << '\n';
    for (const auto& w : report.warnings)
        err << "warning: " << w << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- traditional

struct TraditionalArgs {
    std::string annotations, predictions, out;
    LabelOptions labels;
};

int run_traditional(const TraditionalArgs& a, std::ostream& out, std::ostream& err)
{
    auto [ann, pred] = load_pair(a.annotations, a.predictions, a.labels);
    if (!ann.same_keys(pred))
        throw InputError("predictions and annotations have different (annotator, sample) keys");

    EvalReport report = make_report("traditional");
    report.config = {{"annotations", a.annotations},
                     {"predictions", a.predictions},
                     {"label_domain", ann.domain().labels()},
                     {"pcc_encoding", "labels as ordinal reals"}};
    report.annotators = ann.annotators();
    report.warnings.push_back("PCC treats labels as ordinal reals; it is meaningless for "
                              "nominal label domains");

    const auto acc = per_annotator_accuracy(ann, pred);
    ojson per = ojson::array();
    CompensatedSum acc_total, pcc_total;
    std::size_t pcc_count = 0;
    for (std::size_t k = 0; k < ann.annotator_count(); ++k) {
        std::vector<double> x, y;
        for (const auto& e : pred.entries(k))
            x.push_back(e.label);
        for (const auto& e : ann.entries(k))
            y.push_back(e.label);
        ojson row = {{"annotator", ann.annotators()[k]}, {"acc", acc[k]}};
        try {
            const double r = pearson(x, y);
            row["pcc"] = r;
            pcc_total.add(r);
            ++pcc_count;
        } catch (const std::exception& e) {
            row["pcc"] = nullptr;
            report.warnings.push_back("PCC undefined for annotator '" + ann.annotators()[k] +
                                      "': " + e.what());
        }
        acc_total.add(acc[k]);
        per.push_back(std::move(row));
    }

    // Fleiss over predictions: items are samples, raters are annotators.
    std::vector<std::vector<int>> counts(pred.samples().size(),
                                         std::vector<int>(pred.domain().size(), 0));
    for (std::size_t k = 0; k < pred.annotator_count(); ++k)
        for (const auto& e : pred.entries(k))
            ++counts[e.sample][*pred.domain().index_of(e.label)];
    std::vector<std::vector<int>> items;
    for (auto& row : counts) {
        int n = 0;
        for (int v : row)
            n += v;
        if (n >= 2)
            items.push_back(std::move(row));
    }
    const std::size_t skipped = counts.size() - items.size();
    if (skipped > 0)
        report.warnings.push_back(std::to_string(skipped) +
                                  " samples with fewer than 2 predictions skipped for Fleiss' kappa");
    if (items.empty())
        throw ComputeError("Fleiss' kappa: no sample has at least 2 predictions");

    report.scores["acc"] = acc_total.value() / static_cast<double>(acc.size());
    report.scores["fk"] = fleiss_kappa(items);
    if (pcc_count > 0)
        report.scores["pcc"] = pcc_total.value() / static_cast<double>(pcc_count);
    report.details["per_annotator"] = std::move(per);
    report.details["fleiss_items"] = items.size();
    report.details["pcc_annotators"] = pcc_count;

    save_report(a.out, report);
    out << a.out << '\n';
    for (const auto& w : report.warnings)
        err << "warning: " << w << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- comp

struct CompArgs {
    std::string annotations, pred_orig, pred_masked, pred_random, out;
    LabelOptions labels;
};

int run_comp(const CompArgs& a, std::ostream& out, std::ostream&)
{
    const auto domain = a.labels.domain();
    auto gold = load_annotations(a.annotations, domain);
    auto orig = load_annotations(a.pred_orig, domain);
    auto masked = load_annotations(a.pred_masked, domain);
    auto random = load_annotations(a.pred_random, domain);
    const auto r = comprehensiveness(gold, orig, masked, random);

    EvalReport report = make_report("comp");
    report.config = {{"annotations", a.annotations},
                     {"pred_orig", a.pred_orig},
                     {"pred_masked", a.pred_masked},
                     {"pred_random", a.pred_random}};
    report.annotators = gold.annotators();
    report.scores["comp"] = r.comp;
    report.scores["acc_original"] = r.acc_original;
    report.scores["acc_masked_topk"] = r.acc_masked_topk;
    report.scores["acc_masked_random"] = r.acc_masked_random;
    report.scores["comp_delta_vs_random"] = r.delta_vs_random;
    save_report(a.out, report);
    out << a.out << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- mds

struct MdsArgs {
    std::string matrix, which = "true", out, svg, align_to;
    double cluster_threshold = kDefaultClusterThreshold;
};

struct CoordsFile {
    std::vector<std::string> annotators;
    std::vector<Point2> coords;
};

CoordsFile load_coords(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    try {
        const auto j = ojson::parse(in);
        CoordsFile c;
        for (const auto& p : j.at("points")) {
            c.annotators.push_back(p.at("annotator").get<std::string>());
            c.coords.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": malformed coordinates file: " + e.what());
    }
}

int run_mds(const MdsArgs& a, std::ostream& out, std::ostream& err)
{
    const auto report = load_report(a.matrix);
    const auto it = report.matrices.find(a.which);
    if (it == report.matrices.end())
        throw InputError(a.matrix + ": report has no matrix '" + a.which + "'");

    SimilarityMatrix s{report.annotators, it->second.matrix, SimilarityKind::ground_truth_kappa};
    if (s.values.size() != s.annotators.size())
        throw InputError(a.matrix + ": matrix size does not match the annotator list");
    auto embedded = embed(s);
    auto& e = embedded.embedding;

    // Agreement clusters always come from the ground-truth kappas when present.
    const auto truth = report.matrices.find("true");
    const MaskedMatrix& cluster_source =
        truth != report.matrices.end() ? truth->second.matrix : s.values;
    const auto clusters = agreement_clusters(cluster_source, a.cluster_threshold);

    ojson coords;
    coords["schema_version"] = kReportSchemaVersion;
    coords["source"] = a.matrix;
    coords["which"] = a.which;
    coords["stress"] = e.stress;
    coords["eigenvalues"] = {e.eigenvalues[0], e.eigenvalues[1]};
    coords["cluster_threshold"] = a.cluster_threshold;
    coords["imputed_pairs"] = embedded.imputed;

    if (!a.align_to.empty()) {
        const auto ref = load_coords(a.align_to);
        if (ref.annotators != e.annotators)
            throw InputError(a.align_to + ": annotators differ from the embedded matrix");
        const auto aligned = procrustes_align(ref.coords, e.coords);
        e.coords = aligned.aligned;
        coords["alignment"] = {{"reference", a.align_to},
                               {"disparity", aligned.disparity},
                               {"scale", aligned.scale},
                               {"reflected", aligned.reflected}};
    }
    ojson points = ojson::array();
    for (std::size_t i = 0; i < e.coords.size(); ++i)
        points.push_back({{"annotator", e.annotators[i]},
                          {"x", e.coords[i][0]},
                          {"y", e.coords[i][1]},
                          {"cluster", clusters.assignment[i]}});
    coords["points"] = std::move(points);
    coords["warnings"] = e.warnings;

    write_text(a.out, coords.dump(2) + "\n");
    out << a.out << '\n';
    if (!a.svg.empty()) {
        write_text(a.svg, scatter_svg(e, clusters, "MDS projection (" + a.which + ")"));
        out << a.svg << '\n';
    }
    for (const auto& w : e.warnings)
        err << "warning: " << w << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- baseline

struct BaselineArgs {
    std::string kind, annotations, out;
    std::uint64_t seed = 7;
    int dim = 512;
    LabelOptions labels;
};

int run_baseline(const BaselineArgs& a, std::ostream& out, std::ostream&)
{
    const auto ann = load_annotations(a.annotations, a.labels.domain());
    if (a.kind == "random")
        save_annotations(a.out, baseline_random_labels(ann, a.seed));
    else if (a.kind == "consensus")
        save_annotations(a.out, baseline_consensus_labels(ann));
    else if (a.kind == "uniform-feat")
        save_vectors(a.out, baseline_uniform_features(ann.annotators(), a.dim));
    else if (a.kind == "random-feat")
        save_vectors(a.out, baseline_random_features(ann.annotators(), a.dim, a.seed));
    else
        throw InputError("unknown baseline kind '" + a.kind + "'");
    out << a.out << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    SynthConfig cfg;
    std::string out_dir;
};

int run_synth(const SynthArgs& a, std::ostream& out, std::ostream&)
{
    const auto corpus = gen_corpus(a.cfg);
    const std::filesystem::path dir(a.out_dir);
    save_corpus(corpus, dir);
    for (const char* name : {"annotations.jsonl", "predictions.jsonl", "features.jsonl",
                             "attentions.jsonl", "truth.json"})
        out << (dir / name).string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    std::string in, svg_dir;
};

int run_report(const ReportArgs& a, std::ostream& out, std::ostream&)
{
    const auto report = load_report(a.in);
    out << "command: " << report.command << '\n';
    for (const auto& [name, value] : report.scores) {
        char line[128];
        std::snprintf(line, sizeof line, "%s: %.6f\n", name.c_str(), value);
        out << line;
    }
    for (const auto& w : report.warnings)
        out << "warning: " << w << '\n';
    if (!a.svg_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(a.svg_dir, ec);
        if (ec)
            throw InputError("cannot create directory '" + a.svg_dir + "'");
        for (const auto& [name, rm] : report.matrices) {
            const auto path = (std::filesystem::path(a.svg_dir) / ("heatmap_" + name + ".svg"))
                                  .string();
            write_text(path, heatmap_svg(rm.matrix, report.annotators, name + " (" + rm.kind + ")"));
            out << path << '\n';
        }
    }
    return kExitOk;
}

std::string first_positional(const std::vector<std::string>& args)
{
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            ++i;
            continue;
        }
        if (!args[i].empty() && args[i][0] != '-')
            return args[i];
    }
    return {};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Annotator-aware evaluation: DIC, BAE and supporting metrics",
                 "tendeval"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version",
                         std::string("tendeval ") + kToolVersion + " (report schema " +
                             std::to_string(kReportSchemaVersion) + ")");
    app.set_config("--config", "", "JSON file supplying any flag; command line wins");
    app.config_formatter(std::make_shared<JsonConfig>(first_positional(args)));
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "More diagnostics on standard error");

    std::function<int()> action;

    DicArgs dic_args;
    {
        auto* sub = app.add_subcommand("dic", "Consistency matrices and the DIC score");
        sub->add_option("--annotations", dic_args.annotations, "Ground-truth JSONL")->required();
        sub->add_option("--predictions", dic_args.predictions, "Predicted labels JSONL")->required();
        sub->add_option("--min-overlap", dic_args.tau, "Minimum shared samples per pair")
            ->capture_default_str()
            ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
        sub->add_option("--out", dic_args.out, "Report JSON path")->required();
        sub->add_option("--heatmap", dic_args.heatmap, "Ground-truth heatmap SVG");
        sub->add_option("--heatmap-pred", dic_args.heatmap_pred, "Predicted heatmap SVG");
        sub->add_flag("--serial", dic_args.serial, "Use the serial reference kernels");
        add_label_options(sub, dic_args.labels);
        sub->callback([&] { action = [&] { return run_dic(dic_args, out, err); }; });
    }

    BaeArgs bae_args;
    {
        auto* sub = app.add_subcommand("bae", "Feature/region similarity and the BAE score");
        sub->add_option("--annotations", bae_args.annotations, "Ground-truth JSONL")->required();
        sub->add_option("--features", bae_args.features, "Feature JSONL")->required();
        sub->add_option("--attentions", bae_args.attentions, "Attention JSONL (region level)");
        sub->add_option("--importance", bae_args.importance, "Importance vectors JSONL (Grad)");
        sub->add_option("--importance-ref", bae_args.importance_ref,
                        "Reference importance vectors JSONL (Grad)");
        sub->add_option("--min-overlap", bae_args.tau, "Minimum shared samples per pair")
            ->capture_default_str()
            ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
        sub->add_option("--out", bae_args.out, "Report JSON path")->required();
        sub->add_option("--mds", bae_args.mds_svg, "Feature-level MDS scatter SVG");
        sub->add_option("--cluster-threshold", bae_args.cluster_threshold,
                        "Kappa threshold for agreement clusters")
            ->capture_default_str();
        sub->add_flag("--normalize", bae_args.normalize,
                      "Min-max rescale both matrices before comparing");
        sub->add_flag("--serial", bae_args.serial, "Use the serial reference kernels");
        add_label_options(sub, bae_args.labels);
        sub->callback([&] { action = [&] { return run_bae(bae_args, out, err); }; });
    }

    TraditionalArgs trad_args;
    {
        auto* sub = app.add_subcommand("traditional", "ACC, Fleiss' kappa and PCC");
        sub->add_option("--annotations", trad_args.annotations, "Ground-truth JSONL")->required();
        sub->add_option("--predictions", trad_args.predictions, "Predicted labels JSONL")
            ->required();
        sub->add_option("--out", trad_args.out, "Report JSON path")->required();
        add_label_options(sub, trad_args.labels);
        sub->callback([&] { action = [&] { return run_traditional(trad_args, out, err); }; });
    }

    CompArgs comp_args;
    {
        auto* sub = app.add_subcommand("comp", "Comprehensiveness of attention masking");
        sub->add_option("--annotations", comp_args.annotations, "Ground-truth JSONL")->required();
        sub->add_option("--pred-orig", comp_args.pred_orig, "Unmasked predictions")->required();
        sub->add_option("--pred-masked", comp_args.pred_masked, "Top-k masked predictions")
            ->required();
        sub->add_option("--pred-random", comp_args.pred_random, "Random masked predictions")
            ->required();
        sub->add_option("--out", comp_args.out, "Report JSON path")->required();
        add_label_options(sub, comp_args.labels);
        sub->callback([&] { action = [&] { return run_comp(comp_args, out, err); }; });
    }

    MdsArgs mds_args;
    {
        auto* sub = app.add_subcommand("mds", "2D projection of a report matrix");
        sub->add_option("--matrix", mds_args.matrix, "Report JSON holding the matrix")->required();
        sub->add_option("--which", mds_args.which, "Matrix name: true|pred|feature|region")
            ->capture_default_str();
        sub->add_option("--out", mds_args.out, "Coordinates JSON path")->required();
        sub->add_option("--svg", mds_args.svg, "Scatter SVG path");
        sub->add_option("--cluster-threshold", mds_args.cluster_threshold,
                        "Kappa threshold for agreement clusters")
            ->capture_default_str();
        sub->add_option("--align-to", mds_args.align_to, "Coordinates JSON to Procrustes-align to");
        sub->callback([&] { action = [&] { return run_mds(mds_args, out, err); }; });
    }

    BaselineArgs base_args;
    {
        auto* sub = app.add_subcommand("baseline", "Ablation baselines as JSONL artifacts");
        sub->add_option("--kind", base_args.kind, "random|consensus|uniform-feat|random-feat")
            ->required()
            ->check(CLI::IsMember({"random", "consensus", "uniform-feat", "random-feat"}));
        sub->add_option("--annotations", base_args.annotations, "Ground-truth JSONL")->required();
        sub->add_option("--out", base_args.out, "Output JSONL path")->required();
        sub->add_option("--seed", base_args.seed, "Seed")->capture_default_str();
        sub->add_option("--dim", base_args.dim, "Feature dimension")->capture_default_str();
        add_label_options(sub, base_args.labels);
        sub->callback([&] { action = [&] { return run_baseline(base_args, out, err); }; });
    }

    SynthArgs synth_args;
    {
        auto& c = synth_args.cfg;
        auto* sub = app.add_subcommand("synth", "Generate a synthetic corpus");
        sub->add_option("--annotators", c.annotators)->capture_default_str();
        sub->add_option("--clusters", c.clusters)->capture_default_str();
        sub->add_option("--samples", c.samples)->capture_default_str();
        sub->add_option("--labels", c.labels, "Label domain size")->capture_default_str();
        sub->add_option("--noise", c.annotator_noise, "Annotator flip probability")
            ->capture_default_str();
        sub->add_option("--model-noise", c.model_noise, "Prediction flip probability")
            ->capture_default_str();
        sub->add_option("--feature-dim", c.feature_dim)->capture_default_str();
        sub->add_option("--feature-noise", c.feature_noise)->capture_default_str();
        sub->add_option("--regions", c.regions)->capture_default_str();
        sub->add_option("--coverage", c.coverage)->capture_default_str();
        sub->add_option("--coupling", c.cluster_coupling,
                        "Probability a cluster latent copies the shared base label")
            ->capture_default_str();
        sub->add_option("--seed", c.seed)->capture_default_str();
        sub->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
        sub->callback([&] { action = [&] { return run_synth(synth_args, out, err); }; });
    }

    ReportArgs report_args;
    {
        auto* sub = app.add_subcommand("report", "Summarize a report and render its heatmaps");
        sub->add_option("--in", report_args.in, "Report JSON")->required();
        sub->add_option("--svg-dir", report_args.svg_dir, "Directory for heatmap SVGs");
        sub->callback([&] { action = [&] { return run_report(report_args, out, err); }; });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInput;
    }

    try {
        if (verbosity > 0)
            err << "tendeval " << kToolVersion << ": openmp "
                << (openmp_enabled() ? "enabled" : "disabled") << '\n';
        return action ? action() : kExitInput;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ComputeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCompute;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCompute;
    }
}

} // namespace tendeval
