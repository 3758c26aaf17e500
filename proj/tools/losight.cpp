// losight: dataset generation, featurization, training, blending and
// evaluation for line-of-sight temperature profile retrieval.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "losight/core/error.hpp"
#include "losight/core/parallel.hpp"
#include "losight/eval/report.hpp"
#include "losight/eval/wrapper.hpp"
#include "losight/pipeline/config.hpp"
#include "losight/pipeline/stages.hpp"
#include "losight/scenegen/serialization.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace losight;

namespace {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("expected a comma-separated integer list, got '" + s + "'");
        }
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

unsigned jobs_or_default(unsigned jobs) { return jobs == 0 ? default_jobs() : jobs; }

void echo(const fs::path& output, json j) { pipeline::write_json(pipeline::config_echo_path(output), j); }

// --- generate -------------------------------------------------------------

struct GenerateArgs {
    std::string config, out;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    unsigned jobs = 0;
    std::vector<std::string> lines;
};

int run_generate(const GenerateArgs& a, bool seed_given, bool samples_given) {
    pipeline::RunConfig cfg;
    if (!a.config.empty()) {
        cfg = pipeline::load_config(a.config);
    } else if (!seed_given) {
        throw UsageError("generate requires --seed (or a --config with a seed)");
    }
    if (seed_given) cfg.seed = a.seed;
    if (samples_given) cfg.samples = a.samples;
    if (!a.lines.empty()) cfg.lines.assign(a.lines.begin(), a.lines.end());
    cfg.jobs = jobs_or_default(a.jobs);
    cfg.validate();
    const auto db = pipeline::resolve_line_database(cfg.lines);
    const auto dataset = pipeline::generate_stage(cfg, db);
    scenegen::save_dataset(a.out, dataset);
    json e = pipeline::config_to_json(cfg);
    e.erase("output");
    e["line_count"] = db.size();
    echo(a.out, e);
    std::cout << "wrote " << dataset.samples() << " samples to " << a.out << '\n';
    return 0;
}

// --- featurize ------------------------------------------------------------

int run_featurize(const std::string& dataset_path, const std::string& group_path, const std::string& out,
                  unsigned jobs) {
    const auto dataset = scenegen::load_dataset(dataset_path);
    const auto group = features::load_group(group_path);
    const auto f = pipeline::featurize_stage(dataset, group, jobs_or_default(jobs));
    pipeline::save_features(out, f);
    echo(out, {{"dataset", dataset_path}, {"group", features::group_to_json(group)}});
    if (f.fit_warnings > 0) std::cerr << "warning: " << f.fit_warnings << " windows used the linear fallback fit\n";
    std::cout << "wrote " << f.x.rows() << " x " << f.x.cols() << " features (" << group.label() << ") to " << out
              << '\n';
    return 0;
}

// --- select-features ------------------------------------------------------

struct SelectArgs {
    std::string dataset, groups, report, hidden = "20";
    std::uint64_t seed = 0;
    int restarts = 5, max_epochs = 500;
    unsigned jobs = 0;
};

int run_select(const SelectArgs& a) {
    const auto dataset = scenegen::load_dataset(a.dataset);
    if (!fs::is_directory(a.groups)) throw UsageError("--groups must be a directory of descriptor files");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(a.groups))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw UsageError("no .json descriptors in " + a.groups);
    std::vector<features::FeatureGroup> groups;
    json described = json::array();
    for (const auto& p : files) {
        groups.push_back(features::load_group(p));
        described.push_back(features::group_to_json(groups.back()));
    }
    eval::WrapperConfig cfg;
    cfg.referee.seed = pipeline::stage_seed(a.seed, "referee");
    cfg.referee.restarts = a.restarts;
    cfg.referee.max_epochs = a.max_epochs;
    cfg.hidden_grid = parse_int_list(a.hidden);
    cfg.jobs = jobs_or_default(a.jobs);
    const auto outcome = eval::wrapper_select(dataset, groups, cfg);
    for (const auto& d : outcome.diagnostics) std::cerr << "warning: " << d << '\n';
    if (outcome.ranked.empty()) throw NumericError("no feature group could be evaluated");
    const fs::path dir(a.report);
    eval::write_selection_csv(dir / "selection.csv", outcome.ranked);
    eval::write_selection_csv(dir / "cells.csv", outcome.cells);
    pipeline::write_json(dir / "select-features.config.json",
                         {{"dataset", a.dataset},
                          {"groups", described},
                          {"seed", a.seed},
                          {"referee", ml::mlp_config_to_json(cfg.referee)},
                          {"hidden_grid", cfg.hidden_grid}});
    for (std::size_t i = 0; i < outcome.ranked.size(); ++i) {
        const auto& r = outcome.ranked[i];
        std::cout << i + 1 << ". " << r.name << "  validation MSE " << eval::format_double(r.validation_mse) << '\n';
    }
    return 0;
}

// --- train ----------------------------------------------------------------

struct TrainArgs {
    std::string features, kind, kernel = "squared_exponential", out, hidden, tuning;
    std::uint64_t seed = 0;
    int restarts = 5, max_epochs = 500;
    unsigned jobs = 0;
};

int run_train(const TrainArgs& a) {
    const auto f = pipeline::load_features(a.features);
    pipeline::TrainRequest req;
    req.kind = ml::parse_kind(a.kind);
    if (req.kind == ml::ModelKind::Blend) throw UsageError("use the blend subcommand to build blends");
    req.kernel = ml::parse_kernel(a.kernel);
    req.mlp.seed = pipeline::stage_seed(a.seed, "train");
    req.mlp.restarts = a.restarts;
    req.mlp.max_epochs = a.max_epochs;
    if (!a.tuning.empty()) req.tuning = ml::tuning_grid_from_json(pipeline::read_json(a.tuning));
    if (!a.hidden.empty()) req.tuning.hidden_units = parse_int_list(a.hidden);
    req.jobs = jobs_or_default(a.jobs);
    const auto bundle = pipeline::train_stage(f, req);
    pipeline::save_bundle(a.out, bundle);
    echo(a.out, {{"features", a.features},
                 {"model_kind", a.kind},
                 {"kernel", a.kernel},
                 {"seed", a.seed},
                 {"mlp", ml::mlp_config_to_json(req.mlp)}});
    std::cout << pipeline::model_label(*bundle.model) << " validation MSE "
              << eval::format_double(bundle.model->info.validation_mse) << " -> " << a.out << '\n';
    return 0;
}

// --- blend ----------------------------------------------------------------

int run_blend(const std::string& weak, const std::string& meta, const std::string& features_path,
              const std::string& out, std::uint64_t seed, unsigned jobs) {
    const auto f = pipeline::load_features(features_path);
    std::vector<pipeline::ModelBundle> bundles;
    const auto paths = split_list(weak);
    if (paths.empty()) throw UsageError("--weak needs at least one model file");
    for (const auto& p : paths) bundles.push_back(pipeline::load_bundle(p));
    ml::MlpConfig meta_mlp;
    meta_mlp.seed = pipeline::stage_seed(seed, "meta");
    const auto outcome = pipeline::blend_stage(bundles, f, ml::parse_meta(meta), meta_mlp, jobs_or_default(jobs));
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
    pipeline::save_bundle(out, outcome.bundle);
    echo(out, {{"weak", paths}, {"meta", meta}, {"features", features_path}, {"seed", seed}});
    std::cout << "blend(" << meta << ") validation MSE "
              << eval::format_double(outcome.bundle.model->info.validation_mse) << " -> " << out << '\n';
    return 0;
}

// --- evaluate / predict ---------------------------------------------------

int run_evaluate(const std::string& model_path, const std::string& features_path, const std::string& dataset_path,
                 const std::string& report) {
    const auto bundle = pipeline::load_bundle(model_path);
    const auto f = pipeline::load_features(features_path);
    const auto dataset = scenegen::load_dataset(dataset_path);
    if (dataset.seed != f.dataset_seed || dataset.samples() != f.x.rows())
        throw DataError("feature file was not derived from this dataset");
    const auto e = pipeline::evaluate_stage(bundle, f);
    const auto row = eval::make_result_row(pipeline::model_label(*bundle.model), f.group.label(), e.train_mse, e.test);
    pipeline::write_evaluation_report(report, {row}, e, f);
    pipeline::write_json(fs::path(report) / "evaluate.config.json",
                         {{"model", model_path}, {"features", features_path}, {"dataset", dataset_path}});
    std::cout << "RMSE " << e.test.rmse << " K, RE " << e.test.re << ", RRMSE " << e.test.rrmse << ", R "
              << e.test.r << '\n';
    return 0;
}

int run_predict(const std::string& model_path, const std::string& dataset_path, const std::string& out,
                unsigned jobs) {
    const auto bundle = pipeline::load_bundle(model_path);
    const auto dataset = scenegen::load_dataset(dataset_path);
    const Matrix t = bundle.predict_from_spectra(dataset, jobs_or_default(jobs));
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    std::ofstream os(out, std::ios::binary);
    if (!os) throw DataError("cannot write " + out);
    os << "sample";
    for (Index s = 0; s < t.cols(); ++s) os << ",t" << s;
    os << '\n';
    for (Index i = 0; i < t.rows(); ++i) {
        os << i;
        for (Index s = 0; s < t.cols(); ++s) os << ',' << eval::format_double(t(i, s));
        os << '\n';
    }
    if (!os) throw DataError("write failed for " + out);
    echo(out, {{"model", model_path}, {"dataset", dataset_path}});
    return 0;
}

// --- demo -----------------------------------------------------------------

int run_demo(const std::string& config_path, const std::string& out_override, unsigned jobs) {
    pipeline::RunConfig cfg = pipeline::load_config(config_path);
    if (!out_override.empty()) cfg.output = out_override;
    if (jobs != 0) cfg.jobs = jobs;
    const unsigned j = cfg.resolved_jobs();
    const fs::path out = cfg.output;
    fs::create_directories(out / "models");
    pipeline::write_json(out / "demo.config.json", pipeline::config_to_json(cfg));

    const auto db = pipeline::resolve_line_database(cfg.lines);
    std::cout << "generating " << cfg.samples << " spectra from " << db.size() << " lines\n";
    const auto dataset = pipeline::generate_stage(cfg, db);
    scenegen::save_dataset(out / "dataset.losd", dataset);

    std::cout << "featurizing (" << cfg.features.label() << ")\n";
    const auto f = pipeline::featurize_stage(dataset, cfg.features, j);
    pipeline::save_features(out / "features.losd", f);

    pipeline::TrainRequest req;
    req.mlp = cfg.mlp;
    req.mlp.seed = pipeline::stage_seed(cfg.seed, "train");
    req.tuning = cfg.tuning;
    req.jobs = j;
    struct Entry {
        std::string file;
        ml::ModelKind kind;
        ml::KernelKind kernel;
    };
    const std::vector<Entry> roster = {
        {"linear_ridge", ml::ModelKind::LinearRidge, ml::KernelKind::SquaredExponential},
        {"mlp", ml::ModelKind::Mlp, ml::KernelKind::SquaredExponential},
        {"rbfn", ml::ModelKind::Rbfn, ml::KernelKind::SquaredExponential},
        {"kernel_ridge_se", ml::ModelKind::KernelRidge, ml::KernelKind::SquaredExponential},
        {"kernel_ridge_rq", ml::ModelKind::KernelRidge, ml::KernelKind::RationalQuadratic},
    };
    std::vector<pipeline::ModelBundle> weak;
    std::vector<std::pair<std::string, pipeline::ModelBundle>> all;
    for (const auto& e : roster) {
        std::cout << "training " << e.file << '\n';
        req.kind = e.kind;
        req.kernel = e.kernel;
        weak.push_back(pipeline::train_stage(f, req));
        pipeline::save_bundle(out / "models" / (e.file + ".json"), weak.back());
        all.emplace_back(e.file, weak.back());
    }
    ml::MlpConfig meta_mlp = cfg.meta_mlp;
    meta_mlp.seed = pipeline::stage_seed(cfg.seed, "meta");
    for (const auto meta : {ml::MetaKind::Ols, ml::MetaKind::Mlp}) {
        const std::string name = "blend_" + std::string(ml::meta_name(meta));
        std::cout << "blending (" << ml::meta_name(meta) << " meta learner)\n";
        const auto b = pipeline::blend_stage(weak, f, meta, meta_mlp, j);
        for (const auto& w : b.warnings) std::cerr << "warning: " << w << '\n';
        pipeline::save_bundle(out / "models" / (name + ".json"), b.bundle);
        all.emplace_back(name, b.bundle);
    }

    std::vector<eval::ResultRow> rows;
    std::optional<pipeline::Evaluation> primary;
    for (const auto& [name, bundle] : all) {
        auto e = pipeline::evaluate_stage(bundle, f);
        rows.push_back(
            eval::make_result_row(pipeline::model_label(*bundle.model), f.group.label(), e.train_mse, e.test));
        if (name == "blend_mlp") primary = std::move(e);
    }
    pipeline::write_evaluation_report(out / "report", rows, *primary, f);
    for (const auto& r : rows)
        std::cout << r.model << ": RMSE " << r.rmse << " K, RE " << r.re << ", RRMSE " << r.rrmse << ", R " << r.r
                  << '\n';
    std::cout << "report written to " << (out / "report").string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"losight: line-of-sight temperature profile retrieval from emission spectra"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Simulate a labelled spectral dataset");
    generate->add_option("--config", gen.config, "Run configuration (JSON)");
    auto* gen_seed = generate->add_option("--seed", gen.seed, "Master seed");
    auto* gen_samples = generate->add_option("--samples", gen.samples, "Number of spectra");
    generate->add_option("--lines", gen.lines, "Line-list file(s): HITRAN .par or CSV");
    generate->add_option("--jobs", gen.jobs, "Worker threads (default: all cores)");
    generate->add_option("--out", gen.out, "Output dataset (.losd)")->required();

    std::string fz_dataset, fz_group, fz_out;
    unsigned fz_jobs = 0;
    auto* featurize = app.add_subcommand("featurize", "Extract one feature group from a dataset");
    featurize->add_option("--dataset", fz_dataset, "Input dataset")->required();
    featurize->add_option("--group", fz_group, "Feature-group descriptor (JSON)")->required();
    featurize->add_option("--out", fz_out, "Output feature file (.losd)")->required();
    featurize->add_option("--jobs", fz_jobs, "Worker threads");

    SelectArgs sel;
    auto* select = app.add_subcommand("select-features", "Rank feature groups with an MLP referee");
    select->add_option("--dataset", sel.dataset, "Input dataset")->required();
    select->add_option("--groups", sel.groups, "Directory of feature-group descriptors")->required();
    select->add_option("--report", sel.report, "Report directory")->required();
    select->add_option("--seed", sel.seed, "Referee seed");
    select->add_option("--hidden", sel.hidden, "Referee hidden-unit grid, comma separated");
    select->add_option("--restarts", sel.restarts, "Referee restarts");
    select->add_option("--max-epochs", sel.max_epochs, "Referee epoch limit");
    select->add_option("--jobs", sel.jobs, "Worker threads");

    TrainArgs tr;
    auto* train = app.add_subcommand("train", "Train one regressor on a feature file");
    train->add_option("--features", tr.features, "Feature file")->required();
    train->add_option("--model-kind", tr.kind, "linear_ridge | mlp | rbfn | kernel_ridge")->required();
    train->add_option("--kernel", tr.kernel, "squared_exponential | rational_quadratic");
    train->add_option("--out", tr.out, "Output model file (JSON)")->required();
    train->add_option("--seed", tr.seed, "Training seed")->required();
    train->add_option("--hidden", tr.hidden, "MLP hidden-unit grid, comma separated");
    train->add_option("--restarts", tr.restarts, "MLP restarts");
    train->add_option("--max-epochs", tr.max_epochs, "MLP epoch limit");
    train->add_option("--tuning", tr.tuning, "Tuning grid overrides (JSON)");
    train->add_option("--jobs", tr.jobs, "Worker threads");

    std::string bl_weak, bl_meta, bl_features, bl_out;
    std::uint64_t bl_seed = 0;
    unsigned bl_jobs = 0;
    auto* blend = app.add_subcommand("blend", "Fit a meta learner over trained weak learners");
    blend->add_option("--weak", bl_weak, "Weak model files, comma separated")->required();
    blend->add_option("--meta", bl_meta, "ols | mlp")->required();
    blend->add_option("--features", bl_features, "Feature file the weak learners were trained on")->required();
    blend->add_option("--out", bl_out, "Output model file (JSON)")->required();
    blend->add_option("--seed", bl_seed, "Meta-learner seed");
    blend->add_option("--jobs", bl_jobs, "Worker threads");

    std::string ev_model, ev_features, ev_dataset, ev_report;
    auto* evaluate = app.add_subcommand("evaluate", "Score a model on the test split");
    evaluate->add_option("--model", ev_model, "Model file")->required();
    evaluate->add_option("--features", ev_features, "Feature file")->required();
    evaluate->add_option("--dataset", ev_dataset, "Dataset the features came from")->required();
    evaluate->add_option("--report", ev_report, "Report directory")->required();

    std::string pr_model, pr_dataset, pr_out;
    unsigned pr_jobs = 0;
    auto* predict = app.add_subcommand("predict", "Predict temperature profiles for every spectrum in a dataset");
    predict->add_option("--model", pr_model, "Model file")->required();
    predict->add_option("--dataset", pr_dataset, "Dataset")->required();
    predict->add_option("--out", pr_out, "Output CSV")->required();
    predict->add_option("--jobs", pr_jobs, "Worker threads");

    std::string demo_config, demo_out;
    unsigned demo_jobs = 0;
    auto* demo = app.add_subcommand("demo", "Run generate, featurize, train, blend and evaluate end to end");
    demo->add_option("--config", demo_config, "Run configuration (JSON)")->required();
    demo->add_option("--out", demo_out, "Output directory (overrides the config)");
    demo->add_option("--jobs", demo_jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const CLI::App* failing = &app;
        for (auto* sub : app.get_subcommands()) failing = sub;
        std::cerr << failing->help();
        return 1;
    }

    try {
        if (*generate) return run_generate(gen, gen_seed->count() > 0, gen_samples->count() > 0);
        if (*featurize) return run_featurize(fz_dataset, fz_group, fz_out, fz_jobs);
        if (*select) return run_select(sel);
        if (*train) return run_train(tr);
        if (*blend) return run_blend(bl_weak, bl_meta, bl_features, bl_out, bl_seed, bl_jobs);
        if (*evaluate) return run_evaluate(ev_model, ev_features, ev_dataset, ev_report);
        if (*predict) return run_predict(pr_model, pr_dataset, pr_out, pr_jobs);
        if (*demo) return run_demo(demo_config, demo_out, demo_jobs);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
