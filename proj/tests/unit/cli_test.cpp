#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "losight/eval/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string output;
};

std::string env(const char* name) {
    const char* v = std::getenv(name);
    REQUIRE_MESSAGE(v != nullptr, name << " is not set");
    return v;
}

fs::path workdir() {
    static const fs::path dir = [] {
        fs::path d = env("LOSIGHT_SCRATCH");
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run_cli(const std::string& args) {
    const std::string cmd = "cd '" + workdir().string() + "' && '" + env("LOSIGHT_CLI") + "' " + args + " 2>&1";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path groups_dir() { return fs::path(env("LOSIGHT_TEST_DATA")).parent_path().parent_path() / "configs" / "groups"; }

// Small dataset shared by the later cases.
const fs::path& small_dataset() {
    static const fs::path p = [] {
        const Run r = run_cli("generate --samples 40 --seed 3 --out small.losd --jobs 2");
        REQUIRE_MESSAGE(r.code == 0, r.output);
        return workdir() / "small.losd";
    }();
    return p;
}

}  // namespace

TEST_CASE("generate twice gives identical files") {
    const Run a = run_cli("generate --samples 10 --seed 7 --out d1.losd");
    REQUIRE_MESSAGE(a.code == 0, a.output);
    const Run b = run_cli("generate --samples 10 --seed 7 --out d2.losd --jobs 3");
    REQUIRE_MESSAGE(b.code == 0, b.output);
    const std::string one = slurp(workdir() / "d1.losd");
    CHECK(one.size() > 10 * 7001 * 8);
    CHECK(one.substr(0, 4) == "LOSD");
    CHECK(one == slurp(workdir() / "d2.losd"));
    CHECK(fs::exists(workdir() / "d1.losd.config.json"));
    const Run c = run_cli("generate --samples 10 --seed 8 --out d3.losd");
    REQUIRE(c.code == 0);
    CHECK(one != slurp(workdir() / "d3.losd"));
}

TEST_CASE("usage errors exit with 1 and print usage") {
    const Run bogus = run_cli("generate --out x.losd --seed 1 --bogus");
    CHECK(bogus.code == 1);
    CHECK(bogus.output.find("--bogus") != std::string::npos);
    CHECK(bogus.output.find("Usage") != std::string::npos);
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("frobnicate").code == 1);
    const Run no_seed = run_cli("generate --samples 2 --out y.losd");
    CHECK(no_seed.code == 1);
    CHECK(no_seed.output.find("seed") != std::string::npos);
    CHECK(run_cli("train --features f.losd --model-kind mlp --out m.json").code == 1);
    CHECK(run_cli("generate --samples 0 --seed 1 --out z.losd").code == 1);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("data errors exit with 2") {
    std::ofstream(workdir() / "garbage.losd") << "definitely not a container";
    const Run r = run_cli("predict --model nothing.json --dataset garbage.losd --out p.csv");
    CHECK(r.code == 2);
    std::ofstream(workdir() / "bad_lines.csv") << "species,nu0,s_ref,gamma_air,e_lower,n_air\nNO,1,1,1,1,1\n";
    CHECK(run_cli("generate --samples 5 --seed 1 --lines bad_lines.csv --out q.losd").code == 2);
}

TEST_CASE("stage-by-stage pipeline") {
    const fs::path data = small_dataset();
    REQUIRE(fs::exists(data));
    std::ofstream(workdir() / "group.json")
        << R"({"transform": "log", "extractor": "polynomial", "order": 3, "window_len": 50, "pca_k": 8})";
    Run r = run_cli("featurize --dataset small.losd --group group.json --out feats.losd");
    REQUIRE_MESSAGE(r.code == 0, r.output);
    CHECK(fs::exists(workdir() / "feats.losd.config.json"));

    for (const std::string kind : {"linear_ridge", "mlp", "rbfn"}) {
        r = run_cli("train --features feats.losd --model-kind " + kind + " --seed 4 --hidden 4 --restarts 1 "
                    "--max-epochs 40 --out " + kind + ".json");
        REQUIRE_MESSAGE(r.code == 0, r.output);
    }
    r = run_cli("train --features feats.losd --model-kind kernel_ridge --kernel rational_quadratic --seed 4 "
                "--out krr.json");
    REQUIRE_MESSAGE(r.code == 0, r.output);
    CHECK(run_cli("train --features feats.losd --model-kind tree --seed 4 --out t.json").code == 1);

    r = run_cli("blend --weak linear_ridge.json,mlp.json,rbfn.json,krr.json --meta ols --features feats.losd "
                "--out blend.json");
    REQUIRE_MESSAGE(r.code == 0, r.output);
    r = run_cli("evaluate --model blend.json --features feats.losd --dataset small.losd --report rep");
    REQUIRE_MESSAGE(r.code == 0, r.output);
    const auto rows = losight::eval::read_results_csv(workdir() / "rep" / "results.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].model == "blend(ols)");
    CHECK(std::isfinite(rows[0].rmse));

    r = run_cli("predict --model blend.json --dataset small.losd --out pred.csv");
    REQUIRE_MESSAGE(r.code == 0, r.output);
    std::ifstream pred(workdir() / "pred.csv");
    std::string header;
    std::getline(pred, header);
    CHECK(header.rfind("sample,", 0) == 0);
    int lines = 0;
    for (std::string line; std::getline(pred, line);) ++lines;
    CHECK(lines == 40);

    // Evaluating against a different dataset is a data error.
    REQUIRE(run_cli("generate --samples 40 --seed 4 --out other.losd").code == 0);
    CHECK(run_cli("evaluate --model blend.json --features feats.losd --dataset other.losd --report rep2").code == 2);
}

TEST_CASE("feature selection over descriptor files") {
    small_dataset();
    const fs::path groups = workdir() / "groups";
    fs::create_directories(groups);
    for (const char* name : {"stats_bands.json", "poly1-50.json", "ratio-20.json"})
        fs::copy_file(groups_dir() / name, groups / name, fs::copy_options::overwrite_existing);
    const Run r = run_cli("select-features --dataset small.losd --groups groups --report sel --seed 2 --hidden 4 "
                          "--restarts 1 --max-epochs 30");
    REQUIRE_MESSAGE(r.code == 0, r.output);
    std::ifstream in(workdir() / "sel" / "selection.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "rank,group,pca_k,hidden_units,raw_features,train_mse,validation_mse");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
    CHECK(fs::exists(workdir() / "sel" / "select-features.config.json"));
}

TEST_CASE("demo produces a populated metric report") {
    const Run r = run_cli("demo --config '" + env("LOSIGHT_TEST_DATA") + "/demo_small.json' --out demo --jobs 2");
    REQUIRE_MESSAGE(r.code == 0, r.output);
    const fs::path dir = workdir() / "demo";
    for (const char* f : {"dataset.losd", "features.losd", "models/mlp.json", "models/blend_mlp.json",
                          "models/blend_ols.json", "report/results.csv", "report/segments.csv",
                          "report/profiles.csv", "demo.config.json"})
        CHECK_MESSAGE(fs::exists(dir / f), f);
    const auto rows = losight::eval::read_results_csv(dir / "report" / "results.csv");
    CHECK(rows.size() == 7);
    for (const auto& row : rows) {
        CAPTURE(row.model);
        CHECK(std::isfinite(row.train_mse));
        CHECK(std::isfinite(row.test_mse));
        CHECK(row.rmse > 0.0);
        CHECK(row.re > 0.0);
        CHECK(row.rrmse > 0.0);
        CHECK(std::abs(row.r) <= 1.0);
    }
}
