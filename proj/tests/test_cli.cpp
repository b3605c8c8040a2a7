// End-to-end exercise of the CLI surface: train, eval, score-frames and
// export-scores on a small synthetic corpus, plus the documented exit codes.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "alocc/image.hpp"
#include "support/synth.hpp"

namespace fs = std::filesystem;

static std::string g_cli;

namespace {

int run_cmd(const std::string& args, const std::string& log) {
    const std::string cmd = g_cli + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

size_t count_lines(const std::string& path) {
    std::ifstream in(path);
    size_t n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

std::string head_line(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

} // namespace

TEST_CASE("cli round trip: train, eval, export, frames") {
    const std::string dir = synth::make_temp_dir("cli");
    const synth::Corpus corpus =
        synth::make_corpus({{1, 120}, {0, 40}, {7, 40}}, 17);
    synth::write_idx_images(dir + "/i.idx", corpus.images);
    synth::write_idx_labels(dir + "/l.idx", corpus.labels);

    nlohmann::json cfg{
        {"data",
         {{"kind", "mnist_idx"}, {"images", dir + "/i.idx"}, {"labels", dir + "/l.idx"}}},
        {"target_class", 1},
        {"train_count", 96},
        {"fractions", {0.2, 0.5}},
        {"base_width", 8},
        {"train", {{"batch_size", 16}, {"max_epochs", 2}, {"seed", 3}, {"rho", 1e-6}}},
        {"out_dir", dir + "/out"}};
    std::ofstream(dir + "/cfg.json") << cfg.dump(2);

    REQUIRE(run_cmd("train --config " + dir + "/cfg.json", dir + "/train.log") == 0);
    CHECK(fs::exists(dir + "/out/model.alocc"));
    CHECK(fs::exists(dir + "/out/train_report.csv"));
    CHECK(head_line(dir + "/out/train_report.csv") == "epoch,d_loss,r_adv_loss,recon_loss");
    CHECK(count_lines(dir + "/out/train_report.csv") == 3); // header + 2 epochs

    SUBCASE("eval writes per-fraction scores and metric rows") {
        REQUIRE(run_cmd("eval --model " + dir + "/out/model.alocc --config " + dir +
                            "/cfg.json --out " + dir + "/eval",
                        dir + "/eval.log") == 0);
        CHECK(fs::exists(dir + "/eval/scores_f20.csv"));
        CHECK(fs::exists(dir + "/eval/scores_f50.csv"));
        CHECK(head_line(dir + "/eval/scores_f50.csv") ==
              "sample_id,occ1_score,occ2_score,true_label");
        // 24 held-out inliers at 50% -> 24 outliers -> 48 rows + header.
        CHECK(count_lines(dir + "/eval/scores_f50.csv") == 49);
        CHECK(head_line(dir + "/eval/metrics.csv") ==
              "fraction,mode,tau,f1,auc,eer,tp,fp,tn,fn");
        CHECK(count_lines(dir + "/eval/metrics.csv") == 5); // header + 2 fractions x 2 modes

        // --mode restricts the metric report to one rule.
        REQUIRE(run_cmd("eval --model " + dir + "/out/model.alocc --config " + dir +
                            "/cfg.json --out " + dir + "/eval2 --mode occ2",
                        dir + "/eval2.log") == 0);
        CHECK(count_lines(dir + "/eval2/metrics.csv") == 3); // header + 2 fractions x 1 mode
        std::ifstream m(dir + "/eval2/metrics.csv");
        std::string line;
        std::getline(m, line);
        while (std::getline(m, line)) CHECK(line.find("occ2") != std::string::npos);

        CHECK(run_cmd("eval --model " + dir + "/out/model.alocc --config " + dir +
                          "/cfg.json --mode bogus",
                      dir + "/eval3.log") == 2);

        // detection.tau in the config pins the F1 threshold when --tau is absent.
        nlohmann::json with_tau = cfg;
        with_tau["detection"] = {{"tau", 0.5}, {"mode", "occ2"}};
        std::ofstream(dir + "/cfg_tau.json") << with_tau.dump(2);
        REQUIRE(run_cmd("eval --model " + dir + "/out/model.alocc --config " + dir +
                            "/cfg_tau.json --out " + dir + "/eval4",
                        dir + "/eval4.log") == 0);
        std::ifstream mt(dir + "/eval4/metrics.csv");
        std::string row;
        std::getline(mt, row);
        std::getline(mt, row);
        CHECK(row.find(",occ1,0.5,") != std::string::npos);
    }

    SUBCASE("export-scores handles a plain image directory") {
        const std::string imgs = dir + "/imgs";
        fs::create_directories(imgs);
        for (int i = 0; i < 3; ++i) {
            alocc::Image8 img{28, 28, 1, std::vector<uint8_t>(784, uint8_t(40 * i))};
            alocc::write_png(imgs + "/img" + std::to_string(i) + ".png", img);
        }
        REQUIRE(run_cmd("export-scores --model " + dir + "/out/model.alocc --data " + imgs +
                            " --out " + dir + "/scores.csv",
                        dir + "/export.log") == 0);
        CHECK(count_lines(dir + "/scores.csv") == 4);
        std::ifstream in(dir + "/scores.csv");
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        CHECK(row.find(",-1") != std::string::npos); // unknown labels
    }

    SUBCASE("score-frames aggregates patches and reports EER") {
        const std::string frames = dir + "/frames";
        fs::create_directories(frames);
        alocc::Rng rng(5);
        for (int i = 0; i < 6; ++i) {
            alocc::Image8 img{120, 90, 1, std::vector<uint8_t>(size_t(120) * 90)};
            for (auto& p : img.pixels) p = uint8_t(rng.uniform_index(60) + (i % 2) * 120);
            alocc::write_pgm(frames + "/f" + std::to_string(i) + ".pgm", img);
        }
        std::ofstream(dir + "/gt.txt") << "0\n1\n0\n1\n0\n1\n";
        REQUIRE(run_cmd("score-frames --model " + dir + "/out/model.alocc --data " + frames +
                            " --labels " + dir + "/gt.txt --out " + dir + "/fr",
                        dir + "/frames.log") == 0);
        CHECK(count_lines(dir + "/fr/frames.csv") == 7);
        CHECK(count_lines(dir + "/fr/frame_metrics.csv") == 3);

        // All-normal ground truth: EER undefined -> exit 2.
        std::ofstream(dir + "/gt0.txt") << "0\n0\n0\n0\n0\n0\n";
        CHECK(run_cmd("score-frames --model " + dir + "/out/model.alocc --data " + frames +
                          " --labels " + dir + "/gt0.txt --out " + dir + "/fr0",
                      dir + "/frames0.log") == 2);

        // Label/frame count mismatch -> exit 2.
        std::ofstream(dir + "/gt_short.txt") << "0\n1\n";
        CHECK(run_cmd("score-frames --model " + dir + "/out/model.alocc --data " + frames +
                          " --labels " + dir + "/gt_short.txt --out " + dir + "/frx",
                      dir + "/frames1.log") == 2);
    }

    fs::remove_all(dir);
}

TEST_CASE("cli rejects invalid configs with exit code 2") {
    const std::string dir = synth::make_temp_dir("clibad");
    const synth::Corpus corpus = synth::make_corpus({{1, 8}}, 19);
    synth::write_idx_images(dir + "/i.idx", corpus.images);
    synth::write_idx_labels(dir + "/l.idx", corpus.labels);

    // lambda <= 0 is rejected at validation.
    nlohmann::json bad{
        {"data",
         {{"kind", "mnist_idx"}, {"images", dir + "/i.idx"}, {"labels", dir + "/l.idx"}}},
        {"train", {{"lambda", 0.0}}}};
    std::ofstream(dir + "/bad.json") << bad.dump();
    CHECK(run_cmd("train --config " + dir + "/bad.json", dir + "/bad.log") == 2);

    // Missing data path.
    nlohmann::json missing{
        {"data", {{"kind", "mnist_idx"}, {"images", dir + "/nope.idx"}, {"labels", dir + "/l.idx"}}}};
    std::ofstream(dir + "/missing.json") << missing.dump();
    CHECK(run_cmd("train --config " + dir + "/missing.json", dir + "/missing.log") == 2);

    // Sweep fraction outside (0,1).
    nlohmann::json frac{
        {"data",
         {{"kind", "mnist_idx"}, {"images", dir + "/i.idx"}, {"labels", dir + "/l.idx"}}},
        {"fractions", {0.5, 1.5}}};
    std::ofstream(dir + "/frac.json") << frac.dump();
    CHECK(run_cmd("train --config " + dir + "/frac.json", dir + "/frac.log") == 2);

    // Unparseable JSON.
    std::ofstream(dir + "/broken.json") << "{ not json";
    CHECK(run_cmd("train --config " + dir + "/broken.json", dir + "/broken.log") == 2);

    fs::remove_all(dir);
}

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[argc - 1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - (argc > 1 ? 1 : 0), argv);
    return ctx.run();
}
