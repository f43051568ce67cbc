#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "json.hpp"
#include "scsa/scsa.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "scsa_cli_XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (!mkdtemp(buf.data()))
            throw std::runtime_error("mkdtemp failed");
        path = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const TempDir& dir, const std::string& args) {
    const std::string out_path = dir.file("_stdout.txt");
    const std::string err_path = dir.file("_stderr.txt");
    const std::string cmd = std::string(SCSA_CLI_PATH) + " " + args + " >" +
                            out_path + " 2>" + err_path;
    const int raw = std::system(cmd.c_str());
    CliResult res;
    if (raw != -1 && WIFEXITED(raw)) res.code = WEXITSTATUS(raw);
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    return res;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

scsa::ColorImage gray_image(const Eigen::MatrixXd& m01) {
    return scsa::ColorImage{m01, m01, m01};
}

// First JSON document on stdout (the CLI prints one per line).
json first_json_line(const std::string& text) {
    const auto lines = lines_of(text);
    REQUIRE(!lines.empty());
    return json::parse(lines[0]);
}

}  // namespace

TEST_CASE("png round trip is a quantization") {
    TempDir dir;
    scsa::RngStream rng = scsa::RngStream::derive(91, 0, 0, 0);
    const scsa::ColorImage img = fixtures::random_color(rng, 9, 13);
    const std::string path = dir.file("rt.png");
    scsa::write_image(path, img);
    const scsa::ColorImage back = scsa::read_image(path);
    REQUIRE(back.width() == 13);
    REQUIRE(back.height() == 9);
    const double err =
        std::max({(back.r - img.r).cwiseAbs().maxCoeff(),
                  (back.g - img.g).cwiseAbs().maxCoeff(),
                  (back.b - img.b).cwiseAbs().maxCoeff()});
    REQUIRE(err <= 0.5 / 255.0 + 1e-12);

    // A second pass through the codec is the identity on quantized data.
    const std::string path2 = dir.file("rt2.png");
    scsa::write_image(path2, back);
    const scsa::ColorImage twice = scsa::read_image(path2);
    REQUIRE(fixtures::same_bits(twice, back));
}

TEST_CASE("ppm and pgm round trips") {
    TempDir dir;
    scsa::RngStream rng = scsa::RngStream::derive(92, 0, 0, 0);
    const scsa::ColorImage img = fixtures::random_color(rng, 7, 5);
    scsa::write_image(dir.file("a.ppm"), img);
    const scsa::ColorImage back = scsa::read_image(dir.file("a.ppm"));
    REQUIRE((back.r - img.r).cwiseAbs().maxCoeff() <= 0.5 / 255.0 + 1e-12);

    // PGM stores the value channel; the reload is gray.
    scsa::write_image(dir.file("a.pgm"), img);
    const scsa::ColorImage gray = scsa::read_image(dir.file("a.pgm"));
    REQUIRE(fixtures::same_bits(gray.r, gray.g));
    REQUIRE(fixtures::same_bits(gray.r, gray.b));
    const Eigen::MatrixXd vmax = img.r.cwiseMax(img.g).cwiseMax(img.b);
    REQUIRE((gray.r - vmax).cwiseAbs().maxCoeff() <= 0.5 / 255.0 + 1e-12);

    REQUIRE_THROWS_AS(scsa::read_image(dir.file("missing.png")), scsa::IoError);
    REQUIRE_THROWS_AS(scsa::read_image(dir.file("a.bmp")), scsa::IoError);
}

TEST_CASE("box downsample shrinks to the cap and keeps constants") {
    const scsa::ColorImage flat =
        gray_image(Eigen::MatrixXd::Constant(6, 10, 0.25));
    const scsa::ColorImage small = scsa::box_downsample(flat, 3);
    REQUIRE(small.width() == 3);
    REQUIRE(small.height() == 2);
    REQUIRE(small.r.minCoeff() == 0.25);
    REQUIRE(small.r.maxCoeff() == 0.25);

    const scsa::ColorImage same = scsa::box_downsample(flat, 10);
    REQUIRE(fixtures::same_bits(same, flat));
    REQUIRE_THROWS_AS(scsa::box_downsample(flat, 0), std::invalid_argument);
}

TEST_CASE("reconstruct subcommand writes grayscale output and a summary") {
    TempDir dir;
    scsa::write_image(dir.file("in.png"),
                      gray_image((fixtures::smooth(16) / 255.0).matrix()));
    const CliResult res = run_cli(
        dir, "reconstruct --input " + dir.file("in.png") + " --output " +
                 dir.file("out.png") + " --h 2 --gamma 4");
    CAPTURE(res.err);
    REQUIRE(res.code == 0);
    REQUIRE(fs::exists(dir.file("out.png")));

    const json rep = first_json_line(res.out);
    REQUIRE(rep.contains("mse"));
    REQUIRE(rep.contains("psnr"));
    REQUIRE(rep.contains("ssim"));

    const scsa::ColorImage out = scsa::read_image(dir.file("out.png"));
    REQUIRE(fixtures::same_bits(out.r, out.g));
    REQUIRE(fixtures::same_bits(out.r, out.b));
}

TEST_CASE("reconstruct of a black image is black with zero error") {
    TempDir dir;
    scsa::write_image(dir.file("in.png"),
                      gray_image(Eigen::MatrixXd::Zero(16, 16)));
    const CliResult res = run_cli(
        dir, "reconstruct --input " + dir.file("in.png") + " --output " +
                 dir.file("out.png") + " --h 1 --gamma 4");
    REQUIRE(res.code == 0);
    const json rep = first_json_line(res.out);
    REQUIRE(rep["mse"].get<double>() == 0.0);
    REQUIRE(rep["psnr"].get<std::string>() == "inf");
    const scsa::ColorImage out = scsa::read_image(dir.file("out.png"));
    REQUIRE(out.r.maxCoeff() == 0.0);
}

TEST_CASE("reconstruct gamma changes the output") {
    TempDir dir;
    scsa::write_image(dir.file("in.png"),
                      gray_image((fixtures::smooth(16) / 255.0).matrix()));
    const std::string base = "reconstruct --input " + dir.file("in.png");
    REQUIRE(run_cli(dir, base + " --output " + dir.file("g1.png") +
                             " --h 2 --gamma 1").code == 0);
    REQUIRE(run_cli(dir, base + " --output " + dir.file("g8.png") +
                             " --h 2 --gamma 8").code == 0);
    const scsa::ColorImage a = scsa::read_image(dir.file("g1.png"));
    const scsa::ColorImage b = scsa::read_image(dir.file("g8.png"));
    REQUIRE((a.r - b.r).cwiseAbs().maxCoeff() > 1.0 / 255.0);
}

TEST_CASE("enhance subcommand emits image, sidecar, and histogram") {
    TempDir dir;
    scsa::write_image(dir.file("in.png"), fixtures::low_contrast(24));
    const std::string cmd = "enhance --input " + dir.file("in.png") +
                            " --output " + dir.file("out.png") +
                            " --h 2 --gammas '3;5' --k 2 --seed 4";
    const CliResult res = run_cli(dir, cmd);
    CAPTURE(res.err);
    REQUIRE(res.code == 0);
    REQUIRE(fs::exists(dir.file("out.png")));

    const json side = json::parse(slurp(dir.file("out.png.json")));
    REQUIRE(side["command"] == "enhance");
    REQUIRE(side["params"]["h"].get<double>() == 2.0);
    REQUIRE(side["params"]["gammas"] == json::array({3.0, 5.0}));
    REQUIRE(side["params"]["k"].get<int>() == 2);
    REQUIRE(side["centers"].size() == 2);
    REQUIRE(side["degenerate"].get<bool>() == false);
    for (const char* key :
         {"mse", "psnr", "ambe", "entropy", "ssim", "gmsd", "fsim", "pcqi"})
        REQUIRE(side["metrics"].contains(key));
    REQUIRE(side.contains("entropy_input"));
    REQUIRE(side.contains("entropy_gain"));
    REQUIRE(side["resize"]["applied"].get<bool>() == false);

    const auto hist = lines_of(slurp(dir.file("out.png.hist.csv")));
    REQUIRE(hist.size() == 257);
    REQUIRE(hist[0] == "bin,count_before,count_after");
    std::uint64_t before_total = 0;
    for (std::size_t i = 1; i < hist.size(); ++i) {
        std::stringstream row(hist[i]);
        std::string bin, cb, ca;
        std::getline(row, bin, ',');
        std::getline(row, cb, ',');
        std::getline(row, ca, ',');
        REQUIRE(bin == std::to_string(i - 1));
        before_total += std::stoull(cb);
    }
    REQUIRE(before_total == 24u * 24u);

    // stdout repeats the metrics object.
    const json head = first_json_line(res.out);
    REQUIRE(head.contains("ssim"));

    // A rerun is byte-identical, image and sidecar params alike.
    REQUIRE(run_cli(dir, "enhance --input " + dir.file("in.png") +
                             " --output " + dir.file("out2.png") +
                             " --h 2 --gammas '3;5' --k 2 --seed 4").code == 0);
    REQUIRE(slurp(dir.file("out.png")) == slurp(dir.file("out2.png")));
    const json side2 = json::parse(slurp(dir.file("out2.png.json")));
    REQUIRE(side["params"] == side2["params"]);
    REQUIRE(side["metrics"] == side2["metrics"]);
    REQUIRE(side["centers"] == side2["centers"]);
}

TEST_CASE("enhance matches the library call it wraps") {
    TempDir dir;
    scsa::write_image(dir.file("in.png"), fixtures::low_contrast(20));
    REQUIRE(run_cli(dir, "enhance --input " + dir.file("in.png") +
                             " --output " + dir.file("cli.png") +
                             " --h 2 --gammas 4 --k 1 --seed 9").code == 0);

    const scsa::ColorImage in = scsa::read_image(dir.file("in.png"));
    scsa::EnhanceConfig cfg;
    cfg.h = 2.0;
    cfg.gammas = {4.0};
    cfg.k = 1;
    cfg.seed = 9;
    const scsa::EnhancedResult lib = scsa::enhance(in, cfg);
    scsa::write_image(dir.file("lib.png"), lib.image);
    REQUIRE(slurp(dir.file("cli.png")) == slurp(dir.file("lib.png")));
}

TEST_CASE("metrics subcommand reports identity and symmetry-breaking cases") {
    TempDir dir;
    scsa::write_image(dir.file("a.png"), fixtures::low_contrast(16));
    scsa::RngStream rng = scsa::RngStream::derive(93, 0, 0, 0);
    scsa::write_image(dir.file("b.png"), fixtures::random_color(rng, 16, 16));

    const CliResult self = run_cli(dir, "metrics --ref " + dir.file("a.png") +
                                            " --test " + dir.file("a.png") +
                                            " --report " + dir.file("m.json"));
    REQUIRE(self.code == 0);
    const auto out_lines = lines_of(self.out);
    REQUIRE(out_lines.size() == 3);
    const json m = json::parse(out_lines[0]);
    REQUIRE(m["mse"].get<double>() == 0.0);
    REQUIRE(m["psnr"].get<std::string>() == "inf");
    REQUIRE(m["ssim"].get<double>() == 1.0);
    REQUIRE(out_lines[1] == "mse,psnr,ambe,entropy,ssim,gmsd,fsim,pcqi");
    REQUIRE(out_lines[2].rfind("0,inf,0,", 0) == 0);
    REQUIRE(json::parse(slurp(dir.file("m.json")))["psnr"] == "inf");

    const CliResult diff = run_cli(dir, "metrics --ref " + dir.file("a.png") +
                                            " --test " + dir.file("b.png"));
    REQUIRE(diff.code == 0);
    const json md = first_json_line(diff.out);
    REQUIRE(md["mse"].get<double>() > 0.0);
    REQUIRE(md["psnr"].is_number());

    scsa::write_image(dir.file("c.png"), fixtures::low_contrast(12));
    const CliResult bad = run_cli(dir, "metrics --ref " + dir.file("a.png") +
                                           " --test " + dir.file("c.png"));
    REQUIRE(bad.code == 2);
    REQUIRE(bad.err.find("differ in size") != std::string::npos);
}

TEST_CASE("optimize subcommand reports a front and a selection") {
    TempDir dir;
    scsa::write_image(dir.file("in.png"), fixtures::low_contrast(16));
    const std::string cmd = "optimize --input " + dir.file("in.png") +
                            " --output " + dir.file("out.png") + " --report " +
                            dir.file("rep.json") +
                            " --k 2 --population 6 --generations 2 --seed 7";
    const CliResult res = run_cli(dir, cmd);
    CAPTURE(res.err);
    REQUIRE(res.code == 0);
    REQUIRE(fs::exists(dir.file("out.png")));

    const json rep = json::parse(slurp(dir.file("rep.json")));
    REQUIRE(rep["command"] == "optimize");
    REQUIRE(!rep["front"].empty());
    for (const auto& m : rep["front"]) {
        REQUIRE(m.contains("h"));
        REQUIRE(m["gammas"].size() == 2);
        REQUIRE(m.contains("j1"));
        REQUIRE(m.contains("j2"));
    }
    REQUIRE(rep["selected_index"].get<std::size_t>() < rep["front"].size());
    REQUIRE(rep["selected"]["gammas"].size() == 2);
    REQUIRE(rep["silhouette"]["selected_k"].get<int>() == 2);
    REQUIRE(rep["centers"].size() == 2);
    REQUIRE(rep["metrics"].contains("fsim"));

    const json head = first_json_line(res.out);
    REQUIRE(head.contains("h"));

    // Same seed, same report.
    REQUIRE(run_cli(dir, "optimize --input " + dir.file("in.png") +
                             " --report " + dir.file("rep2.json") +
                             " --k 2 --population 6 --generations 2 --seed 7")
                .code == 0);
    const json rep2 = json::parse(slurp(dir.file("rep2.json")));
    REQUIRE(rep["front"] == rep2["front"]);
    REQUIRE(rep["selected"] == rep2["selected"]);
}

TEST_CASE("batch subcommand aggregates a directory") {
    TempDir dir;
    fs::create_directories(dir.file("imgs"));
    scsa::write_image(dir.file("imgs/a.png"), fixtures::low_contrast(12));
    scsa::write_image(dir.file("imgs/b.png"), fixtures::low_contrast(14));
    scsa::RngStream rng = scsa::RngStream::derive(94, 0, 0, 0);
    scsa::write_image(dir.file("imgs/c.png"), fixtures::random_color(rng, 12, 12));
    std::ofstream(dir.file("imgs/garbage.png")) << "not a png";
    std::ofstream(dir.file("imgs/notes.txt")) << "ignored";

    const CliResult res = run_cli(
        dir, "batch --input-dir " + dir.file("imgs") + " --output-dir " +
                 dir.file("outs") + " --report " + dir.file("rep.csv") +
                 " --h 2 --gammas '3;5' --k 2 --seed 3");
    CAPTURE(res.err);
    REQUIRE(res.code == 0);
    REQUIRE(res.err.find("garbage.png") != std::string::npos);

    const auto csv = lines_of(slurp(dir.file("rep.csv")));
    REQUIRE(csv.size() == 5);  // header + 3 rows + mean
    REQUIRE(csv[0] == "image,mse,psnr,ambe,entropy,ssim,gmsd,fsim,pcqi,h,gammas,k");
    REQUIRE(csv[1].rfind("a.png,", 0) == 0);
    REQUIRE(csv[2].rfind("b.png,", 0) == 0);
    REQUIRE(csv[3].rfind("c.png,", 0) == 0);
    REQUIRE(csv[4].rfind("mean,", 0) == 0);

    const json rep = json::parse(slurp(dir.file("rep.json")));
    REQUIRE(rep["rows"].size() == 3);
    REQUIRE(rep["failures"].size() == 1);
    REQUIRE(rep["failures"][0]["image"] == "garbage.png");
    REQUIRE(rep.contains("aggregate"));

    for (const char* name : {"a.png", "b.png", "c.png"})
        REQUIRE(fs::exists(dir.path / "outs" / name));
    REQUIRE(!fs::exists(dir.path / "outs" / "garbage.png"));
}

TEST_CASE("batch with no usable image fails") {
    TempDir dir;
    fs::create_directories(dir.file("imgs"));
    std::ofstream(dir.file("imgs/x.png")) << "junk";
    const CliResult res = run_cli(
        dir, "batch --input-dir " + dir.file("imgs") + " --h 2 --gammas 3 --k 1");
    REQUIRE(res.code == 1);

    const CliResult empty = run_cli(dir, "batch --input-dir " + dir.file("imgs") +
                                             "_missing");
    REQUIRE(empty.code == 3);
}

TEST_CASE("config file fills unset options and flags win") {
    TempDir dir;
    scsa::write_image(dir.file("in.png"),
                      gray_image((fixtures::smooth(12) / 255.0).matrix()));
    std::ofstream(dir.file("cfg.json")) << R"({"h": 3.0, "gamma": 2.0})";

    const std::string in = " --input " + dir.file("in.png");
    REQUIRE(run_cli(dir, "reconstruct" + in + " --output " + dir.file("a.png") +
                             " --config " + dir.file("cfg.json")).code == 0);
    REQUIRE(run_cli(dir, "reconstruct" + in + " --output " + dir.file("b.png") +
                             " --h 3 --gamma 2").code == 0);
    REQUIRE(slurp(dir.file("a.png")) == slurp(dir.file("b.png")));

    REQUIRE(run_cli(dir, "reconstruct" + in + " --output " + dir.file("c.png") +
                             " --h 5 --config " + dir.file("cfg.json")).code == 0);
    REQUIRE(run_cli(dir, "reconstruct" + in + " --output " + dir.file("d.png") +
                             " --h 5 --gamma 2").code == 0);
    REQUIRE(slurp(dir.file("c.png")) == slurp(dir.file("d.png")));
    REQUIRE(slurp(dir.file("a.png")) != slurp(dir.file("c.png")));

    std::ofstream(dir.file("bad.json")) << "{nope";
    REQUIRE(run_cli(dir, "reconstruct" + in + " --output " + dir.file("e.png") +
                             " --config " + dir.file("bad.json")).code == 3);
}

TEST_CASE("exit codes distinguish usage, io, and validation failures") {
    TempDir dir;
    scsa::write_image(dir.file("in.png"),
                      gray_image(Eigen::MatrixXd::Constant(8, 8, 0.5)));

    REQUIRE(run_cli(dir, "").code == 2);            // missing subcommand
    REQUIRE(run_cli(dir, "reconstruct").code == 2); // missing required options
    REQUIRE(run_cli(dir, "reconstruct --nope").code == 2);

    const CliResult missing = run_cli(
        dir, "reconstruct --input " + dir.file("absent.png") + " --output " +
                 dir.file("o.png"));
    REQUIRE(missing.code == 3);
    REQUIRE(missing.err.find("cannot open") != std::string::npos);

    std::ofstream(dir.file("in.txt")) << "text";
    REQUIRE(run_cli(dir, "reconstruct --input " + dir.file("in.txt") +
                             " --output " + dir.file("o.png")).code == 3);

    REQUIRE(run_cli(dir, "reconstruct --input " + dir.file("in.png") +
                             " --output /nonexistent_dir_scsa/o.png").code == 3);

    const CliResult badg = run_cli(
        dir, "enhance --input " + dir.file("in.png") + " --output " +
                 dir.file("o.png") + " --gammas '3;x' --k 2");
    REQUIRE(badg.code == 2);

    REQUIRE(run_cli(dir, "enhance --input " + dir.file("in.png") + " --output " +
                             dir.file("o.png") + " --gammas '3;5' --k nope")
                .code == 2);
}
