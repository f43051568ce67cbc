// Command-line front end: reconstruct | enhance | metrics | optimize | batch.
// Exit codes: 0 success, 1 whole-batch failure, 2 usage, 3 I/O, 4 numeric.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scsa/scsa.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBatchFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json json_num(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

std::string join_gammas(const std::vector<double>& gs) {
    std::string out;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (i) out += ';';
        out += fmt(gs[i]);
    }
    return out;
}

json metrics_json(const scsa::MetricsReport& m) {
    return json{{"mse", json_num(m.mse)},       {"psnr", json_num(m.psnr)},
                {"ambe", json_num(m.ambe)},     {"entropy", json_num(m.entropy)},
                {"ssim", json_num(m.ssim)},     {"gmsd", json_num(m.gmsd)},
                {"fsim", json_num(m.fsim)},     {"pcqi", json_num(m.pcqi)}};
}

std::string metrics_csv_row(const scsa::MetricsReport& m) {
    std::string out;
    for (double v : {m.mse, m.psnr, m.ambe, m.entropy, m.ssim, m.gmsd, m.fsim,
                     m.pcqi}) {
        if (!out.empty()) out += ',';
        out += fmt(v);
    }
    return out;
}

struct Options {
    std::string input;
    std::string output;
    std::string report;
    std::string histogram;
    std::string config_path;
    double h = 1.0;
    double gamma = 4.0;
    std::string gammas = "auto";
    std::string k = "auto";
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    int max_dim = 512;
    int population = 20;
    int generations = 10;
    double crossover_prob = 0.2;
    double mutation_prob = 0.5;
    double eta_c = 15.0;
    double eta_m = 20.0;
    int k_min = 2;
    int k_max = 6;
    bool global_ssim = false;
};

// Parses "a;b" or "a,b" into gammas; "auto" yields an empty list.
std::vector<double> parse_gammas(const std::string& s) {
    if (s == "auto") return {};
    std::vector<double> out;
    std::string item;
    std::string norm = s;
    std::replace(norm.begin(), norm.end(), ';', ',');
    std::stringstream ns(norm);
    while (std::getline(ns, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size())
            throw CLI::ValidationError("--gammas", "bad gamma value: " + item);
        out.push_back(v);
    }
    if (out.empty())
        throw CLI::ValidationError("--gammas", "no gamma values given");
    return out;
}

std::optional<int> parse_k(const std::string& s) {
    if (s == "auto") return std::nullopt;
    std::size_t pos = 0;
    const int k = std::stoi(s, &pos, 10);
    if (pos != s.size() || k < 1)
        throw CLI::ValidationError("--k", "expected a positive integer or 'auto'");
    return k;
}

// Config file < flags. Values present in the JSON file replace defaults for
// options the user did not pass on the command line.
void apply_config(CLI::App* cmd, Options& opt) {
    if (opt.config_path.empty()) return;
    std::ifstream in(opt.config_path);
    if (!in) throw scsa::IoError("cannot open config " + opt.config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw scsa::IoError("bad config JSON: " + std::string(e.what()));
    }
    auto set_if_unset = [&](const char* flag, const char* key, auto& target) {
        const CLI::Option* o = cmd->get_option_no_throw(flag);
        if (o && o->count() > 0) return;
        if (!cfg.contains(key)) return;
        using T = std::decay_t<decltype(target)>;
        target = cfg.at(key).get<T>();
    };
    set_if_unset("--h", "h", opt.h);
    set_if_unset("--gamma", "gamma", opt.gamma);
    set_if_unset("--seed", "seed", opt.seed);
    set_if_unset("--jobs", "jobs", opt.jobs);
    set_if_unset("--max-dim", "max_dim", opt.max_dim);
    set_if_unset("--population", "population", opt.population);
    set_if_unset("--generations", "generations", opt.generations);
    set_if_unset("--crossover-prob", "crossover_prob", opt.crossover_prob);
    set_if_unset("--mutation-prob", "mutation_prob", opt.mutation_prob);
    set_if_unset("--eta-c", "eta_c", opt.eta_c);
    set_if_unset("--eta-m", "eta_m", opt.eta_m);
    set_if_unset("--k-min", "k_min", opt.k_min);
    set_if_unset("--k-max", "k_max", opt.k_max);
    set_if_unset("--global-ssim", "global_ssim", opt.global_ssim);
    // k and gammas accept either native JSON types or strings.
    const CLI::Option* ko = cmd->get_option_no_throw("--k");
    if (ko && ko->count() == 0 && cfg.contains("k")) {
        const auto& v = cfg.at("k");
        opt.k = v.is_string() ? v.get<std::string>() : std::to_string(v.get<int>());
    }
    const CLI::Option* go = cmd->get_option_no_throw("--gammas");
    if (go && go->count() == 0 && cfg.contains("gammas")) {
        const auto& v = cfg.at("gammas");
        if (v.is_string()) {
            opt.gammas = v.get<std::string>();
        } else {
            std::string joined;
            for (const auto& g : v) {
                if (!joined.empty()) joined += ';';
                joined += fmt(g.get<double>());
            }
            opt.gammas = joined;
        }
    }
}

json effective_config(const Options& opt) {
    return json{{"h", opt.h},
                {"gamma", opt.gamma},
                {"gammas", opt.gammas},
                {"k", opt.k},
                {"seed", opt.seed},
                {"jobs", opt.jobs},
                {"max_dim", opt.max_dim},
                {"population", opt.population},
                {"generations", opt.generations},
                {"crossover_prob", opt.crossover_prob},
                {"mutation_prob", opt.mutation_prob},
                {"eta_c", opt.eta_c},
                {"eta_m", opt.eta_m},
                {"k_min", opt.k_min},
                {"k_max", opt.k_max},
                {"global_ssim", opt.global_ssim}};
}

scsa::GaConfig ga_config(const Options& opt) {
    scsa::GaConfig cfg;
    cfg.population_size = opt.population;
    cfg.generations = opt.generations;
    cfg.crossover_prob = opt.crossover_prob;
    cfg.mutation_prob = opt.mutation_prob;
    cfg.eta_c = opt.eta_c;
    cfg.eta_m = opt.eta_m;
    cfg.seed = opt.seed;
    cfg.global_ssim = opt.global_ssim;
    cfg.jobs = opt.jobs;
    return cfg;
}

scsa::EnhanceConfig enhance_config(const Options& opt) {
    scsa::EnhanceConfig cfg;
    cfg.h = opt.h;
    cfg.gammas = parse_gammas(opt.gammas);
    cfg.k = parse_k(opt.k);
    cfg.k_min = opt.k_min;
    cfg.k_max = opt.k_max;
    cfg.seed = opt.seed;
    cfg.jobs = opt.jobs;
    return cfg;
}

struct LoadedImage {
    scsa::ColorImage image;
    json resize;
};

LoadedImage load_input(const std::string& path, int max_dim) {
    const scsa::ColorImage original = scsa::read_image(path);
    const scsa::ColorImage processed = scsa::box_downsample(original, max_dim);
    const bool applied = processed.width() != original.width() ||
                         processed.height() != original.height();
    json resize{{"applied", applied},
                {"original", {original.width(), original.height()}},
                {"processed", {processed.width(), processed.height()}}};
    return LoadedImage{processed, std::move(resize)};
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw scsa::IoError("cannot write " + path);
    out << body;
    if (!out) throw scsa::IoError("short write to " + path);
}

void write_histogram_csv(const std::string& path, const Eigen::MatrixXd& before,
                         const Eigen::MatrixXd& after) {
    const auto hb = scsa::histogram256(before);
    const auto ha = scsa::histogram256(after);
    std::string body = "bin,count_before,count_after\n";
    for (int i = 0; i < 256; ++i) {
        body += std::to_string(i);
        body += ',';
        body += std::to_string(hb[static_cast<std::size_t>(i)]);
        body += ',';
        body += std::to_string(ha[static_cast<std::size_t>(i)]);
        body += '\n';
    }
    write_text(path, body);
}

json front_json(const scsa::ParetoFront& front) {
    json arr = json::array();
    for (const auto& m : front)
        arr.push_back(json{{"h", m.chrom.h},
                           {"gammas", m.chrom.gammas},
                           {"j1", json_num(m.obj.j1)},
                           {"j2", json_num(m.obj.j2)}});
    return arr;
}

// reconstruct: uniform-gamma SCSA of the value channel, written as grayscale.
int cmd_reconstruct(const Options& opt) {
    const LoadedImage in = load_input(opt.input, opt.max_dim);
    const Eigen::MatrixXd v = scsa::luminance(in.image);
    scsa::GammaField field{
        Eigen::MatrixXd::Constant(v.rows(), v.cols(), opt.gamma)};
    const Eigen::MatrixXd rec =
        scsa::reconstruct_with_field(v, opt.h, field, opt.jobs);
    const Eigen::MatrixXd clipped = rec.cwiseMin(255.0).cwiseMax(0.0) / 255.0;
    scsa::ColorImage out{clipped, clipped, clipped};
    scsa::write_image(opt.output, out);
    json rep{{"mse", json_num(scsa::mse(rec, v))},
             {"psnr", json_num(scsa::psnr(rec, v))},
             {"ssim", json_num(scsa::ssim(rec, v))}};
    std::cout << rep.dump() << "\n";
    return kExitOk;
}

int cmd_enhance(const Options& opt) {
    const LoadedImage in = load_input(opt.input, opt.max_dim);
    const scsa::EnhanceConfig ec = enhance_config(opt);
    json sidecar{{"command", "enhance"},
                 {"input", opt.input},
                 {"output", opt.output},
                 {"config", effective_config(opt)},
                 {"resize", in.resize}};

    scsa::EnhancedResult result;
    if (ec.gammas.empty()) {
        scsa::AutoResult auto_res = scsa::enhance_auto(in.image, ec, ga_config(opt));
        result = std::move(auto_res.result);
        sidecar["front"] = front_json(auto_res.front);
        sidecar["selected_index"] = auto_res.selected.index;
        result.h = auto_res.selected.chrom.h;
        result.gammas = auto_res.selected.chrom.gammas;
    } else {
        result = scsa::enhance(in.image, ec);
    }

    scsa::write_image(opt.output, result.image);

    const double entropy_in = scsa::entropy(in.image);
    sidecar["params"] = json{{"h", result.h},
                             {"gammas", result.gammas},
                             {"k", result.clusters.k}};
    sidecar["centers"] = result.clusters.centers;
    sidecar["degenerate"] = result.degenerate;
    sidecar["metrics"] = metrics_json(result.metrics);
    sidecar["entropy_input"] = json_num(entropy_in);
    sidecar["entropy_gain"] = json_num(result.metrics.entropy - entropy_in);

    const std::string report_path =
        opt.report.empty() ? opt.output + ".json" : opt.report;
    write_text(report_path, sidecar.dump(2) + "\n");

    const std::string hist_path =
        opt.histogram.empty() ? opt.output + ".hist.csv" : opt.histogram;
    const Eigen::MatrixXd v_before = scsa::luminance(in.image) / 255.0;
    const Eigen::MatrixXd v_after = scsa::luminance(result.image) / 255.0;
    write_histogram_csv(hist_path, v_before, v_after);

    std::cout << sidecar["metrics"].dump() << "\n";
    return kExitOk;
}

int cmd_metrics(const Options& opt, const std::string& test_path) {
    const scsa::ColorImage ref = scsa::read_image(opt.input);
    const scsa::ColorImage test = scsa::read_image(test_path);
    if (ref.width() != test.width() || ref.height() != test.height())
        throw std::invalid_argument("metrics: images differ in size");
    const scsa::MetricsReport m = scsa::compute_metrics(ref, test);
    std::cout << metrics_json(m).dump() << "\n";
    std::cout << "mse,psnr,ambe,entropy,ssim,gmsd,fsim,pcqi\n";
    std::cout << metrics_csv_row(m) << "\n";
    if (!opt.report.empty()) {
        write_text(opt.report, metrics_json(m).dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_optimize(const Options& opt) {
    const LoadedImage in = load_input(opt.input, opt.max_dim);
    const scsa::EnhanceConfig ec = enhance_config(opt);
    scsa::AutoResult res = scsa::enhance_auto(in.image, ec, ga_config(opt));
    json rep{{"command", "optimize"},
             {"input", opt.input},
             {"config", effective_config(opt)},
             {"resize", in.resize},
             {"front", front_json(res.front)},
             {"selected_index", res.selected.index},
             {"selected",
              json{{"h", res.selected.chrom.h},
                   {"gammas", res.selected.chrom.gammas},
                   {"j1", json_num(res.selected.obj.j1)},
                   {"j2", json_num(res.selected.obj.j2)}}},
             {"centers", res.result.clusters.centers},
             {"degenerate", res.result.degenerate},
             {"metrics", metrics_json(res.result.metrics)}};
    json cand = json::array();
    for (const auto& [k, score] : res.silhouette.candidates)
        cand.push_back(json{{"k", k}, {"score", score}});
    rep["silhouette"] = json{{"candidates", cand},
                             {"selected_k", res.result.clusters.k}};
    if (!opt.output.empty()) scsa::write_image(opt.output, res.result.image);
    if (!opt.report.empty()) write_text(opt.report, rep.dump(2) + "\n");
    std::cout << rep["selected"].dump() << "\n";
    return kExitOk;
}

struct BatchRow {
    std::string name;
    bool ok = false;
    std::string error;
    scsa::MetricsReport metrics;
    double h = 0.0;
    std::vector<double> gammas;
    int k = 0;
};

int cmd_batch(const Options& opt, const std::string& output_dir) {
    std::vector<fs::path> inputs;
    if (!fs::is_directory(opt.input))
        throw scsa::IoError("not a directory: " + opt.input);
    for (const auto& entry : fs::directory_iterator(opt.input)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png" || ext == ".ppm" || ext == ".pgm")
            inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) throw scsa::IoError("no images in " + opt.input);
    if (!output_dir.empty()) fs::create_directories(output_dir);

    std::vector<BatchRow> rows(inputs.size());
    scsa::parallel_for(inputs.size(), [&](std::size_t idx) {
        BatchRow& row = rows[idx];
        row.name = inputs[idx].filename().string();
        try {
            Options local = opt;
            local.jobs = 1;
            const LoadedImage in = load_input(inputs[idx].string(), opt.max_dim);
            const scsa::EnhanceConfig ec = enhance_config(local);
            scsa::EnhancedResult result;
            if (ec.gammas.empty()) {
                scsa::AutoResult ar = scsa::enhance_auto(in.image, ec, ga_config(local));
                result = std::move(ar.result);
                result.h = ar.selected.chrom.h;
                result.gammas = ar.selected.chrom.gammas;
            } else {
                result = scsa::enhance(in.image, ec);
            }
            if (!output_dir.empty()) {
                const fs::path out_path =
                    fs::path(output_dir) / inputs[idx].filename();
                scsa::write_image(out_path.string(), result.image);
            }
            row.metrics = result.metrics;
            row.h = result.h;
            row.gammas = result.gammas;
            row.k = result.clusters.k;
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }, opt.jobs);

    std::size_t succeeded = 0;
    for (const auto& r : rows)
        if (r.ok) ++succeeded;

    std::string csv = "image,mse,psnr,ambe,entropy,ssim,gmsd,fsim,pcqi,h,gammas,k\n";
    json jrows = json::array();
    json failures = json::array();
    scsa::MetricsReport agg;
    double agg_h = 0.0;
    bool psnr_inf = false;
    for (const auto& r : rows) {
        if (!r.ok) {
            failures.push_back(json{{"image", r.name}, {"error", r.error}});
            std::cerr << "batch: " << r.name << " failed: " << r.error << "\n";
            continue;
        }
        csv += r.name + "," + metrics_csv_row(r.metrics) + "," + fmt(r.h) + "," +
               join_gammas(r.gammas) + "," + std::to_string(r.k) + "\n";
        jrows.push_back(json{{"image", r.name},
                             {"metrics", metrics_json(r.metrics)},
                             {"h", r.h},
                             {"gammas", r.gammas},
                             {"k", r.k}});
        agg.mse += r.metrics.mse;
        if (std::isinf(r.metrics.psnr)) psnr_inf = true;
        else agg.psnr += r.metrics.psnr;
        agg.ambe += r.metrics.ambe;
        agg.entropy += r.metrics.entropy;
        agg.ssim += r.metrics.ssim;
        agg.gmsd += r.metrics.gmsd;
        agg.fsim += r.metrics.fsim;
        agg.pcqi += r.metrics.pcqi;
        agg_h += r.h;
    }
    if (succeeded > 0) {
        const double n = static_cast<double>(succeeded);
        agg.mse /= n;
        agg.psnr = psnr_inf ? std::numeric_limits<double>::infinity()
                            : agg.psnr / n;
        agg.ambe /= n;
        agg.entropy /= n;
        agg.ssim /= n;
        agg.gmsd /= n;
        agg.fsim /= n;
        agg.pcqi /= n;
        agg_h /= n;
        csv += "mean," + metrics_csv_row(agg) + "," + fmt(agg_h) + ",,\n";
    }

    json report{{"command", "batch"},
                {"input", opt.input},
                {"config", effective_config(opt)},
                {"rows", jrows},
                {"failures", failures}};
    if (succeeded > 0)
        report["aggregate"] = json{{"metrics", metrics_json(agg)}, {"h", agg_h}};

    if (!opt.report.empty()) {
        write_text(opt.report, csv);
        fs::path jpath(opt.report);
        jpath.replace_extension(".json");
        write_text(jpath.string(), report.dump(2) + "\n");
    } else {
        std::cout << csv;
    }
    return succeeded == 0 ? kExitBatchFailed : kExitOk;
}

void add_common(CLI::App* cmd, Options& opt, bool with_ga) {
    cmd->add_option("--config", opt.config_path, "JSON config file");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--jobs", opt.jobs, "worker threads (0 = logical cores)");
    cmd->add_option("--max-dim", opt.max_dim, "box-downsample above this size")
        ->check(CLI::PositiveNumber);
    if (with_ga) {
        cmd->add_option("--population", opt.population)->check(CLI::PositiveNumber);
        cmd->add_option("--generations", opt.generations)->check(CLI::PositiveNumber);
        cmd->add_option("--crossover-prob", opt.crossover_prob);
        cmd->add_option("--mutation-prob", opt.mutation_prob);
        cmd->add_option("--eta-c", opt.eta_c);
        cmd->add_option("--eta-m", opt.eta_m);
        cmd->add_option("--k-min", opt.k_min)->check(CLI::PositiveNumber);
        cmd->add_option("--k-max", opt.k_max)->check(CLI::PositiveNumber);
        cmd->add_flag("--global-ssim", opt.global_ssim,
                      "use the whole-image SSIM as the GA objective");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schrodinger-spectrum image contrast enhancement"};
    app.require_subcommand(1);
    // --h is the semi-classical parameter, so help must not claim -h.
    app.set_help_flag("--help", "print help and exit");
    Options opt;
    std::string test_path;
    std::string output_dir;

    CLI::App* rec = app.add_subcommand("reconstruct", "uniform-gamma SCSA reconstruction");
    rec->set_help_flag("--help", "print help and exit");
    rec->add_option("--input", opt.input)->required();
    rec->add_option("--output", opt.output)->required();
    rec->add_option("--h", opt.h, "semi-classical parameter");
    rec->add_option("--gamma", opt.gamma, "eigenvalue exponent");
    add_common(rec, opt, false);

    CLI::App* enh = app.add_subcommand("enhance", "gamma-SCSA contrast enhancement");
    enh->set_help_flag("--help", "print help and exit");
    enh->add_option("--input", opt.input)->required();
    enh->add_option("--output", opt.output)->required();
    enh->add_option("--h", opt.h, "semi-classical parameter");
    enh->add_option("--gammas", opt.gammas, "per-cluster gammas, e.g. 4;7.5, or 'auto'");
    enh->add_option("--k", opt.k, "cluster count or 'auto'");
    enh->add_option("--report", opt.report, "sidecar JSON path (default <output>.json)");
    enh->add_option("--histogram", opt.histogram,
                    "value-histogram CSV path (default <output>.hist.csv)");
    add_common(enh, opt, true);

    CLI::App* met = app.add_subcommand("metrics", "eight-metric comparison");
    met->set_help_flag("--help", "print help and exit");
    met->add_option("--ref", opt.input)->required();
    met->add_option("--test", test_path)->required();
    met->add_option("--report", opt.report, "optional JSON output path");

    CLI::App* optm = app.add_subcommand("optimize", "NSGA-II parameter search");
    optm->set_help_flag("--help", "print help and exit");
    optm->add_option("--input", opt.input)->required();
    optm->add_option("--output", opt.output, "write the selected enhancement here");
    optm->add_option("--k", opt.k, "cluster count or 'auto'");
    optm->add_option("--report", opt.report, "front + selection JSON");
    add_common(optm, opt, true);

    CLI::App* bat = app.add_subcommand("batch", "process a directory of images");
    bat->set_help_flag("--help", "print help and exit");
    bat->add_option("--input-dir", opt.input)->required();
    bat->add_option("--output-dir", output_dir, "write enhanced images here");
    bat->add_option("--report", opt.report, "CSV report path (JSON written alongside)");
    bat->add_option("--h", opt.h);
    bat->add_option("--gammas", opt.gammas);
    bat->add_option("--k", opt.k);
    add_common(bat, opt, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (rec->parsed()) {
            apply_config(rec, opt);
            return cmd_reconstruct(opt);
        }
        if (enh->parsed()) {
            apply_config(enh, opt);
            return cmd_enhance(opt);
        }
        if (met->parsed()) return cmd_metrics(opt, test_path);
        if (optm->parsed()) {
            apply_config(optm, opt);
            return cmd_optimize(opt);
        }
        if (bat->parsed()) {
            apply_config(bat, opt);
            return cmd_batch(opt, output_dir);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const scsa::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
