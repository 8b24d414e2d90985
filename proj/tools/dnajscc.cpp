// Command line front end for the DNA joint source-channel image codec:
// training, encoding to FASTA, channel simulation, decoding, evaluation,
// sequence statistics, and canned experiment sweeps.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dnajscc/dnajscc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dnajscc;

namespace {

std::string fmt(double v, int prec = 4) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(prec);
    ss << v;
    return ss.str();
}

void apply_json_config(TrainConfig& cfg, const json& j) {
    if (j.contains("c")) cfg.sys.c = j.at("c").get<int>();
    if (j.contains("v")) cfg.sys.v = j.at("v").get<int>();
    if (j.contains("d")) cfg.sys.d = j.at("d").get<int>();
    if (j.contains("s")) cfg.sys.s = j.at("s").get<int>();
    if (j.contains("alpha")) cfg.sys.alpha = j.at("alpha").get<double>();
    if (j.contains("gamma_train")) cfg.sys.gamma_train = j.at("gamma_train").get<double>();
    if (j.contains("seed")) cfg.sys.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("iterations")) cfg.iterations = j.at("iterations").get<int>();
    if (j.contains("batch_size")) cfg.batch_size = j.at("batch_size").get<int>();
    if (j.contains("lr_initial")) cfg.lr_initial = j.at("lr_initial").get<double>();
    if (j.contains("lr_final")) cfg.lr_final = j.at("lr_final").get<double>();
    if (j.contains("log_every")) cfg.log_every = j.at("log_every").get<int>();
    if (j.contains("metrics_path")) cfg.metrics_path = j.at("metrics_path").get<std::string>();
}

CodecModel train_model(const TrainConfig& cfg, const std::vector<ImageTensor>& train_images,
                       bool verbose) {
    CodecModel model(cfg.sys);
    Trainer trainer(model, cfg);
    if (verbose)
        std::cout << "training: c=" << cfg.sys.c << " (R=1/" << 3072 / cfg.sys.k() << "), alpha="
                  << cfg.sys.alpha << ", gamma=" << cfg.sys.gamma_train << ", v=" << cfg.sys.v
                  << ", iterations=" << cfg.iterations << ", batch=" << cfg.batch_size
                  << ", images=" << train_images.size() << ", seed=" << cfg.sys.seed << "\n";
    trainer.run(train_images, [&](const StepStats& st) {
        if (verbose && (st.iteration % static_cast<std::uint64_t>(cfg.log_every) == 0 ||
                        st.iteration + 1 == static_cast<std::uint64_t>(cfg.iterations)))
            std::cout << "  it " << st.iteration << "  lr " << st.lr << "  loss "
                      << fmt(st.loss.total, 5) << " (rq " << fmt(st.loss.reconstruction, 5)
                      << ", bc " << fmt(st.loss.constraint, 5) << ")  gc " << fmt(st.gc, 3)
                      << "  runs>5 " << fmt(st.frac_long_runs, 4) << "\n";
    });
    return model;
}

std::string model_cache_name(const TrainConfig& cfg, std::size_t train_images) {
    std::ostringstream ss;
    ss << "model_c" << cfg.sys.c << "_v" << cfg.sys.v << "_a" << cfg.sys.alpha << "_g"
       << cfg.sys.gamma_train << "_seed" << cfg.sys.seed << "_it" << cfg.iterations << "_n"
       << train_images << ".bin";
    return ss.str();
}

// Trains once per configuration; later invocations reload the checkpoint.
CodecModel obtain_model(const fs::path& cache_dir, const TrainConfig& cfg,
                        const std::vector<ImageTensor>& train_images, bool verbose) {
    fs::create_directories(cache_dir);
    const fs::path path = cache_dir / model_cache_name(cfg, train_images.size());
    if (fs::exists(path)) {
        if (verbose) std::cout << "reusing cached model " << path.string() << "\n";
        return load_checkpoint(path.string());
    }
    CodecModel model = train_model(cfg, train_images, verbose);
    save_checkpoint(path.string(), model);
    if (verbose) std::cout << "saved " << path.string() << "\n";
    return model;
}

std::map<std::uint64_t, std::vector<Strand>> group_by_sequence(const std::vector<Strand>& strands) {
    std::map<std::uint64_t, std::vector<Strand>> groups;
    for (const Strand& st : strands) groups[st.origin.sequence_id].push_back(st);
    return groups;
}

void print_bio(const RunStats& runs, std::ostream& out) {
    out << "nucleotides:      " << runs.total << "\n"
        << "GC fraction:      " << fmt(runs.gc_fraction(), 4) << "\n"
        << "longest run:      " << runs.longest << "\n"
        << "nt in runs > " << kMaxDesirableRun << ":   " << fmt(runs.frac_in_runs_longer_than(kMaxDesirableRun), 4)
        << "\n";
}

json bio_json(const RunStats& runs) {
    json hist = json::array();
    for (std::size_t len = 1; len < runs.run_length_hist.size(); ++len)
        if (runs.run_length_hist[len])
            hist.push_back({{"length", len}, {"count", runs.run_length_hist[len]}});
    return {{"nucleotides", runs.total},
            {"gc", runs.gc_fraction()},
            {"longest_run", runs.longest},
            {"frac_runs_gt_5", runs.frac_in_runs_longer_than(kMaxDesirableRun)},
            {"run_length_histogram", hist}};
}

ChannelConfig channel_for(const CodecModel& model, double gamma) {
    ChannelConfig chan;
    chan.gamma = gamma;
    chan.v = model.config().v;
    chan.s = model.config().s;
    chan.seed = model.config().seed;
    return chan;
}

// ---------------------------------------------------------------------------
// subcommand bodies

int cmd_train(const std::string& config_path, TrainConfig cfg, const std::string& dataset,
              std::size_t train_count, const std::string& out_path, CLI::App* sub) {
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open config " + config_path);
        TrainConfig from_file;
        apply_json_config(from_file, json::parse(in));
        // Values from the file become the baseline; explicit flags win.
        TrainConfig merged = from_file;
        auto keep = [&](const std::string& flag) { return sub->count(flag) > 0; };
        if (keep("--c")) merged.sys.c = cfg.sys.c;
        if (keep("--v")) merged.sys.v = cfg.sys.v;
        if (keep("--d")) merged.sys.d = cfg.sys.d;
        if (keep("--s")) merged.sys.s = cfg.sys.s;
        if (keep("--alpha")) merged.sys.alpha = cfg.sys.alpha;
        if (keep("--gamma")) merged.sys.gamma_train = cfg.sys.gamma_train;
        if (keep("--seed")) merged.sys.seed = cfg.sys.seed;
        if (keep("--iterations")) merged.iterations = cfg.iterations;
        if (keep("--batch")) merged.batch_size = cfg.batch_size;
        if (keep("--lr-initial")) merged.lr_initial = cfg.lr_initial;
        if (keep("--lr-final")) merged.lr_final = cfg.lr_final;
        if (keep("--log-every")) merged.log_every = cfg.log_every;
        if (keep("--metrics")) merged.metrics_path = cfg.metrics_path;
        cfg = merged;
    }

    const Corpus corpus = load_corpus(dataset, train_count, 0, cfg.sys.seed);
    std::cout << "dataset: " << corpus.source << " (" << corpus.train.size() << " train images)\n";
    CodecModel model = train_model(cfg, corpus.train, true);
    save_checkpoint(out_path, model);
    std::cout << "checkpoint written to " << out_path << "\n";
    return 0;
}

int cmd_encode(const std::string& model_path, const std::string& image_path,
               const std::string& out_path) {
    CodecModel model = load_checkpoint(model_path);
    const ImageTensor img = read_image(image_path);
    const NucleotideSequence z = model.encode(img);
    const std::vector<Strand> strands = segment(z, model.config().s, 0);
    write_fasta_file(out_path, strands);

    RunStats runs = run_stats(z);
    std::cout << "encoded " << image_path << " -> " << z.size() << " nt in " << strands.size()
              << " strand(s)\n";
    print_bio(runs, std::cout);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_channel(const std::string& in_path, const std::string& out_path, double gamma, int copies,
                int s, std::uint64_t seed) {
    const std::vector<Strand> clean = read_fasta_file(in_path);
    ChannelConfig chan;
    chan.gamma = gamma;
    chan.v = copies;
    chan.s = s;
    chan.seed = seed;
    chan.validate();

    ChannelCounts counts;
    std::vector<Strand> out_strands;
    for (const auto& [sequence_id, strands] : group_by_sequence(clean)) {
        const NucleotideSequence z = recombine({strands})[0];
        const auto noisy = pcr_amplify(z, chan, sequence_id, &counts);
        for (const Strand& st : flatten_copies(noisy)) out_strands.push_back(st);
    }
    write_fasta_file(out_path, out_strands);

    const double n = static_cast<double>(counts.input);
    std::cout << "channel: gamma=" << gamma << ", v=" << copies << ", seed=" << seed << "\n"
              << "input nt:          " << counts.input << "\n"
              << "insertion rate:    " << fmt(counts.insertions / n, 6) << "\n"
              << "deletion rate:     " << fmt(counts.deletions / n, 6) << "\n"
              << "substitution rate: " << fmt(counts.substitutions / n, 6) << "\n"
              << "length drift/nt:   "
              << fmt((static_cast<double>(counts.output) - n) / n, 6) << "\n"
              << "wrote " << out_path << "\n";
    return 0;
}

int cmd_decode(const std::string& model_path, const std::string& fasta_path,
               const std::string& out_path) {
    CodecModel model = load_checkpoint(model_path);
    const auto groups = group_by_sequence(read_fasta_file(fasta_path));
    if (groups.size() != 1)
        throw std::runtime_error("decode expects strands of exactly one sequence, found " +
                                 std::to_string(groups.size()));
    const auto copies = group_by_copy(groups.begin()->second);
    if (static_cast<int>(copies.size()) != model.config().v)
        throw std::runtime_error("FASTA holds " + std::to_string(copies.size()) +
                                 " copies, model expects " + std::to_string(model.config().v));
    const ReceivedBundle bundle =
        pad_and_map(recombine(copies), compute_K(model.config().k()));
    const ImageTensor rec = decode_bundle(model, bundle);
    write_image(out_path, rec);
    std::cout << "decoded " << fasta_path << " -> " << out_path << " (" << rec.width << "x"
              << rec.height << ")\n";
    return 0;
}

int cmd_eval(const std::string& model_path, std::vector<double> gammas, std::size_t image_count,
             const std::string& dataset, const std::string& json_path) {
    CodecModel model = load_checkpoint(model_path);
    const Corpus corpus = load_corpus(dataset, 0, image_count, model.config().seed);
    std::cout << "model: c=" << model.config().c << " (R=1/" << 3072 / model.config().k()
              << "), alpha=" << model.config().alpha << ", v=" << model.config().v << "\n"
              << "eval set: " << corpus.source << " (" << corpus.test.size() << " images)\n\n"
              << "  gamma     PSNR(dB)   SSIM     GC      runs>5\n";

    json rows = json::array();
    for (double g : gammas) {
        const EvalSummary sum = evaluate_model(model, corpus.test, g);
        std::cout << "  " << fmt(g, 4) << "   " << fmt(sum.psnr, 3) << "    " << fmt(sum.ssim, 4)
                  << "   " << fmt(sum.gc, 4) << "  " << fmt(sum.frac_long_runs, 4) << "\n";
        rows.push_back({{"gamma", g},
                        {"psnr", sum.psnr},
                        {"ssim", sum.ssim},
                        {"gc", sum.gc},
                        {"frac_runs_gt_5", sum.frac_long_runs},
                        {"longest_run", sum.longest_run},
                        {"images", sum.images}});
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw std::runtime_error("cannot open " + json_path);
        out << json{{"model", model_path}, {"source", corpus.source}, {"results", rows}}.dump(2)
            << "\n";
        std::cout << "\nwrote " << json_path << "\n";
    }
    return 0;
}

int cmd_bio_stats(const std::string& fasta_path, const std::string& json_path) {
    RunStats runs;
    for (const Strand& st : read_fasta_file(fasta_path)) runs.accumulate(st.bases);
    print_bio(runs, std::cout);
    std::cout << "run length histogram:\n";
    for (std::size_t len = 1; len < runs.run_length_hist.size(); ++len)
        if (runs.run_length_hist[len])
            std::cout << "  " << len << ": " << runs.run_length_hist[len] << "\n";
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw std::runtime_error("cannot open " + json_path);
        out << bio_json(runs).dump(2) << "\n";
        std::cout << "wrote " << json_path << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// experiment sweeps

struct SweepOptions {
    fs::path out_dir = "figures";
    int iterations = 1500;
    std::size_t train_images = 512;
    std::size_t test_images = 48;
    int batch = 32;
    std::uint64_t seed = 1;
    std::string dataset;
    bool full = false;

    void finalize() {
        if (full) {
            iterations = 50000;
            train_images = 0; // whole corpus
            test_images = 0;
            batch = 64;
        }
    }
};

std::vector<double> sweep_gammas() { return {0.0, 0.0025, 0.005, 0.0075, 0.01}; }

TrainConfig sweep_train_config(const SweepOptions& opt, int c, double alpha, int v) {
    TrainConfig cfg;
    cfg.sys.c = c;
    cfg.sys.alpha = alpha;
    cfg.sys.v = v;
    cfg.sys.seed = opt.seed;
    cfg.iterations = opt.iterations;
    cfg.batch_size = opt.batch;
    cfg.log_every = std::max(1, opt.iterations / 10);
    return cfg;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

// Reconstruction quality vs channel noise for several constraint weights.
int sweep_quality_vs_noise(const SweepOptions& opt, const Corpus& corpus) {
    const std::vector<double> alphas{0.0, 75.0, 175.0};
    std::vector<PlotSeries> psnr_series, ssim_series;
    std::vector<std::vector<double>> rows;
    for (double alpha : alphas) {
        CodecModel model =
            obtain_model(opt.out_dir / "models", sweep_train_config(opt, 2, alpha, 2), corpus.train, true);
        PlotSeries ps{"alpha=" + fmt(alpha, 0), {}, {}, ""};
        PlotSeries ss = ps;
        for (double g : sweep_gammas()) {
            const EvalSummary sum = evaluate_model(model, corpus.test, g);
            ps.x.push_back(g);
            ps.y.push_back(sum.psnr);
            ss.x.push_back(g);
            ss.y.push_back(sum.ssim);
            rows.push_back({alpha, g, sum.psnr, sum.ssim});
            std::cout << "  alpha=" << alpha << " gamma=" << g << " -> PSNR "
                      << fmt(sum.psnr, 2) << " dB, SSIM " << fmt(sum.ssim, 4) << "\n";
        }
        psnr_series.push_back(std::move(ps));
        ssim_series.push_back(std::move(ss));
    }
    write_line_plot_svg((opt.out_dir / "quality_vs_noise_psnr.svg").string(),
                        "Reconstruction quality vs channel noise", "channel error rate gamma",
                        "PSNR (dB)", psnr_series);
    write_line_plot_svg((opt.out_dir / "quality_vs_noise_ssim.svg").string(),
                        "Reconstruction quality vs channel noise", "channel error rate gamma",
                        "SSIM", ssim_series);
    write_csv(opt.out_dir / "quality_vs_noise.csv", "alpha,gamma,psnr,ssim", rows);
    return 0;
}

// Reconstruction quality vs compression rate.
int sweep_rate(const SweepOptions& opt, const Corpus& corpus) {
    const std::vector<int> cs{2, 4, 8};
    std::vector<PlotSeries> psnr_series;
    std::vector<std::vector<double>> rows;
    for (int c : cs) {
        CodecModel model =
            obtain_model(opt.out_dir / "models", sweep_train_config(opt, c, 75.0, 2), corpus.train, true);
        PlotSeries ps{"R=1/" + std::to_string(3072 / (c * 64)), {}, {}, ""};
        for (double g : sweep_gammas()) {
            const EvalSummary sum = evaluate_model(model, corpus.test, g);
            ps.x.push_back(g);
            ps.y.push_back(sum.psnr);
            rows.push_back({static_cast<double>(c), g, sum.psnr, sum.ssim});
            std::cout << "  c=" << c << " gamma=" << g << " -> PSNR " << fmt(sum.psnr, 2)
                      << " dB\n";
        }
        psnr_series.push_back(std::move(ps));
    }
    write_line_plot_svg((opt.out_dir / "rate_sweep_psnr.svg").string(),
                        "Reconstruction quality vs compression rate", "channel error rate gamma",
                        "PSNR (dB)", psnr_series);
    write_csv(opt.out_dir / "rate_sweep.csv", "c,gamma,psnr,ssim", rows);
    return 0;
}

// Sequence statistics vs constraint weight.
int sweep_constraint_weight(const SweepOptions& opt, const Corpus& corpus) {
    const std::vector<double> alphas{0.0, 25.0, 75.0, 175.0};
    PlotSeries gc{"GC fraction", {}, {}, ""};
    PlotSeries runs{"frac nt in runs > 5", {}, {}, ""};
    std::vector<std::vector<double>> rows;
    for (double alpha : alphas) {
        CodecModel model =
            obtain_model(opt.out_dir / "models", sweep_train_config(opt, 2, alpha, 2), corpus.train, true);
        RunStats st;
        for (const ImageTensor& img : corpus.test) st.accumulate(model.encode(img));
        gc.x.push_back(alpha);
        gc.y.push_back(st.gc_fraction());
        runs.x.push_back(alpha);
        runs.y.push_back(st.frac_in_runs_longer_than(kMaxDesirableRun));
        rows.push_back({alpha, st.gc_fraction(), st.frac_in_runs_longer_than(kMaxDesirableRun),
                        static_cast<double>(st.longest)});
        std::cout << "  alpha=" << alpha << " -> GC " << fmt(st.gc_fraction(), 4) << ", runs>5 "
                  << fmt(st.frac_in_runs_longer_than(kMaxDesirableRun), 4) << ", longest "
                  << st.longest << "\n";
    }
    write_line_plot_svg((opt.out_dir / "constraint_weight_bio.svg").string(),
                        "Sequence statistics vs constraint weight", "constraint weight alpha",
                        "fraction", {gc, runs});
    write_csv(opt.out_dir / "constraint_weight.csv", "alpha,gc,frac_runs_gt_5,longest_run", rows);
    return 0;
}

// Reconstruction quality vs number of received copies.
int sweep_copies(const SweepOptions& opt, const Corpus& corpus) {
    const std::vector<int> vs{1, 2, 4};
    std::vector<PlotSeries> psnr_series;
    std::vector<std::vector<double>> rows;
    for (int v : vs) {
        CodecModel model =
            obtain_model(opt.out_dir / "models", sweep_train_config(opt, 2, 75.0, v), corpus.train, true);
        PlotSeries ps{"v=" + std::to_string(v), {}, {}, ""};
        for (double g : sweep_gammas()) {
            const EvalSummary sum = evaluate_model(model, corpus.test, g);
            ps.x.push_back(g);
            ps.y.push_back(sum.psnr);
            rows.push_back({static_cast<double>(v), g, sum.psnr, sum.ssim});
            std::cout << "  v=" << v << " gamma=" << g << " -> PSNR " << fmt(sum.psnr, 2)
                      << " dB\n";
        }
        psnr_series.push_back(std::move(ps));
    }
    write_line_plot_svg((opt.out_dir / "copies_sweep_psnr.svg").string(),
                        "Reconstruction quality vs received copies", "channel error rate gamma",
                        "PSNR (dB)", psnr_series);
    write_csv(opt.out_dir / "copies_sweep.csv", "v,gamma,psnr,ssim", rows);
    return 0;
}

// Homopolymer run-length distribution with and without the constraint.
int sweep_run_lengths(const SweepOptions& opt, const Corpus& corpus) {
    const std::vector<double> alphas{0.0, 175.0};
    const int max_len = 10;
    std::vector<std::string> categories;
    for (int len = 1; len < max_len; ++len) categories.push_back(std::to_string(len));
    categories.push_back(">=" + std::to_string(max_len));

    std::vector<PlotSeries> series;
    std::vector<std::vector<double>> rows;
    for (double alpha : alphas) {
        CodecModel model =
            obtain_model(opt.out_dir / "models", sweep_train_config(opt, 2, alpha, 2), corpus.train, true);
        RunStats st;
        for (const ImageTensor& img : corpus.test) st.accumulate(model.encode(img));
        std::uint64_t total_runs = 0;
        for (std::size_t len = 1; len < st.run_length_hist.size(); ++len)
            total_runs += st.run_length_hist[len];
        PlotSeries ps{"alpha=" + fmt(alpha, 0), {}, {}, ""};
        for (int len = 1; len <= max_len; ++len) {
            std::uint64_t count = 0;
            if (len < max_len) {
                if (static_cast<std::size_t>(len) < st.run_length_hist.size())
                    count = st.run_length_hist[static_cast<std::size_t>(len)];
            } else {
                for (std::size_t l = static_cast<std::size_t>(max_len); l < st.run_length_hist.size(); ++l)
                    count += st.run_length_hist[l];
            }
            const double frac = total_runs ? static_cast<double>(count) / total_runs : 0.0;
            ps.y.push_back(frac);
            rows.push_back({alpha, static_cast<double>(len), frac});
        }
        std::cout << "  alpha=" << alpha << " -> " << total_runs << " runs, longest "
                  << st.longest << "\n";
        series.push_back(std::move(ps));
    }
    write_bar_plot_svg((opt.out_dir / "run_length_hist.svg").string(),
                       "Homopolymer run-length distribution", "run length", "fraction of runs",
                       categories, series);
    write_csv(opt.out_dir / "run_length_hist.csv", "alpha,run_length,fraction", rows);
    return 0;
}

// Tiled storage round trip of an image larger than the 32x32 codec input.
int sweep_big_image(const SweepOptions& opt, const Corpus& corpus) {
    CodecModel model =
        obtain_model(opt.out_dir / "models", sweep_train_config(opt, 2, 175.0, 2), corpus.train, true);

    // Collage of corpus images cropped to a deliberately ragged size so the
    // pad-and-crop path is exercised.
    const int grid_h = 3, grid_w = 4;
    ImageTensor collage(grid_h * kTileSize, grid_w * kTileSize, 3);
    for (int ty = 0; ty < grid_h; ++ty)
        for (int tx = 0; tx < grid_w; ++tx) {
            const ImageTensor& src = corpus.test[(ty * grid_w + tx) % corpus.test.size()];
            for (int c = 0; c < 3; ++c)
                for (int y = 0; y < kTileSize; ++y)
                    for (int x = 0; x < kTileSize; ++x)
                        collage.at(c, ty * kTileSize + y, tx * kTileSize + x) = src.at(c, y, x);
        }
    ImageTensor big(80, 112, 3);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < big.height; ++y)
            for (int x = 0; x < big.width; ++x) big.at(c, y, x) = collage.at(c, y, x);

    write_png((opt.out_dir / "big_image_input.png").string(), big);
    std::vector<std::vector<double>> rows;
    for (double g : {0.0, 0.005}) {
        ChannelConfig chan = channel_for(model, g);
        const ImageTensor rec = big_image_roundtrip(model, big, chan);
        const double quality = psnr(big, rec);
        const std::string name = "big_image_recovered_g" + fmt(g, 4) + ".png";
        write_png((opt.out_dir / name).string(), rec);
        rows.push_back({g, quality});
        std::cout << "  gamma=" << g << " -> PSNR " << fmt(quality, 2) << " dB, wrote " << name
                  << "\n";
    }
    write_csv(opt.out_dir / "big_image.csv", "gamma,psnr", rows);
    return 0;
}

int cmd_reproduce(int figure, SweepOptions opt) {
    opt.finalize();
    fs::create_directories(opt.out_dir);
    const Corpus corpus =
        load_corpus(opt.dataset, opt.train_images, opt.test_images, opt.seed);
    std::cout << "dataset: " << corpus.source << " (" << corpus.train.size() << " train, "
              << corpus.test.size() << " test)\n";
    switch (figure) {
        case 6: return sweep_quality_vs_noise(opt, corpus);
        case 7: return sweep_rate(opt, corpus);
        case 8: return sweep_constraint_weight(opt, corpus);
        case 10: return sweep_copies(opt, corpus);
        case 11: return sweep_run_lengths(opt, corpus);
        case 12: return sweep_big_image(opt, corpus);
        default:
            throw std::runtime_error("unknown figure " + std::to_string(figure) +
                                     " (available: 6, 7, 8, 10, 11, 12)");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DNA storage joint source-channel image codec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "dnajscc 1.0.0");

    // train
    auto* train = app.add_subcommand("train", "Train a codec and save a checkpoint");
    std::string train_config, train_dataset, train_out;
    std::size_t train_count = 0;
    TrainConfig tcfg;
    train->add_option("--config", train_config, "JSON config file (flags override it)");
    train->add_option("--c", tcfg.sys.c, "latent channels; code length k = 64*c");
    train->add_option("--v", tcfg.sys.v, "stored copies per sequence");
    train->add_option("--d", tcfg.sys.d, "constraint window length");
    train->add_option("--s", tcfg.sys.s, "strand length");
    train->add_option("--alpha", tcfg.sys.alpha, "constraint loss weight");
    train->add_option("--gamma", tcfg.sys.gamma_train, "training channel error rate");
    train->add_option("--seed", tcfg.sys.seed, "master seed");
    train->add_option("--iterations", tcfg.iterations, "training iterations");
    train->add_option("--batch", tcfg.batch_size, "batch size");
    train->add_option("--lr-initial", tcfg.lr_initial, "learning rate, first half");
    train->add_option("--lr-final", tcfg.lr_final, "learning rate, second half");
    train->add_option("--log-every", tcfg.log_every, "progress/log interval");
    train->add_option("--metrics", tcfg.metrics_path, "per-step metrics CSV path");
    train->add_option("--dataset", train_dataset, "CIFAR-10 binary directory");
    train->add_option("--train-images", train_count, "cap on training images (0 = all)");
    train->add_option("--out", train_out, "output checkpoint path")->required();

    // encode
    auto* encode = app.add_subcommand("encode", "Encode one 32x32 image to FASTA strands");
    std::string enc_model, enc_image, enc_out;
    encode->add_option("--model", enc_model, "checkpoint path")->required();
    encode->add_option("--image", enc_image, "input image (.png/.ppm)")->required();
    encode->add_option("--out", enc_out, "output FASTA path")->required();

    // channel
    auto* channel = app.add_subcommand("channel", "Corrupt clean FASTA strands through the IDS channel");
    std::string ch_in, ch_out;
    double ch_gamma = 0.005;
    int ch_copies = 2, ch_s = 256;
    std::uint64_t ch_seed = 1;
    channel->add_option("--in", ch_in, "clean FASTA (single copy per sequence)")->required();
    channel->add_option("--out", ch_out, "corrupted FASTA path")->required();
    channel->add_option("--gamma", ch_gamma, "channel error rate");
    channel->add_option("--copies", ch_copies, "independent noisy copies to store");
    channel->add_option("--s", ch_s, "strand length");
    channel->add_option("--seed", ch_seed, "channel seed");

    // decode
    auto* decode = app.add_subcommand("decode", "Decode received FASTA copies back to an image");
    std::string dec_model, dec_fasta, dec_out;
    decode->add_option("--model", dec_model, "checkpoint path")->required();
    decode->add_option("--fasta", dec_fasta, "received FASTA path")->required();
    decode->add_option("--out", dec_out, "output image (.png/.ppm)")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Measure round-trip quality over a test set");
    std::string ev_model, ev_dataset, ev_json;
    std::vector<double> ev_gammas{0.0, 0.005, 0.01};
    std::size_t ev_images = 64;
    eval->add_option("--model", ev_model, "checkpoint path")->required();
    eval->add_option("--gamma", ev_gammas, "channel error rates to evaluate");
    eval->add_option("--images", ev_images, "number of test images");
    eval->add_option("--dataset", ev_dataset, "CIFAR-10 binary directory");
    eval->add_option("--json", ev_json, "write results as JSON");

    // bio-stats
    auto* bio = app.add_subcommand("bio-stats", "Sequence statistics of a FASTA file");
    std::string bio_fasta, bio_json_path;
    bio->add_option("--fasta", bio_fasta, "FASTA path")->required();
    bio->add_option("--json", bio_json_path, "write statistics as JSON");

    // synth
    auto* synth = app.add_subcommand("synth", "Write a procedural 32x32 test image");
    std::string sy_out;
    std::uint64_t sy_seed = 1, sy_index = 0;
    synth->add_option("--out", sy_out, "output image (.png/.ppm)")->required();
    synth->add_option("--seed", sy_seed, "corpus seed");
    synth->add_option("--index", sy_index, "image index within the corpus");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "Run a canned experiment sweep and write figures");
    SweepOptions opt;
    int figure = 0;
    std::string rep_out_dir = "figures";
    rep->add_option("--figure", figure, "sweep id: 6, 7, 8, 10, 11, 12")->required();
    rep->add_option("--out-dir", rep_out_dir, "output directory for figures/CSVs");
    rep->add_option("--iterations", opt.iterations, "training iterations per model");
    rep->add_option("--train-images", opt.train_images, "training images (0 = all)");
    rep->add_option("--test-images", opt.test_images, "evaluation images (0 = all)");
    rep->add_option("--batch", opt.batch, "batch size");
    rep->add_option("--seed", opt.seed, "master seed");
    rep->add_option("--dataset", opt.dataset, "CIFAR-10 binary directory");
    rep->add_flag("--full", opt.full, "full-scale settings (50k iterations, whole corpus)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return cmd_train(train_config, tcfg, train_dataset, train_count, train_out, train);
        if (*encode) return cmd_encode(enc_model, enc_image, enc_out);
        if (*channel) return cmd_channel(ch_in, ch_out, ch_gamma, ch_copies, ch_s, ch_seed);
        if (*decode) return cmd_decode(dec_model, dec_fasta, dec_out);
        if (*eval) return cmd_eval(ev_model, ev_gammas, ev_images, ev_dataset, ev_json);
        if (*bio) return cmd_bio_stats(bio_fasta, bio_json_path);
        if (*synth) {
            write_image(sy_out, make_synthetic_image(sy_seed, sy_index));
            std::cout << "wrote " << sy_out << "\n";
            return 0;
        }
        if (*rep) {
            opt.out_dir = rep_out_dir;
            return cmd_reproduce(figure, opt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
