/* Copyright 2026 The dirseg Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "dirseg/bench.hpp"
#include "dirseg/fusion.hpp"
#include "dirseg/io.hpp"
#include "dirseg/matching.hpp"
#include "dirseg/metrics.hpp"
#include "dirseg/synthetic.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace dirseg;

namespace {

std::vector<DirectionalFeatureMap> load_frames(const fs::path& dir)
{
    std::vector<DirectionalFeatureMap> frames;
    for (std::size_t i = 0;; ++i) {
        const fs::path p = dir / frame_name(i, ".dft");
        if (!fs::exists(p))
            break;
        frames.push_back(l2_normalize(read_dft(p)));
    }
    if (frames.empty())
        throw Error("no " + frame_name(0, ".dft") + " in " + dir.string());
    return frames;
}

SoftMask load_mask_for(const fs::path& path, GridShape grid)
{
    return resize_mask(read_pgm(path), grid);
}

int run_segment(const fs::path& features, const std::vector<std::string>& masks, const fs::path& head_path,
                double kappa, double lambda, const fs::path& out, unsigned threads)
{
    const auto frames = load_frames(features);
    const FusionHead head = read_head(head_path);
    const AppearanceConfig config{kappa, lambda};
    const MatchOptions match{threads};

    std::vector<std::vector<SoftMask>> per_object;
    for (const auto& m : masks) {
        const SoftMask first_mask = load_mask_for(m, frames.front().shape());
        per_object.push_back(segment_sequence(frames.front(), first_mask,
                                              std::span(frames).subspan(1), head, config, match));
    }

    fs::create_directories(out);
    const std::size_t objects = per_object.size();
    for (std::size_t t = 0; t < frames.size(); ++t) {
        std::vector<SoftMask> at_t;
        for (const auto& seq : per_object)
            at_t.push_back(seq[t]);
        const LabelMap labels = merge_multi_object(at_t);
        Grid<std::uint8_t> bytes(labels.shape());
        for (std::size_t l = 0; l < labels.size(); ++l)
            bytes[l] = static_cast<std::uint8_t>(std::lround(255.0 * labels[l] / static_cast<double>(objects)));
        write_pgm(out / frame_name(t, ".pgm"), bytes);
    }
    std::cout << "wrote " << frames.size() << " label maps (" << objects << " object" << (objects == 1 ? "" : "s")
              << ") to " << out.string() << "\n";
    return 0;
}

int run_match(const fs::path& features, const fs::path& mask_path, std::size_t index, const fs::path& out)
{
    const auto frames = load_frames(features);
    if (index >= frames.size())
        throw Error("frame " + std::to_string(index) + " not found (have " + std::to_string(frames.size()) + ")");
    const SoftMask first_mask = load_mask_for(mask_path, frames.front().shape());
    const MatchCues cues = global_directional_match(frames.front(), first_mask, frames[index]);
    write_pgm(out, match_probability(cues.target, cues.background));
    return 0;
}

int run_synth(const fs::path& spec_path, const fs::path& out)
{
    const SyntheticSequenceSpec spec = SyntheticSequenceSpec::from_config(Config::load(spec_path));
    const SyntheticSequence seq = generate_synthetic_sequence(spec);
    fs::create_directories(out);
    for (std::size_t t = 0; t < seq.features.size(); ++t) {
        write_dft(out / frame_name(t, ".dft"), seq.features[t].raw());
        Grid<std::uint8_t> bytes(seq.truth[t].shape());
        for (std::size_t l = 0; l < bytes.size(); ++l)
            bytes[l] = seq.truth[t][l] ? 255 : 0;
        write_pgm(out / frame_name(t, ".pgm"), bytes);
    }
    std::printf("wrote %zu frames (%zux%zu, C=%zu, separation %.3f deg) to %s\n", seq.features.size(),
                spec.grid.height, spec.grid.width, spec.channels, seq.separation_degrees, out.string().c_str());
    return 0;
}

int run_eval(const fs::path& pred_dir, const fs::path& gt_dir, double radius, bool include_first)
{
    double sum_j = 0.0;
    double sum_f = 0.0;
    std::size_t count = 0;
    std::printf("%-16s %8s %8s\n", "frame", "J", "F");
    for (std::size_t t = include_first ? 0 : 1;; ++t) {
        const fs::path pp = pred_dir / frame_name(t, ".pgm");
        const fs::path gp = gt_dir / frame_name(t, ".pgm");
        if (!fs::exists(pp) || !fs::exists(gp))
            break;
        BinaryMask pred = read_pgm_binary(pp);
        const BinaryMask gt = read_pgm_binary(gp);
        if (pred.shape() != gt.shape())
            pred = upscale_nearest(pred, gt.shape());
        const double r = radius >= 0.0 ? radius : default_boundary_radius(gt.shape());
        const double j = jaccard(pred, gt);
        const double f = boundary_f(pred, gt, r);
        std::printf("%-16s %8.4f %8.4f\n", frame_name(t, "").c_str(), j, f);
        sum_j += j;
        sum_f += f;
        ++count;
    }
    if (count == 0)
        throw Error("no matching frame_%05d.pgm pairs in " + pred_dir.string() + " and " + gt_dir.string());
    const double mj = sum_j / static_cast<double>(count);
    const double mf = sum_f / static_cast<double>(count);
    std::printf("mean J      %.4f\nmean F      %.4f\nJ&F mean    %.4f\nframes      %zu\n", mj, mf, 0.5 * (mj + mf),
                count);
    return 0;
}

int run_fit_head(const fs::path& spec_path, std::size_t steps, double lr, const fs::path& out)
{
    const Config config = Config::load(spec_path);
    const SyntheticSequenceSpec spec = SyntheticSequenceSpec::from_config(config);
    HeadTrainingOptions options;
    options.sequences = static_cast<std::size_t>(config.get_int("sequences", 8));
    options.fit = {steps, lr};
    options.appearance.kappa = config.get_double("kappa", 30.0);
    options.appearance.lambda = config.get_double("lambda", 0.1);
    const FusionFit fit = train_head_on_synthetic(spec, options);
    write_head(out, fit.head);
    std::printf("fit %zu steps on %zu sequences: loss %.6f -> %.6f\n", steps, options.sequences,
                fit.loss_history.front(), fit.loss_history.back());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Directional matching and vMF appearance segmentation toolkit"};
    app.require_subcommand(1);

    std::string features, first_mask, head, out;
    std::vector<std::string> more_masks;
    double kappa = 30.0, lambda = 0.1;
    unsigned threads = 1;
    auto* segment = app.add_subcommand("segment", "segment a sequence of feature maps");
    segment->add_option("--features", features, "directory of frame_%05d.dft")->required();
    segment->add_option("--first-mask", first_mask, "first-frame mask of object 1 (PGM)")->required();
    segment->add_option("--second-mask", more_masks, "first-frame mask of a further object (repeatable)");
    segment->add_option("--head", head, "fusion head file")->required();
    segment->add_option("--kappa", kappa, "vMF concentration")->check(CLI::PositiveNumber);
    segment->add_option("--lambda", lambda, "appearance learning rate")->check(CLI::Range(0.0, 1.0));
    segment->add_option("--out", out, "output directory")->required();
    segment->add_option("--threads", threads, "matching worker threads")->check(CLI::PositiveNumber);

    std::size_t frame_index = 0;
    auto* match = app.add_subcommand("match", "write the matching probability map of one frame");
    match->add_option("--features", features, "directory of frame_%05d.dft")->required();
    match->add_option("--first-mask", first_mask, "first-frame mask (PGM)")->required();
    match->add_option("--frame", frame_index, "frame index")->required();
    match->add_option("--out", out, "output PGM")->required();

    BenchConfig bench_config;
    auto* bench = app.add_subcommand("bench", "time contraction vs pairwise matching");
    bench->add_option("--channels", bench_config.channels)->required()->check(CLI::PositiveNumber);
    bench->add_option("--height", bench_config.height)->required()->check(CLI::PositiveNumber);
    bench->add_option("--width", bench_config.width)->required()->check(CLI::PositiveNumber);
    bench->add_option("--reps", bench_config.repetitions)->required()->check(CLI::PositiveNumber);
    bench->add_option("--threads", bench_config.threads, "also time the contraction with N workers");
    bench->add_option("--seed", bench_config.seed);

    std::string spec;
    auto* synth = app.add_subcommand("synth", "generate a synthetic moving-square sequence");
    synth->add_option("--spec", spec, "sequence config file")->required();
    synth->add_option("--out", out, "output directory")->required();

    std::string pred, gt;
    double radius = -1.0;
    bool include_first = false;
    auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
    eval->add_option("--pred", pred)->required();
    eval->add_option("--gt", gt)->required();
    eval->add_option("--boundary-radius", radius, "contour tolerance (default ceil(0.008 * diagonal))");
    eval->add_flag("--include-first", include_first, "also score frame 0");

    std::size_t steps = 500;
    double lr = 1e-2;
    auto* fit = app.add_subcommand("fit-head", "fit the fusion head on synthetic sequences");
    fit->add_option("--synth-spec", spec, "sequence config file")->required();
    fit->add_option("--steps", steps)->required();
    fit->add_option("--lr", lr)->required()->check(CLI::PositiveNumber);
    fit->add_option("--out", out, "output head file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*segment) {
            std::vector<std::string> masks{first_mask};
            masks.insert(masks.end(), more_masks.begin(), more_masks.end());
            return run_segment(features, masks, head, kappa, lambda, out, threads);
        }
        if (*match)
            return run_match(features, first_mask, frame_index, out);
        if (*bench) {
            std::cout << format_report(bench_matching(bench_config));
            return 0;
        }
        if (*synth)
            return run_synth(spec, out);
        if (*eval)
            return run_eval(pred, gt, radius, include_first);
        if (*fit)
            return run_fit_head(spec, steps, lr, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
