// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// frag command-line tool.
//
// Exit codes: 0 success, 1 data or I/O error, 2 usage error. Errors are
// reported on stderr as {"version": 1, "error": {"code": ..., "message": ...}}.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frag/frag.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Thrown for argument combinations CLI11 cannot express; maps to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_error(const std::string& code, const std::string& message)
{
    json err = {{"version", 1}, {"error", {{"code", code}, {"message", message}}}};
    std::cerr << err.dump() << '\n';
}

/// Numbers that may be infinite (PSNR of identical inputs) become "inf".
json number_or_inf(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

/// "-" or empty writes to stdout; anything else is written atomically.
void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    frag::write_file_atomic(path, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string step_file(int t) { return "z_t" + std::to_string(t) + ".frag"; }

// ---------------------------------------------------------------------------
// key=value config files
//
// Each non-blank, non-comment line `key = value` becomes `--key=value` in
// front of the command-line arguments, so explicit flags (parsed later, last
// value wins) override the file. Underscores in keys map to dashes.

std::vector<std::string> config_args(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw frag::Error(frag::ErrorCode::io_failure, "cannot open config " + path.string());
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        for (auto& ch : key)
            if (ch == '_')
                ch = '-';
        if (key.empty() || key == "config")
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": bad key");
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

/// Splices the contents of `--config FILE` right after the subcommand name.
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    if (args.empty())
        return args;
    std::optional<std::string> file;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            file = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            file = args[i].substr(9);
    }
    if (!file)
        return args;
    auto extra = config_args(*file);
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

std::vector<int> parse_steps(const std::string& list)
{
    std::vector<int> steps;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            steps.push_back(std::stoi(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad step '" + item + "' in --steps");
        }
    }
    if (steps.empty())
        throw UsageError("--steps is empty");
    return steps;
}

bool has_tensor_files(const fs::path& dir)
{
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".frag")
            return true;
    return false;
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
    std::string input;
    std::string steps;
    int count = 50;
    int stride = 20;
    int max_step = 1000;
    double sigma = 0.25;
    double d0 = 6.0;
    std::size_t min_group = 2;
    bool contiguous = true;
    std::string op = "none";
    double beta = 0.5;
    double f_cut = 0.25 * std::numbers::pi;
    std::string out;
    std::string enhanced_dir;
    std::uint64_t seed = 0;
};

void cmd_run(const RunOptions& o)
{
    const std::vector<int> steps = o.steps.empty()
                                       ? frag::default_steps(o.max_step, o.count, o.stride)
                                       : parse_steps(o.steps);
    frag::SchedulerConfig cfg;
    cfg.max_step = o.max_step;
    cfg.sigma = o.sigma;
    cfg.d0 = o.d0;
    cfg.min_group = o.min_group;
    cfg.contiguous = o.contiguous;

    frag::GroupwiseOperator op;
    if (o.op == "mean")
        op = frag::group_mean;
    else if (o.op == "pivot")
        op = frag::pivot_operator(o.beta);
    if (op && !o.enhanced_dir.empty())
        fs::create_directories(o.enhanced_dir);

    const fs::path in = o.input;
    if (!fs::is_directory(in))
        throw frag::Error(frag::ErrorCode::io_failure, "input is not a directory: " + o.input);
    const bool tensors = has_tensor_files(in);

    frag::StepRunner runner(cfg);
    std::vector<frag::StepRecord> records;
    frag::Dims dims{};
    auto process = [&](const frag::LatentSequence& z, int t) {
        records.push_back(runner.push(z, t));
        dims = z.dims();
        if (op && !o.enhanced_dir.empty())
            frag::write_latents(frag::apply_groupwise(op, records.back().groups, z),
                                fs::path(o.enhanced_dir) / step_file(t));
    };
    if (tensors) {
        for (int t : steps)
            process(frag::read_latents(in / step_file(t)), t);
    } else {
        // A directory of images is a single step: no previous latent, r = d0.
        process(frag::ingest_frames(in), steps.front());
    }

    json config = frag::scheduler_config_json(cfg, dims);
    config["input"] = o.input;
    config["input_kind"] = tensors ? "tensors" : "images";
    config["steps"] = steps;
    config["operator"] = o.op;
    config["beta"] = o.beta;
    config["f_cut"] = o.f_cut;
    config["seed"] = o.seed;
    emit(o.out, dump(frag::make_schedule(config, records, cfg.contiguous)));
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    std::string out;
    std::string steps;
    int count = 50;
    int stride = 20;
    frag::TrajectorySpec spec;
};

void cmd_simulate(SimulateOptions o)
{
    o.spec.steps = o.steps.empty() ? frag::default_steps(o.spec.max_step, o.count, o.stride)
                                   : parse_steps(o.steps);
    const auto& s = o.spec;
    s.validate();
    fs::create_directories(o.out);
    const frag::LatentSequence clean =
        frag::make_test_video(s.pattern, s.frames, s.width, s.height, s.channels, s.seed);
    const frag::Spectrum clean_spectrum = frag::forward_spectrum(clean);
    frag::write_latents(clean, fs::path(o.out) / "clean.frag");

    json steps = json::array();
    for (int t : s.steps) {
        const auto st = frag::synth_step(s, clean, clean_spectrum, t);
        frag::write_latents(st.z, fs::path(o.out) / step_file(t));
        steps.push_back({{"t", t},
                         {"planted_radius", st.planted_radius},
                         {"noise_level", st.noise_level},
                         {"file", step_file(t)}});
    }
    json doc = {{"version", 1},
                {"spec",
                 {{"pattern", s.pattern},
                  {"frames", s.frames},
                  {"width", s.width},
                  {"height", s.height},
                  {"channels", s.channels},
                  {"max_step", s.max_step},
                  {"r_min", s.r_min},
                  {"r_max", s.r_max},
                  {"exponent", s.exponent},
                  {"eta_max", s.eta_max},
                  {"eta_decay", s.eta_decay}}},
                {"seed", s.seed},
                {"clean", "clean.frag"},
                {"steps", std::move(steps)}};
    frag::write_file_atomic(fs::path(o.out) / "trajectory.json", dump(doc));
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumOptions {
    std::string input;
    std::string prev;
    std::size_t bins = 16;
    double d0 = 6.0;
    std::string format = "csv";
    std::string out;
};

void cmd_spectrum(const SpectrumOptions& o)
{
    const auto z = frag::read_latents(o.input);
    const frag::Spectrum s = frag::forward_spectrum(z);
    if (!o.prev.empty()) {
        const auto zp = frag::read_latents(o.prev);
        frag::require_same_dims(z, zp, "spectrum --prev");
        json doc = {{"version", 1}};
        try {
            const auto m = frag::spatial_moments(
                frag::differential_spectrum(s, frag::forward_spectrum(zp)));
            doc["moment"] = {m.mx, m.my};
            doc["distance"] = m.distance();
            doc["radius"] = frag::adapted_radius(m, o.d0, z.width(), z.height());
        } catch (const frag::Error& e) {
            if (e.code() != frag::ErrorCode::degenerate_input)
                throw;
            doc["moment"] = nullptr;
            doc["distance"] = nullptr;
            doc["radius"] = frag::adapted_radius({}, o.d0, z.width(), z.height());
        }
        emit(o.out, dump(doc));
        return;
    }
    const auto prof = frag::radial_profile(s, o.bins);
    if (o.format == "json") {
        json bins = json::array();
        for (std::size_t b = 0; b < prof.bins(); ++b)
            bins.push_back({{"bin_center_f", prof.bin_center(b)},
                            {"mean_magnitude", prof.mean_magnitude[b]}});
        emit(o.out, dump({{"version", 1}, {"bins", std::move(bins)}}));
        return;
    }
    std::ostringstream os;
    os.precision(17);
    os << "bin_center_f,mean_magnitude\n";
    for (std::size_t b = 0; b < prof.bins(); ++b)
        os << prof.bin_center(b) << ',' << prof.mean_magnitude[b] << '\n';
    emit(o.out, os.str());
}

// ---------------------------------------------------------------------------
// filter

struct FilterOptions {
    double radius = 0.0;
    double sigma = 0.25;
    std::size_t width = 64;
    std::size_t height = 64;
    std::string input;
    std::string output;
    std::string heatmap;
};

void cmd_filter(const FilterOptions& o)
{
    std::optional<frag::LatentSequence> z;
    std::size_t w = o.width, h = o.height;
    if (!o.input.empty()) {
        z = frag::read_latents(o.input);
        w = z->width();
        h = z->height();
    }
    const frag::ApfFilter filter(o.radius, o.sigma, w, h);
    if (!o.heatmap.empty())
        frag::write_pnm(frag::filter_heatmap(filter), o.heatmap);
    if (z) {
        if (o.output.empty())
            throw UsageError("--input needs --output");
        frag::write_latents(frag::apply_filter(filter, *z), o.output);
    }
    json doc = {{"version", 1}, {"radius", o.radius}, {"sigma", o.sigma},
                {"width", w},   {"height", h}};
    std::cout << doc.dump() << '\n';
}

// ---------------------------------------------------------------------------
// group

struct GroupOptions {
    std::string input;
    std::optional<int> t;
    std::optional<std::size_t> n_cut;
    std::size_t min_group = 2;
    bool contiguous = true;
    int max_step = 1000;
    std::string out;
};

void cmd_group(const GroupOptions& o)
{
    if (o.t && o.n_cut)
        throw UsageError("--t and --n-cut are mutually exclusive");
    const auto z = frag::read_latents(o.input);
    frag::require(z.frames() >= 2, frag::ErrorCode::invalid_argument, "grouping needs >= 2 frames");
    frag::require(o.min_group >= 1 && o.min_group <= z.frames(), frag::ErrorCode::invalid_argument,
                  "min_group must lie in [1, L]");
    const auto tree = frag::build_merge_tree(z, o.contiguous);
    std::size_t n_cut = tree.root_rank();
    if (o.t)
        n_cut = frag::schedule_cut_rank(*o.t, o.max_step, tree.root_rank());
    else if (o.n_cut)
        n_cut = *o.n_cut;
    frag::require(n_cut >= 1 && n_cut <= tree.root_rank(), frag::ErrorCode::invalid_argument,
                  "n_cut must lie in [1, L-1]");

    json merges = json::array();
    for (const auto& m : tree.merges())
        merges.push_back({{"rank", m.rank},
                          {"left", m.left},
                          {"right", m.right},
                          {"members", m.members},
                          {"linkage", m.linkage},
                          {"height", m.height}});
    json doc = {{"version", 1},
                {"frames", z.frames()},
                {"contiguous", o.contiguous},
                {"min_group", o.min_group},
                {"n_cut", n_cut},
                {"group_format", o.contiguous ? "ranges" : "members"},
                {"merges", std::move(merges)},
                {"groups", frag::groups_to_json(frag::cut_tree(tree, n_cut, o.min_group),
                                                o.contiguous)}};
    emit(o.out, dump(doc));
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsOptions {
    std::string metric;
    std::vector<std::string> files;
    double f_cut = 0.25 * std::numbers::pi;
    std::string mask;
    std::vector<std::size_t> rect;
    std::string out;
};

frag::FrameMask load_mask(const MetricsOptions& o, std::size_t w, std::size_t h)
{
    if (!o.mask.empty() && !o.rect.empty())
        throw UsageError("--mask and --rect are mutually exclusive");
    if (!o.mask.empty()) {
        const frag::Image img = frag::read_pnm(o.mask);
        frag::require(img.channels == 1, frag::ErrorCode::unsupported_format,
                      "mask must be a PGM image");
        frag::require(img.width == w && img.height == h, frag::ErrorCode::dimension_mismatch,
                      "mask dims do not match frames");
        frag::FrameMask m(w, h, false);
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x)
                m.set(y, x, img.pixels[y * w + x] != 0);
        return m;
    }
    if (o.rect.size() != 4)
        throw UsageError("masked-psnr needs --mask FILE or --rect x0,y0,x1,y1");
    frag::FrameMask m(w, h, true);
    m.zero_rect(o.rect[0], o.rect[1], o.rect[2], o.rect[3]);
    return m;
}

void cmd_metrics(const MetricsOptions& o)
{
    const bool single = o.metric == "consistency";
    if (o.files.size() != (single ? 1u : 2u))
        throw UsageError(o.metric + " takes " + (single ? "one input" : "two inputs"));
    const auto a = frag::read_latents(o.files[0]);
    json doc = {{"version", 1}, {"metric", o.metric}, {"proxy", single}};
    if (single) {
        doc["value"] = frag::frame_consistency(a);
        emit(o.out, dump(doc));
        return;
    }
    const auto b = frag::read_latents(o.files[1]);
    if (o.metric == "psnr") {
        doc["value"] = number_or_inf(frag::psnr(a, b));
    } else if (o.metric == "band-psnr") {
        const auto s = frag::band_psnr(a, b, o.f_cut);
        doc["value"] = {{"low", number_or_inf(s.low)}, {"high", number_or_inf(s.high)}};
        doc["f_cut"] = s.f_cut;
    } else if (o.metric == "ssim") {
        doc["value"] = frag::ssim(a, b);
    } else {
        frag::require_same_dims(a, b, "masked-psnr");
        doc["value"] = number_or_inf(frag::masked_psnr(a, b, load_mask(o, a.width(), a.height())));
    }
    emit(o.out, dump(doc));
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw frag::Error(frag::ErrorCode::io_failure, "cannot open " + path);
    std::vector<std::string> errors;
    try {
        errors = frag::validate_schedule(json::parse(in));
    } catch (const json::parse_error& e) {
        errors.push_back(std::string("not valid JSON: ") + e.what());
    }
    json doc = {{"version", 1}, {"valid", errors.empty()}, {"errors", errors}};
    std::cout << doc.dump(2) << '\n';
    return errors.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    frag::threads_from_env();

    CLI::App app{"Frequency-adaptive temporal grouping for latent video sequences"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_file;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "key=value file; flags override it");
    };
    int exit_code = 0;

    // run
    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Compute the per-step grouping schedule");
    add_config(run_cmd);
    run_cmd->add_option("--input", run.input, "Directory of z_t<step>.frag files or PGM/PPM frames")
        ->required();
    run_cmd->add_option("--steps", run.steps, "Comma-separated steps, strictly descending");
    run_cmd->add_option("--count", run.count, "Derived step list length")->check(CLI::PositiveNumber);
    run_cmd->add_option("--stride", run.stride, "Derived step list stride")->check(CLI::PositiveNumber);
    run_cmd->add_option("-T,--max-step", run.max_step, "Maximum diffusion step T");
    run_cmd->add_option("--sigma", run.sigma, "Filter skirt scale in grid cells");
    run_cmd->add_option("--d0", run.d0, "Radius margin in grid cells");
    run_cmd->add_option("--min-group", run.min_group, "Smallest group after post-merge");
    run_cmd->add_flag("--contiguous,!--no-contiguous", run.contiguous,
                      "Restrict merges to adjacent frames (default on)");
    run_cmd->add_option("--operator", run.op, "Groupwise operator")
        ->check(CLI::IsMember({"none", "mean", "pivot"}));
    run_cmd->add_option("--beta", run.beta, "Pivot blend weight")->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--f-cut", run.f_cut, "Band split frequency (echoed in the config)");
    run_cmd->add_option("-o,--out", run.out, "Schedule JSON path (default stdout)");
    run_cmd->add_option("--enhanced-dir", run.enhanced_dir, "Write operator output tensors here");
    run_cmd->add_option("--seed", run.seed, "Seed echoed in the config");
    run_cmd->callback([&] { cmd_run(run); });

    // simulate
    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Write a synthetic denoising trajectory");
    add_config(sim_cmd);
    sim_cmd->add_option("-o,--out", sim.out, "Output directory")->required();
    sim_cmd->add_option("--pattern", sim.spec.pattern, "Test video")
        ->check(CLI::IsMember({"moving-edge", "smooth-gradient", "two-scene"}));
    sim_cmd->add_option("--frames", sim.spec.frames)->check(CLI::PositiveNumber);
    sim_cmd->add_option("--width", sim.spec.width)->check(CLI::PositiveNumber);
    sim_cmd->add_option("--height", sim.spec.height)->check(CLI::PositiveNumber);
    sim_cmd->add_option("--channels", sim.spec.channels)->check(CLI::PositiveNumber);
    sim_cmd->add_option("--steps", sim.steps, "Comma-separated steps, strictly descending");
    sim_cmd->add_option("--count", sim.count)->check(CLI::PositiveNumber);
    sim_cmd->add_option("--stride", sim.stride)->check(CLI::PositiveNumber);
    sim_cmd->add_option("-T,--max-step", sim.spec.max_step);
    sim_cmd->add_option("--r-min", sim.spec.r_min);
    sim_cmd->add_option("--r-max", sim.spec.r_max);
    sim_cmd->add_option("--exponent", sim.spec.exponent);
    sim_cmd->add_option("--eta-max", sim.spec.eta_max);
    sim_cmd->add_option("--eta-decay", sim.spec.eta_decay);
    sim_cmd->add_option("--seed", sim.spec.seed);
    sim_cmd->callback([&] { cmd_simulate(sim); });

    // spectrum
    SpectrumOptions spec;
    auto* spec_cmd = app.add_subcommand("spectrum", "Radial profile or moments of a tensor");
    add_config(spec_cmd);
    spec_cmd->add_option("input", spec.input, "Tensor file")->required();
    spec_cmd->add_option("--prev", spec.prev, "Previous-step tensor: report moments and radius");
    spec_cmd->add_option("--bins", spec.bins)->check(CLI::Range(2, 4096));
    spec_cmd->add_option("--d0", spec.d0);
    spec_cmd->add_option("--format", spec.format)->check(CLI::IsMember({"csv", "json"}));
    spec_cmd->add_option("-o,--out", spec.out);
    spec_cmd->callback([&] { cmd_spectrum(spec); });

    // filter
    FilterOptions flt;
    auto* flt_cmd = app.add_subcommand("filter", "Build, export or apply an adaptive filter");
    add_config(flt_cmd);
    flt_cmd->add_option("--r", flt.radius, "Plateau radius in grid cells")->required();
    flt_cmd->add_option("--sigma", flt.sigma);
    flt_cmd->add_option("--width", flt.width)->check(CLI::PositiveNumber);
    flt_cmd->add_option("--height", flt.height)->check(CLI::PositiveNumber);
    flt_cmd->add_option("--input", flt.input, "Tensor to filter (sets width and height)");
    flt_cmd->add_option("--output", flt.output, "Filtered tensor path");
    flt_cmd->add_option("--export-heatmap", flt.heatmap, "Write the gain map as a PGM");
    flt_cmd->callback([&] { cmd_filter(flt); });

    // group
    GroupOptions grp;
    auto* grp_cmd = app.add_subcommand("group", "Merge tree and groups for one tensor");
    add_config(grp_cmd);
    grp_cmd->add_option("input", grp.input, "Tensor file")->required();
    grp_cmd->add_option("--t", grp.t, "Step; n_cut from the scheduler");
    grp_cmd->add_option("--n-cut", grp.n_cut, "Number of merges to apply");
    grp_cmd->add_option("--min-group", grp.min_group);
    grp_cmd->add_flag("--contiguous,!--no-contiguous", grp.contiguous);
    grp_cmd->add_option("-T,--max-step", grp.max_step);
    grp_cmd->add_option("-o,--out", grp.out);
    grp_cmd->callback([&] { cmd_group(grp); });

    // metrics
    MetricsOptions met;
    auto* met_cmd = app.add_subcommand("metrics", "Quality metrics between tensors");
    add_config(met_cmd);
    met_cmd->add_option("metric", met.metric)
        ->required()
        ->check(CLI::IsMember({"psnr", "band-psnr", "ssim", "masked-psnr", "consistency"}));
    met_cmd->add_option("files", met.files, "Input tensors")->required();
    met_cmd->add_option("--f-cut", met.f_cut);
    met_cmd->add_option("--mask", met.mask, "PGM mask, nonzero pixels are scored");
    met_cmd->add_option("--rect", met.rect, "Edited rectangle x0,y0,x1,y1 excluded from scoring")
        ->delimiter(',')
        ->expected(4)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    met_cmd->add_option("-o,--out", met.out);
    met_cmd->callback([&] { cmd_metrics(met); });

    // validate
    std::string validate_path;
    auto* val_cmd = app.add_subcommand("validate", "Check a schedule document");
    val_cmd->add_option("schedule", validate_path)->required();
    val_cmd->callback([&] { exit_code = cmd_validate(validate_path); });

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const UsageError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const frag::Error& e) {
        print_error(std::string(frag::to_string(e.code())), e.what());
        return 1;
    } catch (const fs::filesystem_error& e) {
        print_error("io_failure", e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
    return exit_code;
}
