#include "sarseg/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "sarseg/benchmark.hpp"
#include "sarseg/config.hpp"
#include "sarseg/image_io.hpp"
#include "sarseg/metrics.hpp"
#include "sarseg/solvers.hpp"
#include "sarseg/speckle.hpp"

namespace sarseg {

namespace {

// Config keys that can also be given as --flags (underscores become dashes).
constexpr const char* kTunables[] = {
    "mu", "beta", "eps", "sigma", "kernel_sigma", "data_term", "lambda", "alpha", "t",
    "gamma", "xi", "dt1", "dt2", "max_iter", "tol", "means_update_every", "mask_patience"};

std::string flag_name(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

struct Overrides {
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    for (const char* key : kTunables) {
      app->add_option(flag_name(key), values[key], std::string("override ") + key)
          ->group("Solver parameters");
    }
  }

  void apply(const CLI::App* app, SolverConfig& cfg) const {
    for (const char* key : kTunables) {
      if (app->count(flag_name(key)) > 0) apply_setting(cfg, key, values.at(key));
    }
  }
};

SolverConfig build_config(Algorithm a, const std::string& preset, const std::string& config_path,
                          const Overrides& overrides, const CLI::App* app) {
  auto cfg = preset_config(a, parse_preset(preset));
  if (!config_path.empty()) apply_settings(cfg, read_settings(config_path));
  overrides.apply(app, cfg);
  cfg.validate();
  return cfg;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

Algorithm algorithm_flag(const std::string& name) {
  try {
    return parse_algorithm(name);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-phase level-set segmentation of speckled images"};
  app.require_subcommand(1);

  // phantom
  auto* phantom = app.add_subcommand("phantom", "write a two-phase speckle phantom as PGM files");
  std::string geometry = "disk";
  int size = 128;
  int looks = 4;
  std::uint64_t seed = 0;
  double c1 = 200.0, c2 = 50.0;
  bool noiseless = false, ascii = false;
  std::string phantom_out;
  phantom->add_option("--geometry", geometry, "disk, two_disks, annulus or rectangle")
      ->check(CLI::IsMember({"disk", "two_disks", "annulus", "rectangle"}));
  phantom->add_option("--size", size, "image side in pixels")->check(CLI::Range(8, 1 << 14));
  phantom->add_option("--looks", looks, "number of looks L (>= 1)")->check(CLI::Range(1, 1 << 20));
  phantom->add_option("--seed", seed, "speckle RNG seed");
  phantom->add_option("--c1", c1, "intensity inside the geometry")->check(CLI::Range(1.0, 255.0));
  phantom->add_option("--c2", c2, "intensity outside the geometry")->check(CLI::Range(1.0, 255.0));
  phantom->add_flag("--noiseless", noiseless, "skip the speckle (noisy = clean)");
  phantom->add_flag("--ascii", ascii, "write P2 instead of P5");
  phantom->add_option("--out", phantom_out, "output prefix: <out>_clean/_noisy/_mask.pgm")
      ->required();

  // segment
  auto* seg = app.add_subcommand(
      "segment",
      "segment one image (PGM or 8-bit PNG); pixels are mapped to f = max(pixel, 1)");
  std::string alg, input, output, truth, preset = "published", config_path;
  seg->add_option("--alg", alg, "rdls, sbrd, fprd1 or fprd2")->required();
  seg->add_option("--in", input, "input image")->required();
  seg->add_option("--out", output, "output prefix: <out>_mask.pgm, _phi.pgm, _overlay.png")
      ->required();
  seg->add_option("--truth", truth, "ground-truth mask image; adds dice to the summary");
  seg->add_option("--preset", preset, "published or phantom")
      ->check(CLI::IsMember({"published", "phantom"}));
  seg->add_option("--config", config_path, "key = value parameter file");
  Overrides seg_overrides;
  seg_overrides.attach(seg);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "time every (image, algorithm) cell into a CSV");
  std::string manifest, algs = "rdls,sbrd,fprd1,fprd2", csv_path, bench_preset = "published",
                        bench_config;
  int synthetic = 0, repeat = 5, threads = 1, bench_size = 128, bench_looks = 4;
  std::uint64_t bench_seed = 1;
  auto* manifest_opt = bench->add_option("--manifest", manifest, "file listing '<image> [<truth>]'");
  bench->add_option("--synthetic", synthetic, "generate N phantoms instead of a manifest")
      ->check(CLI::Range(1, 1 << 16))
      ->excludes(manifest_opt);
  bench->add_option("--size", bench_size, "synthetic image side")->check(CLI::Range(8, 1 << 14));
  bench->add_option("--looks", bench_looks, "synthetic number of looks")
      ->check(CLI::Range(1, 1 << 20));
  bench->add_option("--seed", bench_seed, "seed of the first synthetic image");
  bench->add_option("--algs", algs, "comma-separated algorithm list");
  bench->add_option("--repeat", repeat, "runs per cell; the CSV reports the median time")
      ->check(CLI::Range(1, 1000));
  bench->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
  bench->add_option("--preset", bench_preset, "published or phantom")
      ->check(CLI::IsMember({"published", "phantom"}));
  bench->add_option("--config", bench_config, "key = value parameter file for every algorithm");
  bench->add_option("--out", csv_path, "CSV path (default: stdout)");
  Overrides bench_overrides;
  bench_overrides.attach(bench);

  std::vector<std::string> argv_store{"sarseg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (phantom->parsed()) {
      const Shape shape{size, size};
      std::optional<SpeckleSpec> speckle;
      if (!noiseless) speckle = SpeckleSpec{looks, seed};
      const auto ph = make_phantom(shape, c1, c2, parse_geometry(geometry), speckle);
      auto noisy = quantize(ph.noisy);
      for (auto& v : noisy) v = std::max<std::uint8_t>(v, 1);
      write_pgm(phantom_out + "_clean.pgm", quantize(ph.clean), ascii);
      write_pgm(phantom_out + "_noisy.pgm", noisy, ascii);
      write_pgm(phantom_out + "_mask.pgm", mask_to_image(ph.mask), ascii);
      return kExitOk;
    }

    if (seg->parsed()) {
      const auto cfg = build_config(algorithm_flag(alg), preset, config_path, seg_overrides, seg);
      const auto image = read_image(input);
      std::optional<Mask> truth_mask;
      if (!truth.empty()) {
        truth_mask = mask_from_image(read_image(truth));
        require_same_shape(image.shape(), truth_mask->shape(), "truth mask");
      }
      const auto res = segment(to_positive_field(image), cfg);
      write_pgm(output + "_mask.pgm", mask_to_image(res.mask));
      write_pgm(output + "_phi.pgm", rescale_to_8bit(res.phi));
      write_png(output + "_overlay.png", contour_overlay(image, res.mask));
      out << to_string(cfg.algorithm) << ' ' << res.iterations << ' ' << fixed6(res.wall_seconds)
          << ' ' << fixed6(res.pp);
      if (truth_mask) out << ' ' << fixed6(dice(res.mask, *truth_mask));
      out << '\n';
      return kExitOk;
    }

    if (bench->parsed()) {
      if (manifest.empty() && synthetic == 0) {
        err << "benchmark: give --manifest or --synthetic N\n";
        return kExitUsage;
      }
      std::vector<SolverConfig> configs;
      for (const auto& name : split_list(algs)) {
        configs.push_back(
            build_config(algorithm_flag(name), bench_preset, bench_config, bench_overrides, bench));
      }
      if (configs.empty()) throw ConfigError("benchmark: --algs is empty");
      const auto images = manifest.empty()
                              ? synthetic_suite(synthetic, {bench_size, bench_size}, bench_looks,
                                                bench_seed)
                              : load_manifest(manifest);
      const auto records = run_benchmark(images, configs, repeat, threads);
      if (csv_path.empty()) {
        write_csv(out, records);
      } else {
        std::ofstream file(csv_path, std::ios::binary);
        if (!file) throw IoError("cannot open for writing", csv_path);
        write_csv(file, records);
        if (!file) throw IoError("write failed", csv_path);
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericFailure& e) {
    err << "numeric failure at iteration " << e.iteration() << ": " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sarseg
