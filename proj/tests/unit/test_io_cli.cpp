#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sarseg/benchmark.hpp"
#include "sarseg/cli.hpp"
#include "sarseg/config.hpp"
#include "sarseg/image_io.hpp"
#include "sarseg/metrics.hpp"

using namespace sarseg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("sarseg-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Image8 random_image(Shape s, unsigned seed) {
  std::mt19937 rng(seed);
  Image8 img(s);
  for (auto& v : img) v = static_cast<std::uint8_t>(rng() & 0xFF);
  return img;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("PGM round trip is bit exact") {
  TempDir dir;
  const auto img = random_image({17, 23}, 5);
  write_pgm(dir / "b.pgm", img);
  write_pgm(dir / "a.pgm", img, true);
  CHECK(read_pgm(dir / "b.pgm") == img);
  CHECK(read_pgm(dir / "a.pgm") == img);
  CHECK(read_image(dir / "b.pgm") == img);
}

TEST_CASE("PGM header parsing") {
  TempDir dir;
  {
    std::ofstream f(dir / "c.pgm", std::ios::binary);
    f << "P2\n# comment line\n3 2 # trailing\n15\n0 15 7\n1 2 3\n";
  }
  const auto img = read_pgm(dir / "c.pgm");
  REQUIRE(img.shape() == Shape{2, 3});
  CHECK(img(0, 1) == 255);
  CHECK(img(0, 2) == 119);
  {
    std::ofstream f(dir / "wide.pgm", std::ios::binary);
    f << "P5\n2 2\n65535\n";
  }
  CHECK_THROWS_AS(read_pgm(dir / "wide.pgm"), IoError);
  {
    std::ofstream f(dir / "short.pgm", std::ios::binary);
    f << "P5\n4 4\n255\nabc";
  }
  CHECK_THROWS_AS(read_pgm(dir / "short.pgm"), IoError);
  CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), IoError);
}

TEST_CASE("PNG overlay and grayscale read") {
  TempDir dir;
  const auto img = random_image({12, 10}, 9);
  Mask m(img.shape(), 0);
  for (int i = 3; i < 8; ++i) {
    for (int j = 2; j < 7; ++j) m(i, j) = 1;
  }
  const auto overlay = contour_overlay(img, m);
  const auto edge = boundary_pixels(m);
  for (std::size_t k = 0; k < img.size(); ++k) {
    for (int c = 0; c < 3; ++c) {
      CHECK(overlay.rgb[3 * k + c] == (edge[k] ? kContourColor[c] : img[k]));
    }
  }
  write_png(dir / "o.png", overlay);
  CHECK(read_bytes(dir / "o.png").substr(1, 3) == "PNG");

  RgbImage gray{img.shape(), {}};
  for (auto v : img) gray.rgb.insert(gray.rgb.end(), {v, v, v});
  write_png(dir / "g.png", gray);
  CHECK(read_image(dir / "g.png") == img);
}

TEST_CASE("image conversions") {
  ScalarField f({1, 4}, std::vector<double>{-3.0, 0.4, 127.5, 300.0});
  const auto q = quantize(f);
  CHECK(q[0] == 0);
  CHECK(q[1] == 0);
  CHECK(q[2] == 128);
  CHECK(q[3] == 255);
  const auto p = to_positive_field(q);
  CHECK(p[0] == 1.0);
  CHECK(p[3] == 255.0);
  const auto r = rescale_to_8bit(ScalarField({1, 3}, std::vector<double>{0.0, 0.5, 1.0}));
  CHECK(r[0] == 0);
  CHECK(r[1] == 128);
  CHECK(r[2] == 255);
  CHECK(rescale_to_8bit(ScalarField(2, 2, 0.7)) == Image8(2, 2, 0));
}

TEST_CASE("config files") {
  std::istringstream text(
      "# solver overrides\n"
      "mu = 0.25\n"
      "  alpha=16   # more proximity\n"
      "\n"
      "data_term = linear\n"
      "max_iter = 42\n");
  auto cfg = SolverConfig::defaults(Algorithm::fprd1);
  apply_settings(cfg, parse_settings(text, "inline"));
  CHECK(cfg.model.mu == 0.25);
  CHECK(cfg.alpha == 16.0);
  CHECK(cfg.model.data_term == DataTerm::linear);
  CHECK(cfg.max_iter == 42);
  CHECK(cfg.lambda == 1.0);

  std::istringstream bad_line("mu 0.3\n");
  CHECK_THROWS_AS(parse_settings(bad_line, "inline"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "nu", "0"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "mu", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "max_iter", "1.5"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "data_term", "cubic"), ConfigError);
  CHECK_THROWS_AS(read_settings("/nonexistent/params.cfg"), IoError);

  CHECK(preset_config(Algorithm::sbrd, Preset::published).canonical() ==
        SolverConfig::defaults(Algorithm::sbrd).canonical());
  for (auto a : {Algorithm::rdls, Algorithm::sbrd, Algorithm::fprd1, Algorithm::fprd2}) {
    CHECK_NOTHROW(preset_config(a, Preset::phantom).validate());
  }
}

TEST_CASE("params digest") {
  const auto a = SolverConfig::defaults(Algorithm::fprd1);
  auto b = a;
  CHECK(params_digest(a) == params_digest(b));
  CHECK(params_digest(a).size() == 16);
  b.model.mu = 0.150000001;
  CHECK(params_digest(a) != params_digest(b));
}

TEST_CASE("cli phantom") {
  TempDir dir;
  const auto base = dir / "d1";
  auto r = cli({"phantom", "--geometry", "disk", "--size", "128", "--looks", "4", "--seed", "7",
                "--out", base});
  REQUIRE(r.code == kExitOk);
  const auto noisy = read_pgm(base + "_noisy.pgm");
  CHECK(noisy.shape() == Shape{128, 128});
  for (auto v : noisy) CHECK(v > 0);
  const auto mask = mask_from_image(read_pgm(base + "_mask.pgm"));
  const auto clean = read_pgm(base + "_clean.pgm");
  for (std::size_t k = 0; k < mask.size(); ++k) CHECK(clean[k] == (mask[k] ? 200 : 50));

  const auto first = read_bytes(base + "_noisy.pgm");
  REQUIRE(cli({"phantom", "--geometry", "disk", "--size", "128", "--looks", "4", "--seed", "7",
               "--out", base})
              .code == kExitOk);
  CHECK(read_bytes(base + "_noisy.pgm") == first);

  CHECK(cli({"phantom", "--looks", "0", "--out", base}).code == kExitUsage);
  CHECK(cli({"phantom", "--geometry", "hexagon", "--out", base}).code == kExitUsage);
  CHECK(cli({"phantom", "--out", dir / "no/such/dir/x"}).code == kExitIo);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({}).code == kExitUsage);
}

TEST_CASE("cli segment") {
  TempDir dir;
  const auto base = dir / "d1";
  REQUIRE(cli({"phantom", "--size", "96", "--looks", "4", "--seed", "7", "--out", base}).code ==
          kExitOk);

  SUBCASE("speckled input with truth") {
    const auto r = cli({"segment", "--alg", "fprd1", "--in", base + "_noisy.pgm", "--truth",
                        base + "_mask.pgm", "--out", dir / "r1", "--preset", "phantom"});
    REQUIRE(r.code == kExitOk);
    const auto fields = split(r.out.substr(0, r.out.find('\n')), ' ');
    REQUIRE(fields.size() == 5);
    CHECK(fields[0] == "fprd1");
    CHECK(std::stoi(fields[1]) > 0);
    CHECK(std::stod(fields[2]) >= 0.0);
    const double pp = std::stod(fields[3]);
    CHECK(pp >= 0.0);
    CHECK(pp <= 1.0);
    CHECK(std::stod(fields[4]) > 0.95);
    CHECK(fs::exists(dir / "r1_mask.pgm"));
    CHECK(fs::exists(dir / "r1_phi.pgm"));
    CHECK(fs::exists(dir / "r1_overlay.png"));
  }

  SUBCASE("noiseless input is recovered") {
    REQUIRE(cli({"phantom", "--size", "96", "--noiseless", "--out", base}).code == kExitOk);
    const auto r = cli({"segment", "--alg", "sbrd", "--in", base + "_clean.pgm", "--truth",
                        base + "_mask.pgm", "--out", dir / "r2"});
    REQUIRE(r.code == kExitOk);
    const auto fields = split(r.out.substr(0, r.out.find('\n')), ' ');
    REQUIRE(fields.size() == 5);
    CHECK(fields[4] == "1.000000");
  }

  SUBCASE("config file then flags") {
    {
      std::ofstream cfg(dir / "p.cfg");
      cfg << "alpha = 2\nmax_iter = 3\n";
    }
    auto r = cli({"segment", "--alg", "fprd1", "--in", base + "_noisy.pgm", "--out", dir / "r3",
                  "--config", dir / "p.cfg"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("lambda/alpha <= 0.25") != std::string::npos);
    r = cli({"segment", "--alg", "fprd1", "--in", base + "_noisy.pgm", "--out", dir / "r3",
             "--config", dir / "p.cfg", "--alpha", "12"});
    REQUIRE(r.code == kExitOk);
    CHECK(split(r.out, ' ')[1] == "3");
  }

  SUBCASE("errors") {
    CHECK(cli({"segment", "--alg", "fprd1", "--lambda", "1", "--alpha", "2", "--in",
               base + "_noisy.pgm", "--out", dir / "e"})
              .code == kExitUsage);
    CHECK(cli({"segment", "--alg", "levelset", "--in", base + "_noisy.pgm", "--out", dir / "e"})
              .code == kExitUsage);
    CHECK(cli({"segment", "--alg", "rdls", "--in", dir / "absent.pgm", "--out", dir / "e"}).code ==
          kExitIo);
    CHECK(cli({"segment", "--alg", "rdls", "--in", base + "_noisy.pgm", "--out", dir / "e",
               "--config", dir / "absent.cfg"})
              .code == kExitIo);
    CHECK(cli({"segment", "--alg", "rdls", "--in", base + "_noisy.pgm", "--out", dir / "e",
               "--tol", "fast"})
              .code == kExitUsage);
  }
}

TEST_CASE("cli benchmark") {
  TempDir dir;
  SUBCASE("synthetic suite") {
    const auto r = cli({"benchmark", "--synthetic", "3", "--algs", "rdls,sbrd,fprd1,fprd2",
                        "--looks", "4", "--seed", "1", "--size", "48", "--repeat", "1",
                        "--out", dir / "b.csv"});
    REQUIRE(r.code == kExitOk);
    const auto text = read_bytes(dir / "b.csv");
    CHECK(text.find('\r') == std::string::npos);
    const auto lines = split(text, '\n');
    REQUIRE(lines.size() == 13);
    CHECK(lines[0] == kCsvHeader);
    for (std::size_t k = 1; k < lines.size(); ++k) CHECK(split(lines[k], ',').size() == 7);
    CHECK(split(lines[1], ',')[1] == "rdls");
    CHECK(split(lines[4], ',')[1] == "fprd2");
  }

  SUBCASE("manifest") {
    REQUIRE(cli({"phantom", "--size", "40", "--seed", "3", "--out", dir / "m1"}).code == 0);
    REQUIRE(cli({"phantom", "--size", "40", "--seed", "4", "--geometry", "annulus", "--out",
                 dir / "m2"})
                .code == 0);
    {
      std::ofstream m(dir / "list.txt");
      m << "# images\nm1_noisy.pgm m1_mask.pgm\n\nm2_noisy.pgm\n";
    }
    const auto r = cli({"benchmark", "--manifest", dir / "list.txt", "--algs", "sbrd",
                        "--repeat", "2", "--preset", "phantom"});
    REQUIRE(r.code == kExitOk);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() == 3);
    const auto row1 = split(lines[1], ',');
    const auto row2 = split(lines[2], ',');
    CHECK(row1[0] == "m1_noisy");
    CHECK_FALSE(row1[5].empty());
    CHECK(row2[0] == "m2_noisy");
    CHECK(row2[5].empty());
  }

  SUBCASE("usage errors") {
    {
      std::ofstream m(dir / "empty.txt");
      m << "# nothing\n";
    }
    CHECK(cli({"benchmark", "--manifest", dir / "empty.txt"}).code == kExitUsage);
    CHECK(cli({"benchmark"}).code == kExitUsage);
    CHECK(cli({"benchmark", "--synthetic", "1", "--algs", "kmeans"}).code == kExitUsage);
    CHECK(cli({"benchmark", "--synthetic", "2", "--manifest", dir / "empty.txt"}).code ==
          kExitUsage);
  }

  SUBCASE("rows follow manifest order with several threads") {
    const auto a = cli({"benchmark", "--synthetic", "4", "--size", "40", "--repeat", "1",
                        "--threads", "4", "--preset", "phantom"});
    const auto b = cli({"benchmark", "--synthetic", "4", "--size", "40", "--repeat", "1",
                        "--threads", "1", "--preset", "phantom"});
    REQUIRE(a.code == kExitOk);
    REQUIRE(b.code == kExitOk);
    const auto la = split(a.out, '\n'), lb = split(b.out, '\n');
    REQUIRE(la.size() == lb.size());
    for (std::size_t k = 1; k < la.size(); ++k) {
      auto ra = split(la[k], ','), rb = split(lb[k], ',');
      ra[3] = rb[3] = "";
      CHECK(ra == rb);
    }
  }
}
