#include "sarseg/benchmark.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sarseg/image_io.hpp"
#include "sarseg/metrics.hpp"

namespace sarseg {

namespace fs = std::filesystem;

BenchmarkImage phantom_image(const std::string& id, Shape shape, Geometry geometry,
                             const std::optional<SpeckleSpec>& speckle, double c1, double c2) {
  auto ph = make_phantom(shape, c1, c2, geometry, speckle);
  return {id, to_positive_field(quantize(ph.noisy)), std::move(ph.mask)};
}

std::vector<BenchmarkImage> synthetic_suite(int n, Shape shape, int looks, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("synthetic suite needs at least one image");
  static constexpr std::array kCycle{Geometry::disk, Geometry::two_disks, Geometry::annulus};
  std::vector<BenchmarkImage> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto geometry = kCycle[static_cast<std::size_t>(i) % kCycle.size()];
    const auto s = seed + static_cast<std::uint64_t>(i);
    const auto id = "phantom" + std::to_string(i) + "_" + std::string(to_string(geometry));
    out.push_back(phantom_image(id, shape, geometry, SpeckleSpec{looks, s}));
  }
  return out;
}

std::vector<BenchmarkImage> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest", path.string());
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  std::vector<BenchmarkImage> out;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string image, truth, extra;
    if (!(fields >> image)) continue;
    fields >> truth;
    if (fields >> extra) throw InvalidInput("manifest line has more than two paths: " + line);
    const auto image_path = resolve(image);
    BenchmarkImage entry{image_path.stem().string(), to_positive_field(read_image(image_path)),
                         std::nullopt};
    if (!truth.empty()) {
      auto mask = mask_from_image(read_image(resolve(truth)));
      require_same_shape(entry.f.shape(), mask.shape(), "manifest truth mask");
      entry.truth = std::move(mask);
    }
    out.push_back(std::move(entry));
  }
  if (out.empty()) throw InvalidInput("manifest lists no images: " + path.string());
  return out;
}

std::string params_digest(const SolverConfig& cfg) {
  const auto text = cfg.canonical();
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr)) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < 8; ++k) {
    out += kHex[md[k] >> 4];
    out += kHex[md[k] & 0xF];
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RunRecord run_cell(const BenchmarkImage& image, const SolverConfig& cfg, int repeat) {
  RunRecord rec;
  rec.image_id = image.id;
  rec.algorithm = std::string(to_string(cfg.algorithm));
  rec.params_digest = params_digest(cfg);
  std::vector<double> times;
  for (int r = 0; r < repeat; ++r) {
    const auto res = segment(image.f, cfg);
    times.push_back(res.wall_seconds);
    if (r == 0) {
      rec.iterations = res.iterations;
      rec.pp = res.pp;
      if (image.truth) rec.dice = dice(res.mask, *image.truth);
    }
  }
  rec.wall_seconds = median(std::move(times));
  return rec;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + '"';
}

}  // namespace

std::vector<RunRecord> run_benchmark(const std::vector<BenchmarkImage>& images,
                                     const std::vector<SolverConfig>& configs, int repeat,
                                     int threads) {
  if (images.empty()) throw InvalidInput("benchmark: no images");
  if (configs.empty()) throw InvalidInput("benchmark: no algorithms");
  if (repeat < 1) throw InvalidInput("benchmark: repeat must be at least 1");
  for (const auto& c : configs) c.validate();

  const std::size_t cells = images.size() * configs.size();
  std::vector<RunRecord> records(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < cells;) {
      try {
        records[k] = run_cell(images[k / configs.size()], configs[k % configs.size()], repeat);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::clamp(threads, 1, static_cast<int>(cells)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvHeader << '\n';
  char buf[64];
  for (const auto& r : records) {
    out << csv_field(r.image_id) << ',' << r.algorithm << ',' << r.iterations << ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.wall_seconds);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.pp);
    out << buf << ',';
    if (r.dice) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.dice);
      out << buf;
    }
    out << ',' << r.params_digest << '\n';
  }
}

}  // namespace sarseg
