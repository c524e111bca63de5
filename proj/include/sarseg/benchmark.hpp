#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sarseg/grid.hpp"
#include "sarseg/solvers.hpp"
#include "sarseg/speckle.hpp"

namespace sarseg {

struct BenchmarkImage {
  std::string id;
  ScalarField f;
  std::optional<Mask> truth;
};

struct RunRecord {
  std::string image_id;
  std::string algorithm;
  int iterations = 0;
  double wall_seconds = 0.0;  // median over repeats
  double pp = 0.0;
  std::optional<double> dice;
  std::string params_digest;
};

/// Phantom as the solvers see it after a PGM round trip: the noisy field
/// quantized to 8 bits, then max(f, 1).
BenchmarkImage phantom_image(const std::string& id, Shape shape, Geometry geometry,
                             const std::optional<SpeckleSpec>& speckle, double c1 = 200.0,
                             double c2 = 50.0);

/// n phantoms cycling through disk, two_disks, annulus; image i uses seed
/// seed + i.
std::vector<BenchmarkImage> synthetic_suite(int n, Shape shape, int looks, std::uint64_t seed);

/// One image per line: "<image> [<truth mask>]", '#' comments. Relative
/// paths resolve against the manifest's directory; the id is the file stem.
std::vector<BenchmarkImage> load_manifest(const std::filesystem::path& path);

/// First 16 hex digits of SHA-256 over cfg.canonical().
std::string params_digest(const SolverConfig& cfg);

/// Runs every (image, config) cell `repeat` times. Records come back in
/// image-major order whatever the thread count.
std::vector<RunRecord> run_benchmark(const std::vector<BenchmarkImage>& images,
                                     const std::vector<SolverConfig>& configs, int repeat,
                                     int threads = 1);

inline constexpr const char* kCsvHeader =
    "image_id,algorithm,iterations,wall_seconds_median,pp,dice,params_digest";

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);

}  // namespace sarseg
