#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>

#include "sarseg/benchmark.hpp"
#include "sarseg/config.hpp"
#include "sarseg/grid_ops.hpp"
#include "sarseg/image_io.hpp"
#include "sarseg/metrics.hpp"
#include "sarseg/solvers.hpp"
#include "sarseg/speckle.hpp"

namespace py = pybind11;
using namespace sarseg;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

template <typename T, typename A>
Grid<T> from_array(const A& a, const char* what) {
  if (a.ndim() != 2) throw InvalidInput(std::string(what) + ": expected a 2-D array");
  Grid<T> g(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::memcpy(g.values().data(), a.data(), g.size() * sizeof(T));
  return g;
}

template <typename T>
py::array_t<T> to_array(const Grid<T>& g) {
  py::array_t<T> a({g.height(), g.width()});
  std::memcpy(a.mutable_data(), g.values().data(), g.size() * sizeof(T));
  return a;
}

ScalarField field(const DoubleArray& a) { return from_array<double>(a, "field"); }
Mask mask(const py::array& a) {
  return mask_from_image(from_array<std::uint8_t>(ByteArray::ensure(a), "mask"));
}

Axis axis(const std::string& name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  throw InvalidInput("axis must be 'x' or 'y'");
}

SolverConfig make_config(const std::string& algorithm, const std::string& preset,
                         const py::kwargs& params) {
  auto cfg = preset_config(parse_algorithm(algorithm), parse_preset(preset));
  for (const auto& [k, v] : params) {
    apply_setting(cfg, py::str(k).cast<std::string>(), py::str(v).cast<std::string>());
  }
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Level-set segmentation of speckled images";

  // InvalidInput derives from std::invalid_argument and surfaces as ValueError.
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericFailure>(m, "NumericFailure", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("grad_forward", [](const DoubleArray& u, const std::string& ax) {
    return to_array(grad_forward(field(u), axis(ax)));
  }, py::arg("u"), py::arg("axis"));
  m.def("div_adjoint", [](const DoubleArray& p, const std::string& ax) {
    return to_array(div_adjoint(field(p), axis(ax)));
  }, py::arg("p"), py::arg("axis"));
  m.def("laplacian", [](const DoubleArray& u) { return to_array(laplacian(field(u))); });

  m.def("gamma_speckle", [](int height, int width, int looks, std::uint64_t seed) {
    return to_array(gamma_speckle({height, width}, SpeckleSpec{looks, seed}));
  }, py::arg("height"), py::arg("width"), py::arg("looks"), py::arg("seed") = 0);

  m.def("make_phantom",
        [](int height, int width, const std::string& geometry, double c1, double c2,
           std::optional<int> looks, std::uint64_t seed) {
          std::optional<SpeckleSpec> speckle;
          if (looks) speckle = SpeckleSpec{*looks, seed};
          const auto ph = make_phantom({height, width}, c1, c2, parse_geometry(geometry), speckle);
          py::dict d;
          d["clean"] = to_array(ph.clean);
          d["mask"] = to_array(ph.mask);
          d["noisy"] = to_array(ph.noisy);
          return d;
        },
        py::arg("height"), py::arg("width"), py::arg("geometry") = "disk", py::arg("c1") = 200.0,
        py::arg("c2") = 50.0, py::arg("looks") = py::none(), py::arg("seed") = 0);

  m.def("phantom_image",
        [](int height, int width, const std::string& geometry, std::optional<int> looks,
           std::uint64_t seed, double c1, double c2) {
          std::optional<SpeckleSpec> speckle;
          if (looks) speckle = SpeckleSpec{*looks, seed};
          return to_array(phantom_image("", {height, width}, parse_geometry(geometry), speckle, c1, c2).f);
        },
        py::arg("height"), py::arg("width"), py::arg("geometry") = "disk",
        py::arg("looks") = py::none(), py::arg("seed") = 0, py::arg("c1") = 200.0,
        py::arg("c2") = 50.0, "Noisy phantom quantized to 8 bits with f = max(f, 1), as read from a PGM.");

  m.def("segment",
        [](const DoubleArray& f, const std::string& algorithm, const std::string& preset,
           const py::kwargs& params) {
          const auto cfg = make_config(algorithm, preset, params);
          const auto image = field(f);
          SegmentationResult r;
          {
            py::gil_scoped_release release;
            r = segment(image, cfg);
          }
          py::dict d;
          d["phi"] = to_array(r.phi);
          d["mask"] = to_array(r.mask);
          d["iterations"] = r.iterations;
          d["wall_seconds"] = r.wall_seconds;
          d["pp"] = r.pp;
          return d;
        },
        py::arg("f"), py::arg("algorithm"), py::arg("preset") = "published",
        "Segment a positive image. Extra keyword arguments override solver parameters.");

  m.def("config", [](const std::string& algorithm, const std::string& preset,
                     const py::kwargs& params) {
    return make_config(algorithm, preset, params).canonical();
  }, py::arg("algorithm"), py::arg("preset") = "published");
  m.def("params_digest", [](const std::string& algorithm, const std::string& preset,
                            const py::kwargs& params) {
    return params_digest(make_config(algorithm, preset, params));
  }, py::arg("algorithm"), py::arg("preset") = "published");

  m.def("pp_uniformity", [](const DoubleArray& f, const py::array& regions) {
    return pp_uniformity(field(f), mask(regions));
  });
  m.def("dice", [](const py::array& a, const py::array& b) { return dice(mask(a), mask(b)); });
  m.def("count_boundary_contours",
        [](const py::array& a) { return count_boundary_contours(mask(a)); });

  m.def("read_image", [](const std::string& path) { return to_array(read_image(path)); });
  m.def("write_pgm", [](const std::string& path, const ByteArray& image, bool ascii) {
    write_pgm(path, from_array<std::uint8_t>(image, "image"), ascii);
  }, py::arg("path"), py::arg("image"), py::arg("ascii") = false);
}
