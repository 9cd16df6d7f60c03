#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elight/aging.hpp"
#include "elight/cell.hpp"
#include "elight/deploy.hpp"
#include "elight/reorder.hpp"
#include "elight/train.hpp"
#include "elight/version.hpp"
#include "elight/write.hpp"

namespace py = pybind11;
using namespace elight;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
  std::copy(arr.data(), arr.data() + m.data.size(), m.data.begin());
  return m;
}

py::array_t<double> from_matrix(const Matrix& m) {
  py::array_t<double> arr({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), arr.mutable_data());
  return arr;
}

py::dict stats_dict(const WriteStats& s) {
  py::dict d;
  d["total_writes"] = s.total_writes;
  d["max_writes"] = s.max_cell_writes;
  d["writes_a_to_c"] = s.writes_a_to_c;
  d["writes_c_to_a"] = s.writes_c_to_a;
  d["energy_units"] = s.energy_units;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "PCM photonic tensor core write/energy model";
  m.attr("__version__") = kVersion;

  py::class_<CellConfig>(m, "CellConfig")
      .def_static("from_base", &CellConfig::from_base, py::arg("bits"), py::arg("base"))
      .def_static("from_extinction_step", &CellConfig::from_extinction_step, py::arg("bits"),
                  py::arg("delta_e_db"))
      .def_readonly("bits", &CellConfig::bits)
      .def_readonly("base", &CellConfig::base)
      .def_readonly("max_level", &CellConfig::max_level)
      .def_readonly("floor_trans", &CellConfig::floor_trans)
      .def_readonly("scale", &CellConfig::scale)
      .def("__repr__", [](const CellConfig& c) {
        return "CellConfig(bits=" + std::to_string(c.bits) + ", base=" + std::to_string(c.base) +
               ")";
      });

  m.def("transmission_level", &transmission_level, py::arg("config"), py::arg("crystalline"));
  m.def(
      "quantize",
      [](const CellConfig& cfg, double w) {
        Quantized q = quantize(cfg, w);
        return py::make_tuple(q.value, py::make_tuple(q.level.pos, q.level.neg));
      },
      py::arg("config"), py::arg("w"), "Returns (value, (level_pos, level_neg)).");
  m.def(
      "quantize_array",
      [](const CellConfig& cfg,
         py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
        py::array_t<double> out(std::vector<py::ssize_t>(arr.shape(), arr.shape() + arr.ndim()));
        const double* src = arr.data();
        double* dst = out.mutable_data();
        for (py::ssize_t i = 0; i < arr.size(); ++i) dst[i] = quantize(cfg, src[i]).value;
        return out;
      },
      py::arg("config"), py::arg("weights"));
  m.def(
      "dequantize",
      [](const CellConfig& cfg, int pos, int neg) { return dequantize(cfg, {pos, neg}); },
      py::arg("config"), py::arg("level_pos"), py::arg("level_neg"));
  m.def(
      "codebook",
      [](const CellConfig& cfg) {
        py::list entries;
        for (const CodebookEntry& e : build_codebook(cfg))
          entries.append(py::make_tuple(e.weight, e.level.pos, e.level.neg));
        return entries;
      },
      py::arg("config"), "List of (weight, level_pos, level_neg), ascending.");

  m.def(
      "write_cost",
      [](const CellConfig& cfg, double w_new, double w_old) {
        return write_cost(cfg, w_new, w_old);
      },
      py::arg("config"), py::arg("w_new"), py::arg("w_old"));
  m.def(
      "block_write_cost",
      [](const CellConfig& cfg, py::array_t<double, py::array::c_style | py::array::forcecast> a,
         py::array_t<double, py::array::c_style | py::array::forcecast> b) {
        return block_write_cost(cfg, to_matrix(a), to_matrix(b));
      },
      py::arg("config"), py::arg("new_block"), py::arg("old_block"));

  m.def(
      "layer_write_stats",
      [](const CellConfig& cfg, py::array_t<double, py::array::c_style | py::array::forcecast> w,
         int k, bool reorder, int ptc_count) {
        LayerSchedule sched = assign(partition(to_matrix(w), k), ptc_count);
        if (reorder) sched = column_reorder(sched);
        return stats_dict(layer_writes(cfg, sched));
      },
      py::arg("config"), py::arg("weights"), py::arg("k"), py::arg("reorder") = false,
      py::arg("ptc_count") = 0,
      "Deploy one weight matrix and count writes; dict of the report row fields.");

  m.def(
      "normalize_weights",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> w) {
        return from_matrix(normalize_weights(to_matrix(w)));
      },
      py::arg("weights"));

  m.def(
      "supported_range",
      [](const CellConfig& cfg, std::uint32_t f_pos, std::uint32_t f_neg) {
        WeightRange r = supported_range(cfg, f_pos, f_neg);
        return py::make_tuple(r.lo, r.hi);
      },
      py::arg("config"), py::arg("f_pos"), py::arg("f_neg"));
  m.def(
      "clamp_program",
      [](const CellConfig& cfg, double lo, double hi, double w) {
        return clamp_program(cfg, {lo, hi}, w);
      },
      py::arg("config"), py::arg("lo"), py::arg("hi"), py::arg("w"));
  m.def(
      "hungarian",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> cost) {
        Assignment a = hungarian(to_matrix(cost));
        return py::make_tuple(a.row_to_col, a.cost);
      },
      py::arg("cost"), "Min-cost row->column assignment: (assignment, cost).");

  m.def(
      "train_toy",
      [](int bits, double base, int k, double lam, std::uint64_t seed, int epochs) {
        ToyConfig cfg;
        cfg.bits = bits;
        cfg.base = base;
        cfg.k = k;
        cfg.lambda = lam;
        cfg.seed = seed;
        cfg.epochs = epochs;
        TrainRow row = train_toy(cfg);
        py::dict d;
        d["lambda"] = row.lambda;
        d["accuracy"] = row.accuracy;
        d["diverged"] = row.diverged;
        d["total_writes"] = row.total_writes;
        d["max_writes"] = row.max_writes;
        d["total_writes_reordered"] = row.total_writes_reordered;
        d["max_writes_reordered"] = row.max_writes_reordered;
        return d;
      },
      py::arg("bits") = 4, py::arg("base") = 0.5, py::arg("k") = 8, py::arg("lam") = 0.0,
      py::arg("seed") = 1, py::arg("epochs") = 60);
}
