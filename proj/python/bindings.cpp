#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "hodisc/error.hpp"
#include "hodisc/genmat.hpp"
#include "hodisc/haar.hpp"
#include "hodisc/io.hpp"
#include "hodisc/netquality.hpp"
#include "hodisc/norms.hpp"
#include "hodisc/parallel.hpp"
#include "hodisc/points.hpp"
#include "hodisc/studies.hpp"

namespace py = pybind11;
using namespace hodisc;

namespace {

py::object to_python(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

NormSpec make_spec(const std::string& kind, const std::string& method, double p, double q, double s,
                   double beta, std::optional<int> depth, std::optional<int> box_limit, int resolution,
                   std::vector<double> p_grid, const std::string& arithmetic) {
  NormSpec spec;
  spec.kind = parse_norm_kind(kind);
  spec.method = method;
  spec.p = p;
  spec.q = q;
  spec.s = s;
  spec.beta = beta;
  spec.depth = depth;
  spec.box_limit = box_limit;
  spec.resolution = resolution;
  spec.p_grid = std::move(p_grid);
  if (arithmetic == "exact")
    spec.arithmetic = Arithmetic::exact;
  else if (arithmetic == "float")
    spec.arithmetic = Arithmetic::floating;
  else if (arithmetic != "auto")
    throw ValidationError("arithmetic must be auto, exact or float");
  return spec;
}

template <class F>
auto with_file(const std::string& path, F&& f) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return f(in);
}

}  // namespace

PYBIND11_MODULE(_hodisc, m) {
  m.doc() = "Digital sequences over F2, exact Haar coefficients and discrepancy norms";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("set_threads", &set_thread_count, py::arg("threads"), "Cap worker threads (0 = all cores)");

  py::class_<GeneratingMatrixSet>(m, "GeneratingMatrices")
      .def_readonly("dim", &GeneratingMatrixSet::dim)
      .def_readonly("q_rows", &GeneratingMatrixSet::q_rows)
      .def_readonly("n_cols", &GeneratingMatrixSet::n_cols)
      .def_readonly("row_bound_factor", &GeneratingMatrixSet::row_bound_factor)
      .def_readonly("declared_t", &GeneratingMatrixSet::declared_t)
      .def_readonly("declared_alpha", &GeneratingMatrixSet::declared_alpha)
      .def_property_readonly("kind", [](const GeneratingMatrixSet& g) { return to_string(g.kind); })
      .def("matrix",
           [](const GeneratingMatrixSet& g, std::size_t j) {
             if (j >= g.dim) throw py::index_error("coordinate out of range");
             const BitMatrix& c = g.matrices[j];
             py::array_t<std::uint8_t> a({c.rows(), c.cols()});
             auto v = a.mutable_unchecked<2>();
             for (std::size_t r = 0; r < c.rows(); ++r)
               for (std::size_t k = 0; k < c.cols(); ++k) v(r, k) = c.get(r, k);
             return a;
           },
           py::arg("j"), "0/1 array of the j-th generating matrix")
      .def("to_text",
           [](const GeneratingMatrixSet& g) {
             std::ostringstream s;
             write_genmat(s, g);
             return s.str();
           })
      .def_static("from_text",
                  [](const std::string& text) {
                    std::istringstream s(text);
                    return read_genmat(s);
                  })
      .def_static("load", [](const std::string& path) {
        return with_file(path, [](std::istream& in) { return read_genmat(in); });
      });

  m.def(
      "generating_matrices",
      [](const std::string& kind, std::size_t dim, std::size_t cols, std::optional<std::size_t> rows) {
        return make_generating_matrices(parse_genmat_kind(kind), dim, cols, rows);
      },
      py::arg("kind"), py::arg("dim"), py::arg("cols"), py::arg("rows") = py::none(),
      "identity, tezuka or tezuka-interlaced");

  py::class_<DyadicPointSet>(m, "PointSet")
      .def(py::init([](py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast> nums,
                       int precision_bits) {
             if (nums.ndim() != 2) throw ValidationError("numerators must be a 2-d array (N, d)");
             const auto n = static_cast<std::size_t>(nums.shape(0));
             const auto d = static_cast<std::size_t>(nums.shape(1));
             std::vector<std::uint64_t> coords(nums.data(), nums.data() + n * d);
             return DyadicPointSet(d, precision_bits, std::move(coords));
           }),
           py::arg("numerators"), py::arg("precision_bits"))
      .def_property_readonly("dim", &DyadicPointSet::dim)
      .def_property_readonly("precision_bits", &DyadicPointSet::precision_bits)
      .def_property_readonly("effective_precision", &DyadicPointSet::effective_precision)
      .def("__len__", &DyadicPointSet::size)
      .def("numerators",
           [](const DyadicPointSet& p) {
             py::array_t<std::uint64_t> a({p.size(), p.dim()});
             std::copy(p.coords().begin(), p.coords().end(), a.mutable_data());
             return a;
           })
      .def("values",
           [](const DyadicPointSet& p) {
             py::array_t<double> a({p.size(), p.dim()});
             auto v = a.mutable_unchecked<2>();
             for (std::size_t k = 0; k < p.size(); ++k)
               for (std::size_t i = 0; i < p.dim(); ++i) v(k, i) = p.value(k, i);
             return a;
           })
      .def("to_csv",
           [](const DyadicPointSet& p) {
             std::ostringstream s;
             write_points_csv(s, p);
             return s.str();
           })
      .def_static("load", [](const std::string& path) {
        return with_file(path, [](std::istream& in) { return read_points(in); });
      });

  m.def("points", &prefix, py::arg("genmat"), py::arg("count"), py::arg("start") = 0,
        "Points with indices start .. start+count-1");

  m.def(
      "minimal_t",
      [](const GeneratingMatrixSet& g, std::size_t n, int alpha) { return to_python(to_json(minimal_t(g, n, alpha))); },
      py::arg("genmat"), py::arg("n"), py::arg("alpha") = 1);
  m.def(
      "sequence_check",
      [](const GeneratingMatrixSet& g, std::size_t n_max, int alpha, int t) {
        return to_python(to_json(is_order_alpha_sequence_prefix(g, n_max, alpha, t), n_max, alpha, t));
      },
      py::arg("genmat"), py::arg("n_max"), py::arg("alpha"), py::arg("t"));
  m.def("minimal_sequence_t", &minimal_sequence_t, py::arg("genmat"), py::arg("n_max"), py::arg("alpha") = 1);

  py::class_<HaarTable>(m, "HaarTable")
      .def_property_readonly("dim", &HaarTable::dim)
      .def_property_readonly("count", &HaarTable::count)
      .def_property_readonly("box_limit", &HaarTable::box_limit)
      .def_property_readonly("stored_entries", &HaarTable::stored_entries)
      .def(
          "coefficient",
          [](const HaarTable& t, std::vector<int> j, std::vector<std::uint64_t> mm) {
            const HaarCoefficient c = t.coefficient({std::move(j), std::move(mm)});
            return py::make_tuple(to_string(c.counting.to_rational()), to_string(c.volume.to_rational()),
                                  to_string(c.value().to_rational()));
          },
          py::arg("j"), py::arg("m"), "(counting, volume, value) as 'num/den' strings")
      .def("to_csv", [](const HaarTable& t) {
        std::ostringstream s;
        write_haar_csv(s, t);
        return s.str();
      });

  m.def(
      "build_table",
      [](const DyadicPointSet& p, std::optional<int> box_limit) { return build_table(p, box_limit); },
      py::arg("points"), py::arg("box_limit") = py::none());

  m.def(
      "norm",
      [](const DyadicPointSet& points, const std::string& kind, const std::string& method, double p, double q,
         double s, double beta, std::optional<int> depth, std::optional<int> box_limit, int resolution,
         std::vector<double> p_grid, const std::string& arithmetic) {
        const NormSpec spec =
            make_spec(kind, method, p, q, s, beta, depth, box_limit, resolution, std::move(p_grid), arithmetic);
        NormReport lower;
        const NormReport r = evaluate_norm(points, spec, nullptr, &lower);
        if (spec.kind == NormKind::triebel_bracket)
          return to_python(Json{{"lower", to_json(lower)}, {"upper", to_json(r)}});
        return to_python(to_json(r));
      },
      py::arg("points"), py::arg("kind") = "l2", py::arg("method") = "", py::arg("p") = 2.0, py::arg("q") = 2.0,
      py::arg("s") = 0.0, py::arg("beta") = 2.0, py::arg("depth") = py::none(), py::arg("box_limit") = py::none(),
      py::arg("resolution") = 256, py::arg("p_grid") = std::vector<double>{}, py::arg("arithmetic") = "auto",
      "Evaluate a discrepancy norm; returns the JSON report as a dict");

  m.def(
      "study",
      [](const GeneratingMatrixSet& g, const std::string& kind, int nmin, int nmax, double p, double q, double s,
         double beta) {
        const NormSpec spec = make_spec(kind, "", p, q, s, beta, std::nullopt, std::nullopt, 256, {}, "auto");
        py::list out;
        for (const auto& row : scaling_study(g, spec, dyadic_counts(nmin, nmax))) {
          py::dict d;
          d["N"] = row.count;
          d["value"] = row.value;
          d["normalized"] = row.normalized;
          d["exponent"] = row.exponent;
          d["theorem"] = row.theorem;
          out.append(d);
        }
        return out;
      },
      py::arg("genmat"), py::arg("kind"), py::arg("nmin"), py::arg("nmax"), py::arg("p") = 2.0, py::arg("q") = 2.0,
      py::arg("s") = 0.0, py::arg("beta") = 2.0, "Rate-normalised norms for N = 2^nmin .. 2^nmax");

  m.def(
      "lift_check",
      [](const GeneratingMatrixSet& g, std::uint64_t count) { return to_python(to_json(lift_inequality_check(g, count))); },
      py::arg("genmat"), py::arg("count"));
}
