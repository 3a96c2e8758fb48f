#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ffm/baselines.hpp"
#include "ffm/clustering.hpp"
#include "ffm/error.hpp"
#include "ffm/metadescriptor.hpp"
#include "ffm/metrics.hpp"
#include "ffm/signal.hpp"
#include "ffm/streamgen.hpp"

namespace py = pybind11;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using F32Array = py::array_t<float, py::array::c_style | py::array::forcecast>;

template <typename T, typename Array>
ffm::BasicMatrix<T> to_matrix(const Array& a) {
  if (a.ndim() != 2) throw ffm::Error(ffm::ErrorKind::Dimension, "expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  std::vector<T> data(a.data(), a.data() + rows * cols);
  return ffm::BasicMatrix<T>(rows, cols, std::move(data));
}

template <typename T>
py::array_t<T> to_array(const ffm::BasicMatrix<T>& m) {
  py::array_t<T> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

ffm::ChunkedStream stream_from_chunks(const std::vector<F32Array>& chunks) {
  ffm::ChunkedStream s;
  for (const auto& c : chunks) s.chunks.push_back(to_matrix<float>(c));
  if (!s.chunks.empty()) {
    s.chunk_size = s.chunks.front().rows();
    s.features = s.chunks.front().cols();
  }
  ffm::validate_shape(s);
  return s;
}

py::dict meta_to_dict(const ffm::Metadescription& m) {
  py::dict d;
  d["R"] = to_array(m.R);
  d["selected"] = m.selected;
  d["variances"] = m.variances;
  d["n"] = m.n;
  d["d"] = m.d;
  return d;
}

ffm::Metadescription meta_from_dict(const py::dict& d) {
  ffm::Metadescription m;
  m.R = to_matrix<double>(d["R"].cast<F64Array>());
  m.selected = d["selected"].cast<std::vector<std::size_t>>();
  m.variances = d["variances"].cast<std::vector<double>>();
  m.n = d["n"].cast<std::size_t>();
  m.d = d["d"].cast<std::size_t>();
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Frequency-filtered metadescriptors for data-stream concept identification";

  // Module-lifetime reference; the type object is never released.
  static PyObject* ffm_error =
      PyErr_NewException("ffm._core.FfmError", PyExc_ValueError, nullptr);
  m.attr("FfmError") = py::handle(ffm_error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ffm::Error& e) {
      py::object instance = py::handle(ffm_error)(py::str(e.what()));
      instance.attr("kind") = py::str(std::string(ffm::to_string(e.kind())));
      PyErr_SetObject(ffm_error, instance.ptr());
    }
  });

  m.def("dft_real_half", [](const std::vector<double>& x) { return ffm::dft_real_half(x).values; },
        py::arg("x"), "Real parts of the first floor(d/2) DFT coefficients.");
  m.def("idft_single_component", &ffm::idft_single_component, py::arg("value"),
        py::arg("freq_index"), py::arg("d"), py::arg("n_out"),
        "Inverse transform of a spectrum holding one real coefficient (and its mirror).");

  m.def(
      "generate_stream",
      [](std::size_t n_chunks, std::size_t chunk_size, std::size_t n_features, std::size_t n_drifts,
         const std::string& drift_type, bool recurring, std::uint64_t seed, double center_spread) {
        ffm::StreamConfig cfg{n_chunks, chunk_size, n_features, n_drifts,
                              ffm::parse_drift_type(drift_type), recurring, seed, center_spread};
        auto s = ffm::make_stream(cfg);
        py::list chunks;
        for (const auto& c : s.stream.chunks) chunks.append(to_array(c));
        return py::make_tuple(chunks, s.ground_truth());
      },
      py::arg("n_chunks"), py::arg("chunk_size"), py::arg("n_features"), py::arg("n_drifts"),
      py::arg("drift_type") = "sudden", py::arg("recurring") = false, py::arg("seed") = 0,
      py::arg("center_spread") = ffm::StreamConfig::kDefaultCenterSpread,
      "Returns (list of chunk arrays, ground-truth concept per chunk).");

  m.def(
      "metadescribe",
      [](const std::vector<F32Array>& chunks, std::size_t n) {
        return meta_to_dict(ffm::metadescribe(stream_from_chunks(chunks), n));
      },
      py::arg("chunks"), py::arg("n") = 8);
  m.def(
      "render_chunk_image",
      [](const py::dict& meta, std::size_t t) {
        return to_array(ffm::render_chunk_image(meta_from_dict(meta), t));
      },
      py::arg("meta"), py::arg("chunk_index"));

  m.def(
      "ced_metafeatures",
      [](const F32Array& chunk) {
        const auto v = ffm::ced_metafeatures(to_matrix<float>(chunk)).values;
        return std::vector<double>(v.begin(), v.end());
      },
      py::arg("chunk"));
  m.def(
      "ced_describe",
      [](const std::vector<F32Array>& chunks) {
        return to_array(ffm::ced_describe(stream_from_chunks(chunks)));
      },
      py::arg("chunks"));
  m.def(
      "pca_describe",
      [](const std::vector<F32Array>& chunks) {
        return to_array(ffm::pca_describe(stream_from_chunks(chunks)));
      },
      py::arg("chunks"));

  m.def(
      "normalize",
      [](const F64Array& R, const std::string& method) {
        return to_array(ffm::normalize(to_matrix<double>(R), ffm::parse_normalization(method)));
      },
      py::arg("R"), py::arg("method") = "minmax");
  m.def(
      "kmeans",
      [](const F64Array& X, std::size_t clusters, std::uint64_t seed, std::size_t replications,
         std::size_t max_iter) {
        const auto r = ffm::kmeans(to_matrix<double>(X), clusters, seed, {replications, max_iter});
        py::dict d;
        d["labels"] = r.labels;
        d["centroids"] = to_array(r.centroids);
        d["inertia"] = r.inertia;
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("X"), py::arg("clusters"), py::arg("seed") = 0, py::arg("replications") = 10,
      py::arg("max_iter") = 300);
  m.def(
      "identify_concept_count",
      [](const F64Array& R, int c_min, int c_max, std::uint64_t seed, std::size_t replications,
         const std::string& normalization) {
        const auto r = ffm::identify_concept_count(to_matrix<double>(R), c_min, c_max, seed,
                                                   replications,
                                                   ffm::parse_normalization(normalization));
        py::dict d;
        d["scores"] = r.scores;
        d["best_c"] = r.best_c;
        d["labels"] = r.best_labels;
        return d;
      },
      py::arg("R"), py::arg("c_min"), py::arg("c_max"), py::arg("seed") = 0,
      py::arg("replications") = 10, py::arg("normalization") = "minmax");

  m.def(
      "external_scores",
      [](const std::vector<int>& truth, const std::vector<int>& pred) {
        const auto s = ffm::external_clustering_scores(truth, pred);
        py::dict d;
        d["nmi"] = s.nmi;
        d["adjusted_rand"] = s.adjusted_rand;
        d["completeness"] = s.completeness;
        d["homogeneity"] = s.homogeneity;
        return d;
      },
      py::arg("truth"), py::arg("pred"));
  m.def(
      "internal_scores",
      [](const F64Array& X, const std::vector<int>& labels) {
        const auto s = ffm::internal_clustering_scores(to_matrix<double>(X), labels);
        py::dict d;
        d["silhouette"] = s.silhouette;
        d["calinski_harabasz"] = s.calinski_harabasz;
        d["davies_bouldin"] = s.davies_bouldin;
        return d;
      },
      py::arg("X"), py::arg("labels"));
  m.def(
      "paired_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b, double alpha) {
        const auto r = ffm::paired_t_test(a, b, alpha);
        return py::make_tuple(r.t, r.p, r.significant);
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05);
}
