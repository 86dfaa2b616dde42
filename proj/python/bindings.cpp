#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "gage/errors.hpp"
#include "gage/evaluation.hpp"
#include "gage/solver.hpp"

namespace py = pybind11;
using namespace gage;

namespace {

using Indices = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;
using Values = py::array_t<double, py::array::c_style | py::array::forcecast>;

SparseMatrix from_coo(std::size_t n_rows, std::size_t n_cols, const Indices& rows,
                      const Indices& cols, const Values& vals) {
  if (rows.ndim() != 1 || cols.ndim() != 1 || vals.ndim() != 1 || rows.size() != cols.size() ||
      rows.size() != vals.size()) {
    throw std::invalid_argument("COO arrays must be 1-d and of equal length");
  }
  const auto r = rows.unchecked<1>();
  const auto c = cols.unchecked<1>();
  const auto v = vals.unchecked<1>();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(rows.size()));
  for (py::ssize_t k = 0; k < rows.size(); ++k) {
    if (r(k) < 0 || c(k) < 0) throw std::invalid_argument("negative COO index");
    t.push_back({static_cast<std::size_t>(r(k)), static_cast<std::size_t>(c(k)), v(k)});
  }
  return SparseMatrix::from_triplets(n_rows, n_cols, std::move(t));
}

py::array_t<double> to_numpy(const DenseMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  if (m.size() > 0) std::memcpy(out.mutable_data(), m.data().data(), m.size() * sizeof(double));
  return out;
}

DenseMatrix from_numpy(const Values& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

CpdFactors factors_from(const Values& u, const Values& u_prime, const Values& c) {
  return {from_numpy(u), from_numpy(u_prime), from_numpy(c)};
}

py::dict embed_coo(std::size_t n, std::size_t d, const Indices& ar, const Indices& ac,
                   const Values& av, const Indices& xr, const Indices& xc, const Values& xv,
                   std::size_t rank, double lambda, double tol, std::size_t max_iter,
                   std::uint64_t seed, const std::string& init) {
  SolverConfig cfg;
  cfg.rank = rank;
  cfg.lambda = lambda;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.seed = seed;
  cfg.init = parse_init_method(init);
  const SparseMatrix adjacency = from_coo(n, n, ar, ac, av);
  const SparseMatrix attributes = from_coo(n, d, xr, xc, xv);

  EmbedResult r;
  {
    py::gil_scoped_release release;
    r = embed(adjacency, attributes, cfg);
  }
  py::dict out;
  out["embedding"] = to_numpy(r.embedding.e);
  out["u"] = to_numpy(r.factors.u);
  out["u_prime"] = to_numpy(r.factors.u_prime);
  out["c"] = to_numpy(r.factors.c);
  out["clamped_dims"] = r.embedding.clamped_dims;
  out["sweeps"] = r.als.sweeps;
  out["converged"] = r.als.converged;
  out["final_change"] = r.als.final_change;
  out["regularized"] = r.als.regularized;
  out["init_degenerate"] = r.init.degenerate;
  out["init_seconds"] = r.init_seconds;
  out["als_seconds"] = r.als_seconds;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attributed graph embeddings from a two-slab CPD of centered Gram matrices.";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("embed_coo", &embed_coo, py::arg("n"), py::arg("d"), py::arg("adj_rows"),
        py::arg("adj_cols"), py::arg("adj_vals"), py::arg("attr_rows"), py::arg("attr_cols"),
        py::arg("attr_vals"), py::arg("rank"), py::arg("lam"), py::arg("tol"),
        py::arg("max_iter"), py::arg("seed"), py::arg("init"));

  m.def(
      "assemble",
      [](const Values& u, const Values& u_prime, const Values& c, double lambda) {
        const EmbeddingMatrix e = assemble_embeddings(factors_from(u, u_prime, c), lambda);
        return py::make_tuple(to_numpy(e.e), e.clamped_dims);
      },
      py::arg("u"), py::arg("u_prime"), py::arg("c"), py::arg("lam"));

  m.def(
      "reconstruction_error",
      [](std::size_t n, std::size_t d, const Indices& ar, const Indices& ac, const Values& av,
         const Indices& xr, const Indices& xc, const Values& xv, const Values& u,
         const Values& u_prime, const Values& c) {
        const CenteredGramOperator op1(from_coo(n, n, ar, ac, av));
        const CenteredGramOperator op2(from_coo(n, d, xr, xc, xv));
        const ReconstructionError e = reconstruction_error(op1, op2, factors_from(u, u_prime, c));
        return py::make_tuple(e.slab1, e.slab2, e.estimated);
      },
      py::arg("n"), py::arg("d"), py::arg("adj_rows"), py::arg("adj_cols"), py::arg("adj_vals"),
      py::arg("attr_rows"), py::arg("attr_cols"), py::arg("attr_vals"), py::arg("u"),
      py::arg("u_prime"), py::arg("c"));

  m.def(
      "auc",
      [](const Values& pos, const Values& neg) {
        return auc({pos.data(), static_cast<std::size_t>(pos.size())},
                   {neg.data(), static_cast<std::size_t>(neg.size())});
      },
      py::arg("scores_pos"), py::arg("scores_neg"));
  m.def(
      "average_precision",
      [](const Values& pos, const Values& neg) {
        return average_precision({pos.data(), static_cast<std::size_t>(pos.size())},
                                 {neg.data(), static_cast<std::size_t>(neg.size())});
      },
      py::arg("scores_pos"), py::arg("scores_neg"));
}
