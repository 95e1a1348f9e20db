#include "rbfplast/operators.hpp"

#include <sstream>

#include "rbfplast/errors.hpp"
#include "rbfplast/kernels.hpp"

namespace rbfplast {

std::vector<double> OperatorSet::apply(DiffOp op, std::span<const double> field) const {
  std::vector<double> out(node_count());
  omp::spmv(matrix(op), field, out);
  return out;
}

double OperatorSet::apply_at(DiffOp op, std::size_t node, std::span<const double> field) const {
  const auto st = stencil(node);
  const auto w = weights(op, node);
  double s = 0.0;
  for (std::size_t j = 0; j < st.size(); ++j) s += w[j] * field[st[j]];
  return s;
}

OperatorSet assemble_operators(std::span<const Vec2> positions, const NeighborIndex& index, const RbfSettings& settings,
                               Execution exec) {
  const std::size_t nodes = positions.size();
  const std::size_t n = settings.stencil_size;
  if (n > nodes) {
    std::ostringstream msg;
    msg << "assemble_operators: stencil size " << n << " exceeds node count " << nodes;
    throw InvalidArgument(msg.str());
  }
  if (index.size() != nodes) throw InvalidArgument("assemble_operators: neighbor index does not match node set");

  OperatorSet ops;
  ops.settings_ = settings;
  ops.stencil_size_ = n;
  ops.stencils_.resize(nodes * n);
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto nn = index.query(positions[i], n);
    std::copy(nn.begin(), nn.end(), ops.stencils_.begin() + static_cast<std::ptrdiff_t>(i * n));
    if (nn.front() != i) {
      // A coincident node would make the local system singular anyway; keep
      // the center first so weights()[0] always refers to the node itself.
      for (std::size_t j = 1; j < n; ++j)
        if (ops.stencils_[i * n + j] == i) std::swap(ops.stencils_[i * n], ops.stencils_[i * n + j]);
    }
  }

  WeightTable table;
  if (exec == Execution::parallel)
    omp::stencil_weights(positions, ops.stencils_, kAllOps, settings, table);
  else
    serial::stencil_weights(positions, ops.stencils_, kAllOps, settings, table);

  std::ostringstream failures;
  std::size_t failed = 0;
  for (const auto& e : table.errors) {
    if (e.empty()) continue;
    if (failed++ < 10) failures << "\n  " << e;
  }
  if (failed) {
    std::ostringstream msg;
    msg << "assemble_operators: " << failed << " stencil(s) failed" << failures.str();
    throw SingularMatrixError(msg.str());
  }

  ops.scales_ = std::move(table.scales);
  for (std::size_t o = 0; o < kAllOps.size(); ++o) {
    ops.weights_[o] = std::move(table.weights[o]);
    std::vector<Triplet> t;
    t.reserve(nodes * n);
    for (std::size_t i = 0; i < nodes; ++i)
      for (std::size_t j = 0; j < n; ++j) t.push_back({i, ops.stencils_[i * n + j], ops.weights_[o][i * n + j]});
    ops.matrices_[o] = SparseMatrix::from_triplets(nodes, nodes, std::move(t));
  }
  return ops;
}

}  // namespace rbfplast
