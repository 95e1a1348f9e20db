#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rbfplast/execution.hpp"
#include "rbfplast/kdtree.hpp"
#include "rbfplast/phs.hpp"
#include "rbfplast/sparse.hpp"
#include "rbfplast/stencil.hpp"
#include "rbfplast/types.hpp"

namespace rbfplast {

// RBF-FD weights of every DiffOp at every node, plus the assembled sparse
// matrices (one row per node, nonzeros confined to the node's stencil).
class OperatorSet {
 public:
  std::size_t node_count() const { return scales_.size(); }
  std::size_t stencil_size() const { return stencil_size_; }
  const RbfSettings& settings() const { return settings_; }

  std::span<const std::size_t> stencil(std::size_t node) const {
    return {stencils_.data() + node * stencil_size_, stencil_size_};
  }
  std::span<const double> weights(DiffOp op, std::size_t node) const {
    return {weights_[index(op)].data() + node * stencil_size_, stencil_size_};
  }
  double scale(std::size_t node) const { return scales_[node]; }
  const SparseMatrix& matrix(DiffOp op) const { return matrices_[index(op)]; }

  // Applies an operator to a nodal scalar field.
  std::vector<double> apply(DiffOp op, std::span<const double> field) const;
  // Applies an operator at one node.
  double apply_at(DiffOp op, std::size_t node, std::span<const double> field) const;

  friend OperatorSet assemble_operators(std::span<const Vec2>, const NeighborIndex&, const RbfSettings&, Execution);

 private:
  static std::size_t index(DiffOp op) { return static_cast<std::size_t>(op); }

  RbfSettings settings_;
  std::size_t stencil_size_ = 0;
  std::vector<std::size_t> stencils_;
  std::vector<double> scales_;
  std::array<std::vector<double>, kAllOps.size()> weights_;
  std::array<SparseMatrix, kAllOps.size()> matrices_;
};

// Stencils are the settings.stencil_size nearest nodes (center first).
// Throws SingularMatrixError listing every node whose local system failed.
OperatorSet assemble_operators(std::span<const Vec2> positions, const NeighborIndex& index, const RbfSettings& settings,
                               Execution exec = Execution::parallel);

}  // namespace rbfplast
