#pragma once

#include <memory>
#include <span>
#include <vector>

#include "wentzell/fem/assembly.hpp"

namespace wentzell {

/// A discrete pair (u, u_Gamma) in L2(Omega) + L2(Gamma).
///
/// Only the nodal vector is stored; the boundary component is the restriction
/// of it to the boundary nodes, so trace consistency holds by construction.
class ProductState {
 public:
  ProductState() = default;

  ProductState(const OperatorBundle& bundle, Vector coeffs)
      : coeffs_(std::move(coeffs)), boundary_nodes_(bundle.boundary_nodes) {
    require_same_size(coeffs_.size(), bundle.n_total(), "ProductState");
  }

  ProductState(std::shared_ptr<const std::vector<std::size_t>> boundary_nodes, Vector coeffs)
      : coeffs_(std::move(coeffs)), boundary_nodes_(std::move(boundary_nodes)) {}

  static ProductState constant(const OperatorBundle& bundle, cplx c) {
    return ProductState(bundle, Vector(bundle.n_total(), c));
  }

  const Vector& coeffs() const noexcept { return coeffs_; }
  std::span<const cplx> interior() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }

  /// u_Gamma on the boundary nodes, in `boundary_nodes` order.
  Vector boundary_trace() const {
    Vector r;
    r.reserve(boundary_nodes_->size());
    for (auto v : *boundary_nodes_) r.push_back(coeffs_[v]);
    return r;
  }

  const std::shared_ptr<const std::vector<std::size_t>>& boundary_nodes() const noexcept {
    return boundary_nodes_;
  }

  ProductState with_coeffs(Vector c) const { return ProductState(boundary_nodes_, std::move(c)); }

 private:
  Vector coeffs_;
  std::shared_ptr<const std::vector<std::size_t>> boundary_nodes_;
};

}  // namespace wentzell
