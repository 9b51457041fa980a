#pragma once

#include <array>
#include <span>

#include "hostnet/graph.hpp"
#include "hostnet/matrix.hpp"

namespace hostnet {

enum class Activation { Relu, Identity };

/// Parameters of one relational convolution layer. Each relation kind has
/// its own weight matrix (d_in x d_out), bias (d_out), and scalar edge
/// gate parameterized by a weight vector (d_in) and a bias.
struct RgcnLayerParams {
  std::array<Matrix, kRelationCount> weight;
  std::array<Vec, kRelationCount> bias;
  std::array<Vec, kRelationCount> gate_weight;
  std::array<double, kRelationCount> gate_bias{};

  std::size_t input_dim() const { return weight[0].rows(); }
  std::size_t output_dim() const { return weight[0].cols(); }

  /// Zero-valued parameters with the given shape.
  static RgcnLayerParams zeros(std::size_t d_in, std::size_t d_out);

  friend bool operator==(const RgcnLayerParams&, const RgcnLayerParams&) = default;
};

/// Gradients of a scalar loss with respect to one layer's parameters and
/// its input node states.
struct RgcnGradients {
  std::array<Matrix, kRelationCount> weight;
  std::array<Vec, kRelationCount> bias;
  std::array<Vec, kRelationCount> gate_weight;
  std::array<double, kRelationCount> gate_bias{};
  Matrix input;  // n x d_in
};

double sigmoid(double x);

/// Edge gate: sigmoid(h_u . gate_weight[r] + gate_bias[r]), strictly in
/// (0, 1) for finite inputs.
double gate_value(const RgcnLayerParams& params, RelationKind r,
                  std::span<const double> h_u);

/// Ungated relational convolution. For each node the incoming messages
/// W_r h_j are averaged per relation (normalizer c(i,r)), the relation
/// bias is added once per relation per node, relations are summed, and the
/// activation is applied.
Matrix rgcn_forward(const RgcnLayerParams& params, const NeighborIndex& index,
                    const Matrix& h, Activation activation);

/// Gated forward pass with ReLU. Every edge contributes
/// gate(h_j) * (W_r h_j / c(i,r) + B_r); the bias rides inside the gated
/// per-edge term, so nodes with no in-edges under a relation receive no
/// bias from it.
Matrix gated_rgcn_forward(const RgcnLayerParams& params, const NeighborIndex& index,
                          const Matrix& h);

/// Gated forward pass that also returns the pre-activation matrix, used by
/// gradient checks to stay away from the ReLU kink.
struct GatedForwardTrace {
  Matrix output;
  Matrix pre_activation;
};
GatedForwardTrace gated_rgcn_forward_trace(const RgcnLayerParams& params,
                                           const NeighborIndex& index, const Matrix& h);

/// Arithmetic mean of the node state rows. Throws DataError on an empty
/// matrix.
Vec mean_pool(const Matrix& h);

/// Exact analytic gradients of the gated forward pass, including the
/// gate's dependence on the sending node's state. `upstream` holds
/// dLoss/dOutput with the same shape as the forward output.
RgcnGradients gated_rgcn_backward(const RgcnLayerParams& params,
                                  const NeighborIndex& index, const Matrix& h,
                                  const Matrix& upstream);

}  // namespace hostnet
