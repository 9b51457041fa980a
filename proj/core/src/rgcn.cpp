#include "hostnet/rgcn.hpp"

#include <cmath>
#include <string>

#include "hostnet/errors.hpp"

namespace hostnet {

namespace {

void check_input(const RgcnLayerParams& params, const NeighborIndex& index,
                 const Matrix& h, const char* where) {
  if (h.rows() != static_cast<std::size_t>(index.node_count)) {
    throw DimensionError(std::string(where) + ": " + std::to_string(h.rows()) +
                         " state rows for " + std::to_string(index.node_count) + " nodes");
  }
  if (h.cols() != params.input_dim()) {
    throw DimensionError(std::string(where) + ": state dimension " +
                         std::to_string(h.cols()) + " != layer input dimension " +
                         std::to_string(params.input_dim()));
  }
  for (int r = 0; r < kRelationCount; ++r) {
    if (params.weight[r].rows() != params.input_dim() ||
        params.weight[r].cols() != params.output_dim() ||
        params.bias[r].size() != params.output_dim() ||
        params.gate_weight[r].size() != params.input_dim()) {
      throw DimensionError(std::string(where) + ": inconsistent parameter shapes for relation " +
                           relation_name(static_cast<RelationKind>(r)));
    }
  }
  if (!all_finite(h)) {
    throw NumericError(std::string(where) + ": non-finite node state");
  }
}

// proj = h * W (n x d_out), the per-node message before normalization.
Matrix project(const Matrix& h, const Matrix& w) {
  Matrix proj(h.rows(), w.cols());
  for (std::size_t j = 0; j < h.rows(); ++j) {
    for (std::size_t m = 0; m < h.cols(); ++m) {
      const double hv = h(j, m);
      if (hv == 0.0) continue;
      for (std::size_t k = 0; k < w.cols(); ++k) {
        proj(j, k) += hv * w(m, k);
      }
    }
  }
  return proj;
}

}  // namespace

RgcnLayerParams RgcnLayerParams::zeros(std::size_t d_in, std::size_t d_out) {
  RgcnLayerParams p;
  for (int r = 0; r < kRelationCount; ++r) {
    p.weight[r] = Matrix(d_in, d_out);
    p.bias[r] = Vec(d_out, 0.0);
    p.gate_weight[r] = Vec(d_in, 0.0);
    p.gate_bias[r] = 0.0;
  }
  return p;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double gate_value(const RgcnLayerParams& params, RelationKind r,
                  std::span<const double> h_u) {
  const Vec& w = params.gate_weight[static_cast<int>(r)];
  if (h_u.size() != w.size()) {
    throw DimensionError("gate_value: state dimension " + std::to_string(h_u.size()) +
                         " != gate dimension " + std::to_string(w.size()));
  }
  double s = params.gate_bias[static_cast<int>(r)];
  for (std::size_t m = 0; m < w.size(); ++m) s += h_u[m] * w[m];
  return sigmoid(s);
}

Matrix rgcn_forward(const RgcnLayerParams& params, const NeighborIndex& index,
                    const Matrix& h, Activation activation) {
  check_input(params, index, h, "rgcn_forward");
  const std::size_t n = h.rows();
  const std::size_t d_out = params.output_dim();
  Matrix out(n, d_out);

  for (int r = 0; r < kRelationCount; ++r) {
    const Matrix proj = project(h, params.weight[r]);
    const Vec& bias = params.bias[r];
    for (std::size_t i = 0; i < n; ++i) {
      auto row = out.row(i);
      // Bias once per relation per node, neighbors or not.
      for (std::size_t k = 0; k < d_out; ++k) row[k] += bias[k];
      const auto& nbrs = index.neighbors[r][i];
      if (nbrs.empty()) continue;
      const double inv_c = 1.0 / index.norm[r][i];
      for (int j : nbrs) {
        const auto msg = proj.row(static_cast<std::size_t>(j));
        for (std::size_t k = 0; k < d_out; ++k) row[k] += inv_c * msg[k];
      }
    }
  }

  if (activation == Activation::Relu) {
    for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  }
  return out;
}

GatedForwardTrace gated_rgcn_forward_trace(const RgcnLayerParams& params,
                                           const NeighborIndex& index, const Matrix& h) {
  check_input(params, index, h, "gated_rgcn_forward");
  const std::size_t n = h.rows();
  const std::size_t d_out = params.output_dim();
  Matrix pre(n, d_out);

  for (int r = 0; r < kRelationCount; ++r) {
    const Matrix proj = project(h, params.weight[r]);
    const Vec& bias = params.bias[r];
    // Gates depend only on the sending node and the relation.
    Vec gates(n);
    for (std::size_t j = 0; j < n; ++j) {
      gates[j] = gate_value(params, static_cast<RelationKind>(r), h.row(j));
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto row = pre.row(i);
      const auto& nbrs = index.neighbors[r][i];
      if (nbrs.empty()) continue;
      const double inv_c = 1.0 / index.norm[r][i];
      for (int j : nbrs) {
        const double g = gates[static_cast<std::size_t>(j)];
        const auto msg = proj.row(static_cast<std::size_t>(j));
        for (std::size_t k = 0; k < d_out; ++k) {
          row[k] += g * (inv_c * msg[k] + bias[k]);
        }
      }
    }
  }

  GatedForwardTrace trace;
  trace.output = pre;
  for (double& v : trace.output.data()) v = v > 0.0 ? v : 0.0;
  trace.pre_activation = std::move(pre);
  return trace;
}

Matrix gated_rgcn_forward(const RgcnLayerParams& params, const NeighborIndex& index,
                          const Matrix& h) {
  return gated_rgcn_forward_trace(params, index, h).output;
}

Vec mean_pool(const Matrix& h) {
  if (h.rows() == 0) throw DataError("mean_pool: empty node state matrix");
  Vec mean(h.cols(), 0.0);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    const auto row = h.row(i);
    for (std::size_t k = 0; k < h.cols(); ++k) mean[k] += row[k];
  }
  const double inv_n = 1.0 / static_cast<double>(h.rows());
  for (double& v : mean) v *= inv_n;
  return mean;
}

RgcnGradients gated_rgcn_backward(const RgcnLayerParams& params,
                                  const NeighborIndex& index, const Matrix& h,
                                  const Matrix& upstream) {
  check_input(params, index, h, "gated_rgcn_backward");
  const std::size_t n = h.rows();
  const std::size_t d_in = params.input_dim();
  const std::size_t d_out = params.output_dim();
  if (upstream.rows() != n || upstream.cols() != d_out) {
    throw DimensionError("gated_rgcn_backward: upstream gradient is " +
                         std::to_string(upstream.rows()) + "x" +
                         std::to_string(upstream.cols()) + ", expected " +
                         std::to_string(n) + "x" + std::to_string(d_out));
  }

  RgcnGradients grads;
  for (int r = 0; r < kRelationCount; ++r) {
    grads.weight[r] = Matrix(d_in, d_out);
    grads.bias[r] = Vec(d_out, 0.0);
    grads.gate_weight[r] = Vec(d_in, 0.0);
    grads.gate_bias[r] = 0.0;
  }
  grads.input = Matrix(n, d_in);

  // Recompute the forward internals; the ReLU mask uses strict positivity
  // (subgradient 0 at the kink).
  const Matrix pre = gated_rgcn_forward_trace(params, index, h).pre_activation;
  Matrix masked(n, d_out);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d_out; ++k) {
      masked(i, k) = pre(i, k) > 0.0 ? upstream(i, k) : 0.0;
    }
  }

  for (int r = 0; r < kRelationCount; ++r) {
    const Matrix& w = params.weight[r];
    const Vec& bias = params.bias[r];
    const Vec& gate_w = params.gate_weight[r];
    const Matrix proj = project(h, w);
    Vec gates(n);
    for (std::size_t j = 0; j < n; ++j) {
      gates[j] = gate_value(params, static_cast<RelationKind>(r), h.row(j));
    }

    for (std::size_t i = 0; i < n; ++i) {
      const auto& nbrs = index.neighbors[r][static_cast<int>(i)];
      if (nbrs.empty()) continue;
      const double inv_c = 1.0 / index.norm[r][static_cast<int>(i)];
      const auto p_row = masked.row(i);
      for (int j_int : nbrs) {
        const auto j = static_cast<std::size_t>(j_int);
        const double g = gates[j];
        const auto h_row = h.row(j);
        const auto msg = proj.row(j);

        // dot of upstream (post-mask) with the ungated edge message.
        double dot_pm = 0.0;
        for (std::size_t k = 0; k < d_out; ++k) {
          dot_pm += p_row[k] * (inv_c * msg[k] + bias[k]);
        }

        // Gate path: ds = dL/d(pre-sigmoid score).
        const double ds = dot_pm * g * (1.0 - g);
        grads.gate_bias[r] += ds;
        auto gin = grads.input.row(j);
        for (std::size_t m = 0; m < d_in; ++m) {
          grads.gate_weight[r][m] += ds * h_row[m];
          gin[m] += ds * gate_w[m];
        }

        // Message path: bias, weight, and input contributions scaled by g.
        const double gc = g * inv_c;
        for (std::size_t k = 0; k < d_out; ++k) {
          const double pk = p_row[k];
          if (pk == 0.0) continue;
          grads.bias[r][k] += g * pk;
          for (std::size_t m = 0; m < d_in; ++m) {
            grads.weight[r](m, k) += gc * h_row[m] * pk;
            gin[m] += gc * w(m, k) * pk;
          }
        }
      }
    }
  }
  return grads;
}

}  // namespace hostnet
