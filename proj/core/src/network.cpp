#include "rac/network.hpp"

#include <random>
#include <sstream>

namespace rac {

int BlockSpec::width(int j) const {
  if (j == 0) return input_dim;
  if (j <= depth()) return hidden_widths[static_cast<size_t>(j) - 1];
  return output_dim;
}

ActivationKind BlockSpec::layer_activation(int j) const {
  if (j == depth() && outer_activation) return *outer_activation;
  return hidden_activation;
}

int BlockSpec::param_count() const {
  int total = 0;
  for (int j = 0; j <= depth(); ++j) total += weight_rows(j) * weight_cols(j);
  return total;
}

void BlockSpec::validate() const {
  if (input_dim <= 0 || output_dim <= 0)
    throw DimensionError("block input and output dimensions must be positive");
  if (hidden_widths.empty())
    throw DimensionError("block needs at least one hidden layer");
  for (int w : hidden_widths)
    if (w <= 0) throw DimensionError("hidden widths must be positive");
}

void NetworkSpec::validate() const {
  if (input_dim <= 0 || output_dim <= 0)
    throw DimensionError("network input and output dimensions must be positive");
  if (blocks.empty()) throw DimensionError("network needs at least one block");
  for (const auto& b : blocks) b.validate();
  std::ostringstream bad;
  if (blocks[0].input_dim != input_dim)
    bad << "block 0 input " << blocks[0].input_dim << " != network input " << input_dim << "; ";
  if (blocks[0].output_dim != output_dim)
    bad << "block 0 output " << blocks[0].output_dim << " != network output " << output_dim << "; ";
  for (size_t i = 1; i < blocks.size(); ++i) {
    // Residual addition requires every later block to map output_dim onto itself.
    if (blocks[i].input_dim != output_dim || blocks[i].output_dim != output_dim)
      bad << "block " << i << " must map " << output_dim << " -> " << output_dim << "; ";
  }
  const std::string msg = bad.str();
  if (!msg.empty()) throw DimensionError("residual-incompatible architecture: " + msg);
}

int param_count(const NetworkSpec& spec) {
  spec.validate();
  int total = 0;
  for (const auto& b : spec.blocks) total += b.param_count();
  return total;
}

ParamLayout::ParamLayout(const NetworkSpec& spec) {
  spec.validate();
  entries_.resize(spec.blocks.size());
  int offset = 0;
  for (size_t i = 0; i < spec.blocks.size(); ++i) {
    const BlockSpec& b = spec.blocks[i];
    entries_[i].resize(static_cast<size_t>(b.depth()) + 1);
    for (int j = 0; j <= b.depth(); ++j) {
      Entry& e = entries_[i][static_cast<size_t>(j)];
      e.offset = offset;
      e.rows = b.weight_rows(j);
      e.cols = b.weight_cols(j);
      offset += e.rows * e.cols;
    }
  }
  total_ = offset;
}

int ParamLayout::layer_count(int block) const {
  return static_cast<int>(entries_.at(static_cast<size_t>(block)).size());
}

int ParamLayout::offset(int block, int layer) const {
  return entries_.at(static_cast<size_t>(block)).at(static_cast<size_t>(layer)).offset;
}

int ParamLayout::rows(int block, int layer) const {
  return entries_.at(static_cast<size_t>(block)).at(static_cast<size_t>(layer)).rows;
}

int ParamLayout::cols(int block, int layer) const {
  return entries_.at(static_cast<size_t>(block)).at(static_cast<size_t>(layer)).cols;
}

Eigen::Map<const Matrix> ParamVector::matrix(int block, int layer) const {
  return {theta.data() + layout.offset(block, layer), layout.rows(block, layer),
          layout.cols(block, layer)};
}

Eigen::Map<Matrix> ParamVector::matrix(int block, int layer) {
  return {theta.data() + layout.offset(block, layer), layout.rows(block, layer),
          layout.cols(block, layer)};
}

ParamVector zero_params(const NetworkSpec& spec) {
  ParamVector pv;
  pv.layout = ParamLayout(spec);
  pv.theta = Vector::Zero(pv.layout.total());
  return pv;
}

ParamVector vectorize(const NetworkSpec& spec, const std::vector<BlockWeights>& weights) {
  ParamVector pv = zero_params(spec);
  if (weights.size() != spec.blocks.size())
    throw DimensionError("weight set does not match block count");
  for (int i = 0; i < pv.layout.block_count(); ++i) {
    const BlockWeights& bw = weights[static_cast<size_t>(i)];
    if (static_cast<int>(bw.size()) != pv.layout.layer_count(i))
      throw DimensionError("weight set does not match layer count of block " + std::to_string(i));
    for (int j = 0; j < pv.layout.layer_count(i); ++j) {
      const Matrix& v = bw[static_cast<size_t>(j)];
      if (v.rows() != pv.layout.rows(i, j) || v.cols() != pv.layout.cols(i, j))
        throw DimensionError("weight matrix shape mismatch at block " + std::to_string(i) +
                             ", layer " + std::to_string(j));
      pv.matrix(i, j) = v;
    }
  }
  return pv;
}

std::vector<BlockWeights> devectorize(const ParamVector& pv) {
  if (pv.theta.size() != pv.layout.total())
    throw DimensionError("parameter vector length does not match its layout");
  std::vector<BlockWeights> weights(static_cast<size_t>(pv.layout.block_count()));
  for (int i = 0; i < pv.layout.block_count(); ++i) {
    weights[static_cast<size_t>(i)].reserve(static_cast<size_t>(pv.layout.layer_count(i)));
    for (int j = 0; j < pv.layout.layer_count(i); ++j)
      weights[static_cast<size_t>(i)].push_back(pv.matrix(i, j));
  }
  return weights;
}

ParamVector random_params(const NetworkSpec& spec, double w0, double theta_bar,
                          std::uint64_t seed) {
  ParamVector pv = zero_params(spec);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-w0, w0);
  for (Eigen::Index k = 0; k < pv.theta.size(); ++k) pv.theta[k] = dist(rng);
  if (theta_bar > 0.0) {
    const double shell = 0.9 * theta_bar;
    const double norm = pv.theta.norm();
    if (norm > shell) pv.theta *= shell / norm;
  }
  return pv;
}

Vector pre_activation(ActivationKind kind, const Vector& kappa) {
  Vector out(kappa.size() + 1);
  for (Eigen::Index l = 0; l < kappa.size(); ++l) out[l] = activation_eval(kind, kappa[l]);
  out[kappa.size()] = 1.0;
  return out;
}

Matrix activation_jacobian(ActivationKind kind, const Vector& pre_image) {
  Matrix jac = Matrix::Zero(pre_image.size() + 1, pre_image.size());
  for (Eigen::Index l = 0; l < pre_image.size(); ++l)
    jac(l, l) = activation_deriv(kind, pre_image[l]);
  return jac;
}

Matrix pre_activation_jacobian(ActivationKind kind, const Vector& kappa) {
  return activation_jacobian(kind, kappa);
}

namespace {

// Shared block evaluation; `weight(j)` yields V_{i,j} however it is stored.
template <class WeightAt>
Vector eval_block(const BlockSpec& block, WeightAt&& weight, const Vector& augmented_input,
                  BlockCache* cache) {
  if (augmented_input.size() != block.input_dim + 1)
    throw DimensionError("block input must be augmented to length " +
                         std::to_string(block.input_dim + 1));
  if (cache) {
    cache->layer_inputs.clear();
    cache->linear_out.clear();
    cache->layer_inputs.reserve(static_cast<size_t>(block.depth()) + 1);
    cache->linear_out.reserve(static_cast<size_t>(block.depth()) + 1);
  }
  Vector cur = augmented_input;
  Vector lin;
  for (int j = 0; j <= block.depth(); ++j) {
    if (j > 0) {
      const ActivationKind act = block.layer_activation(j);
      Vector next(lin.size() + 1);
      for (Eigen::Index l = 0; l < lin.size(); ++l) next[l] = activation_eval(act, lin[l]);
      next[lin.size()] = 1.0;
      cur = std::move(next);
    }
    const auto& v = weight(j);
    if (v.rows() != cur.size())
      throw DimensionError("weight rows do not match layer input at layer " + std::to_string(j));
    if (cache) cache->layer_inputs.push_back(cur);
    lin = v.transpose() * cur;
    if (cache) cache->linear_out.push_back(lin);
  }
  return lin;
}

}  // namespace

Vector block_forward(const BlockSpec& block, const BlockWeights& weights,
                     const Vector& augmented_input, BlockCache* cache) {
  block.validate();
  if (static_cast<int>(weights.size()) != block.depth() + 1)
    throw DimensionError("block expects " + std::to_string(block.depth() + 1) +
                         " weight matrices");
  return eval_block(
      block, [&](int j) -> const Matrix& { return weights[static_cast<size_t>(j)]; },
      augmented_input, cache);
}

Vector resnet_forward(const NetworkSpec& spec, const ParamVector& pv, const Vector& x,
                      LayerCache* cache) {
  spec.validate();
  if (x.size() != spec.input_dim)
    throw DimensionError("input length " + std::to_string(x.size()) + " != network input " +
                         std::to_string(spec.input_dim));
  if (pv.layout.total() != pv.theta.size() || pv.layout.total() != param_count(spec))
    throw DimensionError("parameter vector does not match the architecture");

  if (cache) {
    cache->blocks.assign(spec.blocks.size(), BlockCache{});
    cache->input = x;
    cache->theta = pv.theta;
  }

  Vector augmented(x.size() + 1);
  augmented.head(x.size()) = x;
  augmented[x.size()] = 1.0;

  BlockCache* bc = cache ? &cache->blocks[0] : nullptr;
  if (bc) bc->block_input = x;
  Vector kappa = eval_block(
      spec.blocks[0], [&](int j) { return pv.matrix(0, j); }, augmented, bc);

  for (size_t i = 1; i < spec.blocks.size(); ++i) {
    bc = cache ? &cache->blocks[i] : nullptr;
    if (bc) bc->block_input = kappa;
    const Vector psi = pre_activation(spec.shortcut_activation, kappa);
    kappa += eval_block(
        spec.blocks[i], [&](int j) { return pv.matrix(static_cast<int>(i), j); }, psi, bc);
  }
  if (cache) cache->output = kappa;
  return kappa;
}

Matrix resnet_jacobian(const NetworkSpec& spec, const ParamVector& pv, const Vector& x,
                       const LayerCache& cache) {
  spec.validate();
  if (cache.blocks.size() != spec.blocks.size() || cache.input.size() != x.size() ||
      cache.input != x || cache.theta.size() != pv.theta.size() || cache.theta != pv.theta)
    throw CacheMismatchError("layer cache was not built from these parameters and input");

  const int out_dim = spec.output_dim;
  Matrix jac = Matrix::Zero(out_dim, pv.layout.total());

  // One backward sweep: `downstream` accumulates the product of the residual
  // factors of all blocks after i, and `tail` the within-block product of
  // weight-transpose times activation Jacobian above layer j.
  Matrix downstream = Matrix::Identity(out_dim, out_dim);
  for (int i = static_cast<int>(spec.blocks.size()) - 1; i >= 0; --i) {
    const BlockSpec& block = spec.blocks[static_cast<size_t>(i)];
    const BlockCache& bc = cache.blocks[static_cast<size_t>(i)];
    Matrix tail = Matrix::Identity(out_dim, out_dim);
    for (int j = block.depth(); j >= 0; --j) {
      const Matrix slab_lhs = downstream * tail;  // out_dim x width(j+1)
      const Vector& layer_input = bc.layer_inputs[static_cast<size_t>(j)];
      const int rows = pv.layout.rows(i, j);
      const int base = pv.layout.offset(i, j);
      for (int c = 0; c < pv.layout.cols(i, j); ++c)
        jac.block(0, base + c * rows, out_dim, rows) =
            slab_lhs.col(c) * layer_input.transpose();
      if (j > 0) {
        const Matrix act = activation_jacobian(block.layer_activation(j),
                                               bc.linear_out[static_cast<size_t>(j) - 1]);
        tail = tail * (pv.matrix(i, j).transpose() * act);
      }
    }
    if (i > 0) {
      const Matrix psi =
          pre_activation_jacobian(spec.shortcut_activation, bc.block_input);
      downstream = downstream * (Matrix::Identity(out_dim, out_dim) +
                                 tail * pv.matrix(i, 0).transpose() * psi);
    }
  }
  return jac;
}

}  // namespace rac
