#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "rac/activation.hpp"
#include "rac/errors.hpp"

namespace rac {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// One fully connected feedforward block. Layer widths run
// input_dim, hidden_widths..., output_dim. Every weight matrix V_j has shape
// (width_j + 1) x width_{j+1}; the extra row holds the bias terms, fed by the
// augmenting 1 appended to each layer input. Callers never supply the 1
// themselves except through the explicit augmented-input entry points.
struct BlockSpec {
  int input_dim = 0;
  std::vector<int> hidden_widths;  // at least one hidden layer
  int output_dim = 0;
  ActivationKind hidden_activation = ActivationKind::Tanh;
  // Activation of the last hidden layer (the one feeding the output weights).
  // Earlier hidden layers use hidden_activation. Unset means all layers share
  // hidden_activation.
  std::optional<ActivationKind> outer_activation;

  int depth() const { return static_cast<int>(hidden_widths.size()); }

  // L_j for j = 0..depth()+1.
  int width(int j) const;

  // Activation applied between linear maps j-1 and j, for j = 1..depth().
  ActivationKind layer_activation(int j) const;

  int weight_rows(int j) const { return width(j) + 1; }
  int weight_cols(int j) const { return width(j + 1); }
  int param_count() const;

  void validate() const;
};

// A residual network made of blocks[0..b]. blocks[0] performs the dimension
// change input_dim -> output_dim on the augmented input; every later block
// consumes the pre-activated previous state and adds its output to it.
struct NetworkSpec {
  int input_dim = 0;
  int output_dim = 0;
  std::vector<BlockSpec> blocks;
  ActivationKind shortcut_activation = ActivationKind::Swish;

  // Number of residual additions (b); the zeroth block is not one of them.
  int residual_blocks() const { return static_cast<int>(blocks.size()) - 1; }

  void validate() const;
};

int param_count(const NetworkSpec& spec);

// Start offset and shape of each weight matrix inside the flat parameter
// vector. Matrices are stored column-major, matching Eigen's default, so a
// segment of theta maps onto V_{i,j} without copying.
class ParamLayout {
 public:
  ParamLayout() = default;
  explicit ParamLayout(const NetworkSpec& spec);

  int total() const { return total_; }
  int block_count() const { return static_cast<int>(entries_.size()); }
  int layer_count(int block) const;
  int offset(int block, int layer) const;
  int rows(int block, int layer) const;
  int cols(int block, int layer) const;

  bool operator==(const ParamLayout&) const = default;

 private:
  struct Entry {
    int offset = 0, rows = 0, cols = 0;
    bool operator==(const Entry&) const = default;
  };
  std::vector<std::vector<Entry>> entries_;
  int total_ = 0;
};

struct ParamVector {
  ParamLayout layout;
  Vector theta;

  Eigen::Map<const Matrix> matrix(int block, int layer) const;
  Eigen::Map<Matrix> matrix(int block, int layer);
};

using BlockWeights = std::vector<Matrix>;

ParamVector zero_params(const NetworkSpec& spec);
ParamVector vectorize(const NetworkSpec& spec, const std::vector<BlockWeights>& weights);
std::vector<BlockWeights> devectorize(const ParamVector& pv);

// Entries drawn uniformly from [-w0, w0]; if the draw lands outside 90% of
// the search radius it is radially rescaled back onto that shell so the
// estimate starts in the interior, clear of the projection boundary layer.
// theta_bar <= 0 disables the rescale.
ParamVector random_params(const NetworkSpec& spec, double w0, double theta_bar,
                          std::uint64_t seed);

// Intermediates of one forward pass; enough to evaluate the Jacobian without
// re-running the network.
struct BlockCache {
  Vector block_input;                // kappa_i, unaugmented
  std::vector<Vector> layer_inputs;  // augmented input of linear map j
  std::vector<Vector> linear_out;    // V_j^T * layer_inputs[j]
};

struct LayerCache {
  std::vector<BlockCache> blocks;
  Vector input;  // network input the cache was built at
  Vector theta;  // parameters the cache was built at
  Vector output;
};

// [rho(kappa); 1], the pre-activation shortcut map.
Vector pre_activation(ActivationKind kind, const Vector& kappa);

// Elementwise derivatives stacked above a zero bias row: (L+1) x L.
Matrix activation_jacobian(ActivationKind kind, const Vector& pre_image);
Matrix pre_activation_jacobian(ActivationKind kind, const Vector& kappa);

// augmented_input must have length block.input_dim + 1 with a trailing 1.
Vector block_forward(const BlockSpec& block, const BlockWeights& weights,
                     const Vector& augmented_input, BlockCache* cache = nullptr);

Vector resnet_forward(const NetworkSpec& spec, const ParamVector& pv, const Vector& x,
                      LayerCache* cache = nullptr);

// d output / d theta, output_dim x param_count, columns ordered like the flat
// parameter vector. The cache must come from resnet_forward at the same
// (pv, x); anything else raises CacheMismatchError.
Matrix resnet_jacobian(const NetworkSpec& spec, const ParamVector& pv, const Vector& x,
                       const LayerCache& cache);

}  // namespace rac
