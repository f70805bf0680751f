#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccx/layers.hpp"

namespace ccx {

/**
 * Parsed neighborhood selector. Accepted spellings (braces and underscores
 * optional): B_{r,k}, B_{r,k}^T, A_{r,k}, coA_{r,k}, sB_{r}, sB_{r}^T,
 * Id_{k}, Mean_{k}; a ":norm" suffix asks for the symmetric normalization.
 */
struct Selector {
    enum class Type { Incidence, Adjacency, Coadjacency, Signed, Identity, Mean };
    Type type = Type::Identity;
    int r = 0;
    int k = 0;
    bool transpose = false;
    bool normalized = false;

    static Selector parse(const std::string& text);
    std::string canonical() const;
};

/// A resolved selector: matrix from src_rank cochains to dst_rank cochains.
/// Mean selectors land on a one-row readout space.
struct Operator {
    SparseMatrix matrix;
    int src_rank = 0;
    int dst_rank = 0;
    bool to_readout = false;
};

Operator resolve_selector(const CombinatorialComplex& cc, const Selector& s);

/// Signed permutation of the cells of one rank: (T H).row(i) = sign[i] * H.row(perm[i]).
struct CellTransform {
    std::vector<std::size_t> perm;
    std::vector<double> sign;

    SparseMatrix matrix() const;
    Matrix apply(const Matrix& h) const;
    static CellTransform identity(std::size_t n);
};

/// Operators keyed by canonical selector, plus the cell count of every rank.
struct OperatorSet {
    std::map<std::string, Operator> ops;
    std::map<int, std::size_t> cell_counts;

    /// T_dst G T_src^T for every operator; readout spaces are left alone.
    OperatorSet transformed(const std::map<int, CellTransform>& t) const;
};

struct NodeSpec {
    std::string id;
    int rank = 0;
    int dim = 1;
    bool readout = false;
    Combine combine = Combine::Sum;
    Activation activation = Activation::Identity;
};

enum class LayerKind { Conv, Attention, Plain };

struct EdgeSpec {
    std::string src;
    std::string dst;
    std::string selector;
    LayerKind kind = LayerKind::Conv;
    Activation activation = Activation::Identity;
    Aggregation agg = Aggregation::Sum;  ///< plain edges only
    Activation score = Activation::LeakyRelu;  ///< attention edges only
    std::string query;  ///< cross-rank attention: node supplying H_t
    int out_dim = -1;   ///< width of this edge's message; defaults to the dst dim
    int aux_dim = -1;   ///< cross-rank attention: width of the H_t projection
};

struct DiagramSpec {
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;

    static DiagramSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    OperatorSet operators(const CombinatorialComplex& cc) const;
};

enum class Mode { Train, Infer };

/**
 * A diagram bound to concrete operators and a parameter store. Parameters
 * live in slots named "e<edge index>.W", ".a" and ".Wq".
 */
class TensorDiagram {
public:
    const DiagramSpec& spec() const { return spec_; }
    ParameterStore& params() const { return *params_; }
    std::shared_ptr<ParameterStore> shared_params() const { return params_; }
    const OperatorSet& operators() const { return ops_; }

    std::size_t node_index(const std::string& id) const;
    const NodeSpec& node(const std::string& id) const { return spec_.nodes[node_index(id)]; }
    const std::vector<std::size_t>& topo_order() const { return order_; }
    const std::vector<std::size_t>& in_edges(std::size_t node) const { return in_[node]; }
    int level(std::size_t node) const { return level_[node]; }
    int height() const;
    std::vector<std::string> sources() const;
    std::vector<std::string> targets() const;
    const Operator& edge_operator(std::size_t e) const;
    Eigen::Index edge_width(std::size_t e) const;
    std::string slot(std::size_t e, const std::string& name) const;
    Eigen::Index rows_of(const NodeSpec& n) const;

    /// Same spec and parameters over another operator set.
    TensorDiagram with_operators(OperatorSet ops) const;

private:
    friend TensorDiagram compile_diagram(const DiagramSpec&, OperatorSet, std::shared_ptr<ParameterStore>,
                                         std::uint64_t);
    DiagramSpec spec_;
    OperatorSet ops_;
    std::shared_ptr<ParameterStore> params_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<std::vector<std::size_t>> deps_;
    std::vector<std::size_t> order_;
    std::vector<int> level_;
};

/// @throws Error with CycleDetected, UnknownSelector or ShapeMismatch.
TensorDiagram compile_diagram(const DiagramSpec& spec, OperatorSet ops,
                              std::shared_ptr<ParameterStore> params = nullptr, std::uint64_t seed = 0);
TensorDiagram compile_diagram(const DiagramSpec& spec, const CombinatorialComplex& cc,
                              std::shared_ptr<ParameterStore> params = nullptr, std::uint64_t seed = 0);

using CochainMapById = std::map<std::string, Cochain>;

/// Result of one evaluation. The tape is recording in train mode.
struct Evaluation {
    std::unique_ptr<ad::Tape> tape;
    std::map<std::string, ad::Var> vars;
    CochainMapById outputs;
};

/// @throws Error with MissingInput or ShapeMismatch.
Evaluation evaluate(const TensorDiagram& d, const CochainMapById& inputs, Mode mode = Mode::Infer);
CochainMapById forward(const TensorDiagram& d, const CochainMapById& inputs, Mode mode = Mode::Infer);
/// Adds parameter gradients for the given output gradients into the store.
void backward(Evaluation& ev, const std::map<std::string, Matrix>& loss_grads);

/// Edges of each height-one layer, layer l holding the edges into nodes at level l.
std::vector<std::vector<std::size_t>> diagram_layers(const TensorDiagram& d);
/// Evaluates only the nodes of one level from already computed cochains.
CochainMapById forward_layer(const TensorDiagram& d, int level, const CochainMapById& available);

enum class LayerClass { Pooling, LowestRankPreserving, Unpooling, Other };
enum class DiagramClass { Pooling, Unpooling, Neither };

struct DiagramClassification {
    DiagramClass kind = DiagramClass::Neither;
    std::vector<LayerClass> layers;
};

DiagramClassification classify_diagram(const TensorDiagram& d);
const char* layer_class_name(LayerClass c);
const char* diagram_class_name(DiagramClass c);

enum class LossKind { CrossEntropy, Mse };

struct Target {
    std::vector<int> labels;  ///< cross-entropy: one class per output row, -1 to skip
    Matrix values;            ///< mse
};

struct LossValue {
    double loss = 0;
    Matrix grad;
    int correct = 0;
    int counted = 0;
};

/// Mean softmax cross-entropy over labelled rows, or mean squared error.
LossValue compute_loss(LossKind kind, const Matrix& output, const Target& target);

struct Example {
    std::shared_ptr<const TensorDiagram> diagram;
    CochainMapById inputs;
    Target target;
};

struct TrainConfig {
    double lr = 0.01;
    int epochs = 10;
    std::uint64_t seed = 0;
    LossKind loss = LossKind::CrossEntropy;
    std::string output;
    bool reinitialize = true;  ///< redraw parameters from seed before training

    static TrainConfig from_json(const nlohmann::json& j);
};

struct History {
    std::vector<double> loss;
    std::vector<double> accuracy;  ///< NaN for mse
};

/// Full-batch gradient descent; all examples must share one parameter store.
History train(const std::vector<Example>& data, const TrainConfig& cfg);
/// Mean loss and accuracy without updating parameters.
LossValue evaluate_dataset(const std::vector<Example>& data, LossKind loss, const std::string& output);

}  // namespace ccx
