#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccx/cochain.hpp"

namespace ccx {

enum class Activation { Identity, Tanh, Relu, LeakyRelu, Sigmoid };

Activation parse_activation(const std::string& name);
const char* activation_name(Activation a);
double activate(Activation a, double x);
double activate_derivative(Activation a, double x);
Matrix activate(Activation a, const Matrix& x);
RowMap activation_map(Activation a);

/// Trainable matrices keyed by slot name, with gradient buffers of equal shape.
class ParameterStore {
public:
    bool has(const std::string& slot) const { return entries_.count(slot) != 0; }
    /// Creates the slot with seeded uniform values in [-1/sqrt(rows), 1/sqrt(rows)].
    /// An existing slot must have the same shape.
    void ensure(const std::string& slot, Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);
    void set(const std::string& slot, Matrix value);

    const Matrix& value(const std::string& slot) const;
    const Matrix& grad(const std::string& slot) const;
    void accumulate_grad(const std::string& slot, const Matrix& g);
    void zero_grad();
    /// value -= lr * grad for every slot.
    void step(double lr);
    /// Redraws every slot from the given seed.
    void reinitialize(std::uint64_t seed);
    std::vector<std::string> slots() const;
    std::size_t size() const;

    /// Bumped by every value change; tapes use it to detect stale parameters.
    std::uint64_t version() const noexcept { return version_; }

private:
    struct Entry {
        Matrix value;
        Matrix grad;
    };
    std::map<std::string, Entry> entries_;
    std::uint64_t version_ = 0;
};

namespace ad {

struct Var {
    std::size_t id = static_cast<std::size_t>(-1);
    bool valid() const { return id != static_cast<std::size_t>(-1); }
};

/**
 * Records primitive operations for a reverse sweep. Each node keeps its
 * value; gradients are filled by backward().
 */
class Tape {
public:
    using Backward = std::function<void(Tape&, const Matrix& out_grad)>;

    explicit Tape(bool record = true) : record_(record) {}
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    bool recording() const noexcept { return record_; }
    Var constant(Matrix value);
    /// Leaf bound to a parameter slot; repeated calls return the same node.
    Var parameter(ParameterStore& store, const std::string& slot);
    Var push(Matrix value, Backward back);

    const Matrix& value(Var v) const { return nodes_.at(v.id).value; }
    /// Gradient after backward(); zero matrix for nodes the sweep never reached.
    Matrix grad(Var v) const;
    void accumulate(Var v, const Matrix& g);
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Seeds output gradients, sweeps in reverse, and adds parameter gradients
    /// into the bound store.
    /// @throws Error(StaleTape) if parameters changed since they were read or
    ///         the tape was not recording.
    void backward(const std::vector<std::pair<Var, Matrix>>& seeds);

private:
    struct Node {
        Matrix value;
        Matrix grad;
        Backward back;
    };
    bool record_;
    std::vector<Node> nodes_;
    ParameterStore* store_ = nullptr;
    std::uint64_t store_version_ = 0;
    std::map<std::string, std::size_t> param_nodes_;
};

Var matmul(Tape& t, Var a, Var b);
/// g x for a constant sparse g.
Var spmm(Tape& t, const SparseMatrix& g, Var x);
Var add(Tape& t, Var a, Var b);
Var add_all(Tape& t, const std::vector<Var>& xs);
Var hadamard(Tape& t, Var a, Var b);
Var scale(Tape& t, Var x, double s);
Var concat_cols(Tape& t, const std::vector<Var>& xs);
Var slice_rows(Tape& t, Var x, Eigen::Index start, Eigen::Index count);
Var activate(Tape& t, Var x, Activation a);

/// Push-forward with identity alpha: row y aggregates the rows of x at the
/// stored nonzeros of row y of g. Empty rows are zero.
Var aggregate(Tape& t, const SparseMatrix& g, Var x, Aggregation agg);

// Edge-valued primitives. An edge vector has one entry per stored nonzero
// of a compressed row-major pattern, in storage order.

/// e_k = u[row_k] + v[col_k].
Var edge_scores(Tape& t, const SparseMatrix& pattern, Var u, Var v);
/// Row-wise normalization over the pattern. With exponentiate the result is
/// a masked softmax; otherwise e / sum(e), which must be positive per row.
/// @throws Error(DegenerateRow) for a non-positive normalizer.
Var masked_normalize(Tape& t, const SparseMatrix& pattern, Var e, bool exponentiate);
/// (g ⊙ w) x where w is an edge vector over g's pattern.
Var weighted_spmm(Tape& t, const SparseMatrix& g, Var w, Var x);

}  // namespace ad

/// Compressed copy of g without explicit zeros; the pattern the edge primitives expect.
SparseMatrix compressed_pattern(const SparseMatrix& g);
/// Sparse matrix with g's pattern and the given edge values.
SparseMatrix edge_values_to_sparse(const SparseMatrix& pattern, const Matrix& values);

}  // namespace ccx
