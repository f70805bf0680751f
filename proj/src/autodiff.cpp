#include "ccx/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ccx {

namespace {

constexpr double kLeakySlope = 0.2;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Matrix seeded_uniform(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, const std::string& slot) {
    const std::uint64_t h = fnv1a(slot);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    std::mt19937_64 rng(seq);
    const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(rows, 1)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
    return m;
}

void same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::ShapeMismatch, std::string(op) + " of " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + " and " + std::to_string(b.rows()) +
                                                  "x" + std::to_string(b.cols()));
}

}  // namespace

Activation parse_activation(const std::string& name) {
    if (name == "identity" || name == "id" || name.empty()) return Activation::Identity;
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    if (name == "leaky_relu" || name == "leakyrelu") return Activation::LeakyRelu;
    if (name == "sigmoid") return Activation::Sigmoid;
    throw Error(ErrorCode::ParseError, "unknown activation '" + name + "'");
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::LeakyRelu: return "leaky_relu";
        case Activation::Sigmoid: return "sigmoid";
    }
    return "identity";
}

double activate(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return x;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Relu: return x > 0 ? x : 0.0;
        case Activation::LeakyRelu: return x > 0 ? x : kLeakySlope * x;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    }
    return x;
}

double activate_derivative(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return 1.0;
        case Activation::Tanh: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Activation::Relu: return x > 0 ? 1.0 : 0.0;
        case Activation::LeakyRelu: return x > 0 ? 1.0 : kLeakySlope;
        case Activation::Sigmoid: {
            const double s = 1.0 / (1.0 + std::exp(-x));
            return s * (1.0 - s);
        }
    }
    return 1.0;
}

Matrix activate(Activation a, const Matrix& x) {
    if (a == Activation::Identity) return x;
    return x.unaryExpr([a](double v) { return activate(a, v); });
}

RowMap activation_map(Activation a) {
    return [a](const RowVector& h) -> RowVector { return h.unaryExpr([a](double v) { return activate(a, v); }); };
}

void ParameterStore::ensure(const std::string& slot, Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    auto it = entries_.find(slot);
    if (it != entries_.end()) {
        if (it->second.value.rows() != rows || it->second.value.cols() != cols)
            throw Error(ErrorCode::ShapeMismatch, "slot " + slot + " already has another shape");
        return;
    }
    entries_[slot] = {seeded_uniform(rows, cols, seed, slot), Matrix::Zero(rows, cols)};
    ++version_;
}

void ParameterStore::set(const std::string& slot, Matrix value) {
    auto& e = entries_[slot];
    if (e.value.size() != 0) same_shape(e.value, value, "parameter assignment");
    e.grad = Matrix::Zero(value.rows(), value.cols());
    e.value = std::move(value);
    ++version_;
}

const Matrix& ParameterStore::value(const std::string& slot) const {
    auto it = entries_.find(slot);
    if (it == entries_.end()) throw Error(ErrorCode::MissingInput, "no parameter slot " + slot);
    return it->second.value;
}

const Matrix& ParameterStore::grad(const std::string& slot) const {
    auto it = entries_.find(slot);
    if (it == entries_.end()) throw Error(ErrorCode::MissingInput, "no parameter slot " + slot);
    return it->second.grad;
}

void ParameterStore::accumulate_grad(const std::string& slot, const Matrix& g) {
    auto& e = entries_.at(slot);
    same_shape(e.grad, g, "gradient accumulation");
    e.grad += g;
}

void ParameterStore::zero_grad() {
    for (auto& [k, e] : entries_) e.grad.setZero();
}

void ParameterStore::step(double lr) {
    for (auto& [k, e] : entries_) e.value -= lr * e.grad;
    ++version_;
}

void ParameterStore::reinitialize(std::uint64_t seed) {
    for (auto& [k, e] : entries_) {
        e.value = seeded_uniform(e.value.rows(), e.value.cols(), seed, k);
        e.grad.setZero();
    }
    ++version_;
}

std::vector<std::string> ParameterStore::slots() const {
    std::vector<std::string> out;
    for (const auto& [k, e] : entries_) out.push_back(k);
    return out;
}

std::size_t ParameterStore::size() const {
    std::size_t n = 0;
    for (const auto& [k, e] : entries_) n += static_cast<std::size_t>(e.value.size());
    return n;
}

SparseMatrix compressed_pattern(const SparseMatrix& g) {
    SparseMatrix p = g;
    p.prune(0.0, 0.0);
    p.makeCompressed();
    return p;
}

SparseMatrix edge_values_to_sparse(const SparseMatrix& pattern, const Matrix& values) {
    SparseMatrix out = pattern;
    Eigen::Index k = 0;
    for (int i = 0; i < out.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(out, i); it; ++it) it.valueRef() = values(k++, 0);
    return out;
}

namespace ad {

Var Tape::constant(Matrix value) { return push(std::move(value), nullptr); }

Var Tape::parameter(ParameterStore& store, const std::string& slot) {
    if (store_ && store_ != &store) throw Error(ErrorCode::BadParams, "a tape reads from one parameter store");
    if (!store_) {
        store_ = &store;
        store_version_ = store.version();
    }
    auto it = param_nodes_.find(slot);
    if (it != param_nodes_.end()) return Var{it->second};
    Var v = push(store.value(slot), [s = &store, slot](Tape&, const Matrix& g) { s->accumulate_grad(slot, g); });
    param_nodes_[slot] = v.id;
    return v;
}

Var Tape::push(Matrix value, Backward back) {
    nodes_.push_back({std::move(value), Matrix(), record_ ? std::move(back) : Backward()});
    return Var{nodes_.size() - 1};
}

Matrix Tape::grad(Var v) const {
    const auto& n = nodes_.at(v.id);
    if (n.grad.size() == 0 && n.value.size() != 0) return Matrix::Zero(n.value.rows(), n.value.cols());
    return n.grad;
}

void Tape::accumulate(Var v, const Matrix& g) {
    auto& n = nodes_.at(v.id);
    same_shape(n.value, g, "gradient");
    if (n.grad.size() == 0 && g.size() != 0)
        n.grad = g;
    else
        n.grad += g;
}

void Tape::backward(const std::vector<std::pair<Var, Matrix>>& seeds) {
    if (!record_) throw Error(ErrorCode::StaleTape, "tape was recorded in inference mode");
    if (store_ && store_->version() != store_version_)
        throw Error(ErrorCode::StaleTape, "parameters changed after the forward pass");
    for (auto& n : nodes_) n.grad.resize(0, 0);
    for (const auto& [v, g] : seeds) accumulate(v, g);
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        if (nodes_[i].grad.size() == 0 || !nodes_[i].back) continue;
        const Matrix g = nodes_[i].grad;
        nodes_[i].back(*this, g);
    }
}

Var matmul(Tape& t, Var a, Var b) {
    const Matrix& A = t.value(a);
    const Matrix& B = t.value(b);
    if (A.cols() != B.rows())
        throw Error(ErrorCode::ShapeMismatch, "matmul " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                                                  " by " + std::to_string(B.rows()) + "x" + std::to_string(B.cols()));
    return t.push(A * B, [a, b](Tape& t, const Matrix& g) {
        t.accumulate(a, g * t.value(b).transpose());
        t.accumulate(b, t.value(a).transpose() * g);
    });
}

Var spmm(Tape& t, const SparseMatrix& g, Var x) {
    const Matrix& X = t.value(x);
    if (g.cols() != X.rows())
        throw Error(ErrorCode::ShapeMismatch, "sparse product " + std::to_string(g.rows()) + "x" +
                                                  std::to_string(g.cols()) + " by " + std::to_string(X.rows()) + " rows");
    return t.push(g * X, [g, x](Tape& t, const Matrix& go) { t.accumulate(x, g.transpose() * go); });
}

Var add(Tape& t, Var a, Var b) {
    same_shape(t.value(a), t.value(b), "add");
    return t.push(t.value(a) + t.value(b), [a, b](Tape& t, const Matrix& g) {
        t.accumulate(a, g);
        t.accumulate(b, g);
    });
}

Var add_all(Tape& t, const std::vector<Var>& xs) {
    if (xs.empty()) throw Error(ErrorCode::ShapeMismatch, "sum of no terms");
    Matrix s = t.value(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        same_shape(s, t.value(xs[i]), "add");
        s += t.value(xs[i]);
    }
    if (xs.size() == 1) return xs[0];
    return t.push(std::move(s), [xs](Tape& t, const Matrix& g) {
        for (Var x : xs) t.accumulate(x, g);
    });
}

Var hadamard(Tape& t, Var a, Var b) {
    same_shape(t.value(a), t.value(b), "hadamard");
    return t.push(t.value(a).cwiseProduct(t.value(b)), [a, b](Tape& t, const Matrix& g) {
        t.accumulate(a, g.cwiseProduct(t.value(b)));
        t.accumulate(b, g.cwiseProduct(t.value(a)));
    });
}

Var scale(Tape& t, Var x, double s) {
    return t.push(s * t.value(x), [x, s](Tape& t, const Matrix& g) { t.accumulate(x, s * g); });
}

Var concat_cols(Tape& t, const std::vector<Var>& xs) {
    if (xs.empty()) throw Error(ErrorCode::ShapeMismatch, "concatenation of nothing");
    const Eigen::Index rows = t.value(xs[0]).rows();
    Eigen::Index cols = 0;
    for (Var x : xs) {
        if (t.value(x).rows() != rows) throw Error(ErrorCode::ShapeMismatch, "concatenation with unequal rows");
        cols += t.value(x).cols();
    }
    Matrix out(rows, cols);
    Eigen::Index c = 0;
    for (Var x : xs) {
        out.middleCols(c, t.value(x).cols()) = t.value(x);
        c += t.value(x).cols();
    }
    return t.push(std::move(out), [xs](Tape& t, const Matrix& g) {
        Eigen::Index c = 0;
        for (Var x : xs) {
            const Eigen::Index w = t.value(x).cols();
            t.accumulate(x, g.middleCols(c, w));
            c += w;
        }
    });
}

Var slice_rows(Tape& t, Var x, Eigen::Index start, Eigen::Index count) {
    const Matrix& X = t.value(x);
    if (start < 0 || count < 0 || start + count > X.rows())
        throw Error(ErrorCode::ShapeMismatch, "row slice out of range");
    return t.push(X.middleRows(start, count), [x, start, count](Tape& t, const Matrix& g) {
        Matrix full = Matrix::Zero(t.value(x).rows(), t.value(x).cols());
        full.middleRows(start, count) = g;
        t.accumulate(x, full);
    });
}

Var activate(Tape& t, Var x, Activation a) {
    if (a == Activation::Identity) return x;
    return t.push(ccx::activate(a, t.value(x)), [x, a](Tape& t, const Matrix& g) {
        const Matrix d = t.value(x).unaryExpr([a](double v) { return activate_derivative(a, v); });
        t.accumulate(x, g.cwiseProduct(d));
    });
}

Var aggregate(Tape& t, const SparseMatrix& g, Var x, Aggregation agg) {
    const Matrix& X = t.value(x);
    if (g.cols() != X.rows()) throw Error(ErrorCode::ShapeMismatch, "aggregation over a map of the wrong width");
    const SparseMatrix p = compressed_pattern(g);
    Matrix out = Matrix::Zero(p.rows(), X.cols());
    std::vector<int> counts(p.rows(), 0);
    // For max: source row chosen per output entry, -1 when the row is empty.
    Eigen::MatrixXi argmax = Eigen::MatrixXi::Constant(p.rows(), X.cols(), -1);
    for (int y = 0; y < p.outerSize(); ++y) {
        for (SparseMatrix::InnerIterator it(p, y); it; ++it) {
            const auto src = static_cast<int>(it.col());
            if (agg == Aggregation::Max) {
                for (Eigen::Index c = 0; c < X.cols(); ++c)
                    if (counts[y] == 0 || X(src, c) > out(y, c)) {
                        out(y, c) = X(src, c);
                        argmax(y, c) = src;
                    }
            } else {
                out.row(y) += X.row(src);
            }
            ++counts[y];
        }
        if (agg == Aggregation::Mean && counts[y] > 0) out.row(y) /= counts[y];
    }
    return t.push(std::move(out), [p, x, agg, counts, argmax](Tape& t, const Matrix& go) {
        Matrix gx = Matrix::Zero(t.value(x).rows(), t.value(x).cols());
        for (int y = 0; y < p.outerSize(); ++y) {
            if (agg == Aggregation::Max) {
                for (Eigen::Index c = 0; c < go.cols(); ++c)
                    if (argmax(y, c) >= 0) gx(argmax(y, c), c) += go(y, c);
                continue;
            }
            const double w = agg == Aggregation::Mean && counts[y] > 0 ? 1.0 / counts[y] : 1.0;
            for (SparseMatrix::InnerIterator it(p, y); it; ++it) gx.row(it.col()) += w * go.row(y);
        }
        t.accumulate(x, gx);
    });
}

Var edge_scores(Tape& t, const SparseMatrix& pattern, Var u, Var v) {
    const Matrix& U = t.value(u);
    const Matrix& V = t.value(v);
    if (U.rows() != pattern.rows() || V.rows() != pattern.cols() || U.cols() != 1 || V.cols() != 1)
        throw Error(ErrorCode::ShapeMismatch, "edge scores need one value per row and per column");
    Matrix e(pattern.nonZeros(), 1);
    Eigen::Index k = 0;
    for (int i = 0; i < pattern.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(pattern, i); it; ++it) e(k++, 0) = U(i, 0) + V(it.col(), 0);
    return t.push(std::move(e), [pattern, u, v](Tape& t, const Matrix& g) {
        Matrix gu = Matrix::Zero(pattern.rows(), 1);
        Matrix gv = Matrix::Zero(pattern.cols(), 1);
        Eigen::Index k = 0;
        for (int i = 0; i < pattern.outerSize(); ++i)
            for (SparseMatrix::InnerIterator it(pattern, i); it; ++it) {
                gu(i, 0) += g(k, 0);
                gv(it.col(), 0) += g(k, 0);
                ++k;
            }
        t.accumulate(u, gu);
        t.accumulate(v, gv);
    });
}

Var masked_normalize(Tape& t, const SparseMatrix& pattern, Var e, bool exponentiate) {
    const Matrix& E = t.value(e);
    if (E.rows() != pattern.nonZeros() || E.cols() != 1)
        throw Error(ErrorCode::ShapeMismatch, "edge vector length differs from pattern size");
    Matrix a(E.rows(), 1);
    // Per-row normalizer; for the ratio form the gradient needs it.
    std::vector<double> norm(pattern.rows(), 0.0);
    const auto* outer = pattern.outerIndexPtr();
    for (Eigen::Index i = 0; i < pattern.rows(); ++i) {
        const auto lo = outer[i], hi = outer[i + 1];
        if (lo == hi) continue;
        if (exponentiate) {
            double m = E(lo, 0);
            for (auto k = lo; k < hi; ++k) m = std::max(m, E(k, 0));
            double s = 0;
            for (auto k = lo; k < hi; ++k) s += (a(k, 0) = std::exp(E(k, 0) - m));
            for (auto k = lo; k < hi; ++k) a(k, 0) /= s;
        } else {
            double s = 0;
            for (auto k = lo; k < hi; ++k) s += E(k, 0);
            if (!(s > 0)) throw Error(ErrorCode::DegenerateRow, "row " + std::to_string(i) + " has normalizer " + std::to_string(s));
            for (auto k = lo; k < hi; ++k) a(k, 0) = E(k, 0) / s;
            norm[i] = s;
        }
    }
    Matrix av = a;
    return t.push(std::move(a), [pattern, e, exponentiate, av, norm](Tape& t, const Matrix& g) {
        const auto* outer = pattern.outerIndexPtr();
        Matrix ge = Matrix::Zero(av.rows(), 1);
        for (Eigen::Index i = 0; i < pattern.rows(); ++i) {
            const auto lo = outer[i], hi = outer[i + 1];
            double dot = 0;
            for (auto k = lo; k < hi; ++k) dot += av(k, 0) * g(k, 0);
            for (auto k = lo; k < hi; ++k)
                ge(k, 0) = exponentiate ? av(k, 0) * (g(k, 0) - dot) : (g(k, 0) - dot) / norm[i];
        }
        t.accumulate(e, ge);
    });
}

Var weighted_spmm(Tape& t, const SparseMatrix& g, Var w, Var x) {
    const Matrix& W = t.value(w);
    const Matrix& X = t.value(x);
    if (W.rows() != g.nonZeros() || W.cols() != 1 || X.rows() != g.cols())
        throw Error(ErrorCode::ShapeMismatch, "weighted product shapes do not conform");
    Matrix out = Matrix::Zero(g.rows(), X.cols());
    Eigen::Index k = 0;
    for (int i = 0; i < g.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(g, i); it; ++it, ++k) out.row(i) += it.value() * W(k, 0) * X.row(it.col());
    return t.push(std::move(out), [g, w, x](Tape& t, const Matrix& go) {
        const Matrix& W = t.value(w);
        const Matrix& X = t.value(x);
        Matrix gw = Matrix::Zero(W.rows(), 1);
        Matrix gx = Matrix::Zero(X.rows(), X.cols());
        Eigen::Index k = 0;
        for (int i = 0; i < g.outerSize(); ++i)
            for (SparseMatrix::InnerIterator it(g, i); it; ++it, ++k) {
                gw(k, 0) = it.value() * go.row(i).dot(X.row(it.col()));
                gx.row(it.col()) += it.value() * W(k, 0) * go.row(i);
            }
        t.accumulate(w, gw);
        t.accumulate(x, gx);
    });
}

}  // namespace ad
}  // namespace ccx
