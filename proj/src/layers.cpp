#include "ccx/layers.hpp"

namespace ccx {
namespace ad {

namespace {

void check_vector(const Tape& t, Var a, Eigen::Index len) {
    if (t.value(a).rows() != len || t.value(a).cols() != 1)
        throw Error(ErrorCode::ShapeMismatch, "attention vector needs " + std::to_string(len) + " entries");
}

}  // namespace

Var conv_push_forward(Tape& t, const SparseMatrix& g, Var h, Var w) { return spmm(t, g, matmul(t, h, w)); }

Var conv_merge(Tape& t, const SparseMatrix& g1, const SparseMatrix& g2, Var h1, Var h2, Var w1, Var w2,
               Activation beta) {
    if (g1.rows() != g2.rows()) throw Error(ErrorCode::ShapeMismatch, "merge branches have different codomains");
    return activate(t, add(t, conv_push_forward(t, g1, h1, w1), conv_push_forward(t, g2, h2, w2)), beta);
}

AttentionVars attention_same_rank(Tape& t, const SparseMatrix& g, Var h, Var w, Var a, Activation phi,
                                  AttentionNorm norm) {
    if (g.rows() != g.cols()) throw Error(ErrorCode::ShapeMismatch, "same-rank attention needs a square matrix");
    const SparseMatrix p = compressed_pattern(g);
    const Var hw = matmul(t, h, w);
    const Eigen::Index d = t.value(hw).cols();
    check_vector(t, a, 2 * d);
    const Var self = matmul(t, hw, slice_rows(t, a, 0, d));
    const Var other = matmul(t, hw, slice_rows(t, a, d, d));
    const Var e = activate(t, edge_scores(t, p, self, other), phi);
    const Var att = masked_normalize(t, p, e, norm == AttentionNorm::Softmax);
    return {weighted_spmm(t, p, att, hw), att};
}

CrossAttentionVars attention_cross_rank(Tape& t, const SparseMatrix& g, Var h_s, Var h_t, Var w_s, Var w_t, Var a,
                                        Activation phi, AttentionNorm norm) {
    const SparseMatrix p = compressed_pattern(g);
    const SparseMatrix pt = compressed_pattern(SparseMatrix(p.transpose()));
    if (t.value(h_s).rows() != p.cols() || t.value(h_t).rows() != p.rows())
        throw Error(ErrorCode::ShapeMismatch, "cross-rank attention cochains do not match G");
    const Var ps = matmul(t, h_s, w_s);  // |X^s| x t_out
    const Var pt_ = matmul(t, h_t, w_t);  // |X^t| x s_out
    const Eigen::Index t_out = t.value(ps).cols();
    const Eigen::Index s_out = t.value(pt_).cols();
    check_vector(t, a, t_out + s_out);
    const Var a1 = slice_rows(t, a, 0, t_out);
    const Var a2 = slice_rows(t, a, t_out, s_out);
    const Var score_s = matmul(t, ps, a1);   // per s-cell
    const Var score_t = matmul(t, pt_, a2);  // per t-cell
    const Var e = activate(t, edge_scores(t, p, score_t, score_s), phi);
    const Var f = activate(t, edge_scores(t, pt, score_s, score_t), phi);
    const bool soft = norm == AttentionNorm::Softmax;
    const Var att_st = masked_normalize(t, p, e, soft);
    const Var att_ts = masked_normalize(t, pt, f, soft);
    return {weighted_spmm(t, p, att_st, ps), weighted_spmm(t, pt, att_ts, pt_), att_st, att_ts};
}

}  // namespace ad

Matrix conv_push_forward(const SparseMatrix& g, const Matrix& h, const Matrix& w) {
    ad::Tape t(false);
    return t.value(ad::conv_push_forward(t, g, t.constant(h), t.constant(w)));
}

Matrix conv_merge(const SparseMatrix& g1, const SparseMatrix& g2, const Matrix& h1, const Matrix& h2,
                  const Matrix& w1, const Matrix& w2, Activation beta) {
    ad::Tape t(false);
    return t.value(ad::conv_merge(t, g1, g2, t.constant(h1), t.constant(h2), t.constant(w1), t.constant(w2), beta));
}

AttentionResult attention_same_rank(const SparseMatrix& g, const Matrix& h, const Matrix& w, const Matrix& a,
                                    Activation phi, AttentionNorm norm) {
    ad::Tape t(false);
    auto r = ad::attention_same_rank(t, g, t.constant(h), t.constant(w), t.constant(a), phi, norm);
    return {t.value(r.out), edge_values_to_sparse(compressed_pattern(g), t.value(r.att))};
}

CrossAttentionResult attention_cross_rank(const SparseMatrix& g, const Matrix& h_s, const Matrix& h_t,
                                          const Matrix& w_s, const Matrix& w_t, const Matrix& a, Activation phi,
                                          AttentionNorm norm) {
    ad::Tape t(false);
    auto r = ad::attention_cross_rank(t, g, t.constant(h_s), t.constant(h_t), t.constant(w_s), t.constant(w_t),
                                      t.constant(a), phi, norm);
    const SparseMatrix p = compressed_pattern(g);
    const SparseMatrix pt = compressed_pattern(SparseMatrix(p.transpose()));
    return {t.value(r.k_t), t.value(r.k_s), edge_values_to_sparse(p, t.value(r.att_st)),
            edge_values_to_sparse(pt, t.value(r.att_ts))};
}

}  // namespace ccx
