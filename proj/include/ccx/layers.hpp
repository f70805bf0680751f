#pragma once

#include "ccx/autodiff.hpp"

namespace ccx {

/// How attention scores become weights along each row of G.
enum class AttentionNorm {
    Softmax,  ///< exp(phi(e)) / sum exp(phi(e))
    Ratio,    ///< phi(e) / sum phi(e); phi must keep every row sum positive
};

namespace ad {

/// K = G H W
Var conv_push_forward(Tape& t, const SparseMatrix& g, Var h, Var w);
/// beta(G1 H1 W1 + G2 H2 W2)
Var conv_merge(Tape& t, const SparseMatrix& g1, const SparseMatrix& g2, Var h1, Var h2, Var w1, Var w2,
               Activation beta);

struct AttentionVars {
    Var out;  ///< (G ⊙ att) H W
    Var att;  ///< edge vector over the compressed pattern of G
};

/// Same-rank attention on a square G. a has 2 * out_dim rows: the first
/// half scores the receiving row, the second half the neighbor.
AttentionVars attention_same_rank(Tape& t, const SparseMatrix& g, Var h, Var w, Var a,
                                  Activation phi = Activation::LeakyRelu,
                                  AttentionNorm norm = AttentionNorm::Softmax);

struct CrossAttentionVars {
    Var k_t;     ///< (G ⊙ att_st) H_s W_s on the rows of G
    Var k_s;     ///< (G^T ⊙ att_ts) H_t W_t on the columns of G
    Var att_st;  ///< edge vector over G
    Var att_ts;  ///< edge vector over G^T
};

/**
 * Attention between s-cells (columns of G) and t-cells (rows of G).
 * W_s maps H_s to t_out features, W_t maps H_t to s_out features and a
 * stacks a t_out block and an s_out block. Both attention matrices use the
 * same raw score phi(a1 . (H_s W_s)_v + a2 . (H_t W_t)_u) for an incident
 * pair (u, v); att_st normalizes it over rows of G, att_ts over rows of G^T.
 */
CrossAttentionVars attention_cross_rank(Tape& t, const SparseMatrix& g, Var h_s, Var h_t, Var w_s, Var w_t, Var a,
                                        Activation phi = Activation::LeakyRelu,
                                        AttentionNorm norm = AttentionNorm::Softmax);

}  // namespace ad

Matrix conv_push_forward(const SparseMatrix& g, const Matrix& h, const Matrix& w);
Matrix conv_merge(const SparseMatrix& g1, const SparseMatrix& g2, const Matrix& h1, const Matrix& h2,
                  const Matrix& w1, const Matrix& w2, Activation beta);

struct AttentionResult {
    Matrix out;
    SparseMatrix att;  ///< same shape as G
};

AttentionResult attention_same_rank(const SparseMatrix& g, const Matrix& h, const Matrix& w, const Matrix& a,
                                    Activation phi = Activation::LeakyRelu,
                                    AttentionNorm norm = AttentionNorm::Softmax);

struct CrossAttentionResult {
    Matrix k_t;
    Matrix k_s;
    SparseMatrix att_st;  ///< shape of G
    SparseMatrix att_ts;  ///< shape of G^T
};

CrossAttentionResult attention_cross_rank(const SparseMatrix& g, const Matrix& h_s, const Matrix& h_t,
                                          const Matrix& w_s, const Matrix& w_t, const Matrix& a,
                                          Activation phi = Activation::LeakyRelu,
                                          AttentionNorm norm = AttentionNorm::Softmax);

}  // namespace ccx
