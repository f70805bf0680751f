#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>

#include "ccx/complex.hpp"

namespace ccx {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;

enum class NeighborhoodKind { Incidence, Adjacency, Coadjacency, SignedIncidence, Identity, Custom };

/**
 * Sparse matrix whose rows index cells of row_rank and columns index cells
 * of col_rank, both in the canonical order of the complex.
 */
struct NeighborhoodMatrix {
    NeighborhoodKind kind = NeighborhoodKind::Custom;
    int row_rank = -1;
    int col_rank = -1;
    SparseMatrix matrix;

    Eigen::Index rows() const { return matrix.rows(); }
    Eigen::Index cols() const { return matrix.cols(); }
};

/// B_{r,k}: entry (i,j) is 1 iff the i-th r-cell is a proper subset of the j-th k-cell.
NeighborhoodMatrix incidence(const CombinatorialComplex& cc, int r, int k);
/// A_{r,k}: r-cells joined by a common (r+k)-cell, diagonal excluded.
NeighborhoodMatrix adjacency(const CombinatorialComplex& cc, int r, int k);
/// coA_{r,k}: r-cells sharing a common (r-k)-cell, diagonal excluded.
NeighborhoodMatrix coadjacency(const CombinatorialComplex& cc, int r, int k);
/// Oriented boundary from rank r+1 to rank r for simplicial cells.
NeighborhoodMatrix signed_incidence(const CombinatorialComplex& cc, int r);
NeighborhoodMatrix identity(const CombinatorialComplex& cc, int r);
/// L1 = B0^T B0 + B1 B1^T, the second term only when 2-cells exist.
Matrix hodge_laplacian_1(const CombinatorialComplex& cc);

struct UpDown {
    std::set<CellSet> down;
    std::set<CellSet> up;
};

/// Cells k ranks below x that x contains, and k ranks above x that contain it.
UpDown up_down_incidence_sets(const CombinatorialComplex& cc, const CellSet& x, int k);
/// All cells properly inside x / properly containing x, regardless of rank.
UpDown up_down_sets(const CombinatorialComplex& cc, const CellSet& x);

/// D_r^{-1/2} G D_c^{-1/2} with row and column sums as degrees; rows or
/// columns with zero degree stay zero.
SparseMatrix sym_normalize(const SparseMatrix& g);
/// Pattern with every stored nonzero replaced by one.
SparseMatrix binary_pattern(const SparseMatrix& g);
/// Pattern of g with the diagonal removed.
SparseMatrix off_diagonal_pattern(const SparseMatrix& g);
/// Dense copy; throws TooLarge for 10^6 or more entries.
Matrix to_dense(const SparseMatrix& g);
bool same_pattern(const SparseMatrix& a, const SparseMatrix& b);

/// Eigenvalues in ascending order of a dense symmetric matrix.
Eigen::VectorXd symmetric_eigenvalues(const Matrix& m);

/// Triplet text: header "rows cols nnz", then "i j v" per nonzero, 0-based.
void write_triplets(std::ostream& os, const SparseMatrix& m);
SparseMatrix read_triplets(std::istream& is);

std::string kind_name(NeighborhoodKind kind);

}  // namespace ccx
