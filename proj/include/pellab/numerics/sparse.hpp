#pragma once

#include <cstddef>
#include <vector>

#include "pellab/common.hpp"

namespace pellab::numerics {

// Compressed-row complex sparse matrix. Built from (row, col, value)
// triplets; duplicates are merged by summation so the stored layout has
// strictly increasing column indices per row.
class SparseComplexOperator {
  public:
    struct Triplet {
        int row;
        int col;
        cxd value;
    };

    SparseComplexOperator(int dim, std::vector<Triplet> triplets);

    int dim() const { return dim_; }
    std::size_t nnz() const { return values_.size(); }

    cvec apply(const cvec& x) const;

    cxd diagonal(int i) const;

    // y := alpha * this. Used to form I + c*L for time stepping.
    SparseComplexOperator scaled(cxd alpha) const;
    SparseComplexOperator shifted(cxd sigma) const;  // this + sigma*I

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const cvec& values() const { return values_; }

  private:
    int dim_;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    cvec values_;
};

// BiCGStab with Jacobi (diagonal) preconditioning; dense LU fallback below
// dimension 2000. Returns x with ||Mx-b||/||b|| <= tol or throws SolverError
// carrying the best residual reached.
cvec solve_sparse(const SparseComplexOperator& M, const cvec& b, double tol);

// Dense complex LU with partial pivoting, reusable across right-hand sides.
class DenseLu {
  public:
    explicit DenseLu(const SparseComplexOperator& M);
    cvec solve(const cvec& b) const;
    int dim() const { return n_; }

  private:
    int n_;
    cvec lu_;
    std::vector<int> piv_;
};

double norm2(const cvec& v);
cxd dot(const cvec& a, const cvec& b);  // sum a_i * conj(b_i)

}  // namespace pellab::numerics
