#pragma once

#include <map>
#include <vector>

#include "pellab/common.hpp"

namespace pellab::ellipticity {

// Dense d x d complex matrix. Accretivity is not assumed at construction;
// reports may certify its failure.
class ComplexMatrix {
  public:
    explicit ComplexMatrix(int dim);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix scalar(cxd a);  // 1x1
    static ComplexMatrix rotation(const ComplexMatrix& A, double angle);  // e^{i angle} A

    int dim() const { return dim_; }

    cxd operator()(int i, int j) const { return a_[idx(i, j)]; }
    cxd& operator()(int i, int j) { return a_[idx(i, j)]; }

    cvec apply(const cvec& xi) const;
    ComplexMatrix adjoint_times_self() const;  // A* A

  private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * dim_ + j; }

    int dim_;
    cvec a_;
};

// One matrix per active grid cell, addressed by flat cell index; cells not
// listed fall back to the default matrix.
class MatrixField {
  public:
    MatrixField(ComplexMatrix default_matrix, std::size_t n_cells);

    void set_cell(std::size_t cell, ComplexMatrix m);
    const ComplexMatrix& at(std::size_t cell) const;

    std::size_t n_cells() const { return n_cells_; }
    int dim() const { return default_.dim(); }
    bool is_constant() const { return overrides_.empty(); }

  private:
    ComplexMatrix default_;
    std::size_t n_cells_;
    std::map<std::size_t, ComplexMatrix> overrides_;
};

// Identification of C^d with R^2d: V(a + i b) = (a, b), so that
// Re<z,w> = <V z, V w>.
rvec identify_V(const cvec& z);
cvec identify_V_inverse(const rvec& x);

// W(w1, w2) interleaves per component: (Re w1_j, Im w1_j, Re w2_j, Im w2_j).
rvec identify_W(const cvec& w1, const cvec& w2);
std::pair<cvec, cvec> identify_W_inverse(const rvec& x);

// I_p xi = xi + (1 - 2/p) conj(xi), componentwise; p > 1.
cvec apply_Ip(const cvec& xi, double p);
cxd apply_Ip(cxd xi, double p);

}  // namespace pellab::ellipticity
