#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pellab/common.hpp"

namespace pellab::numerics {

// Dense real symmetric matrix, row-major. Symmetry is an exact storage
// invariant: set() writes both triangles.
class RealSymmetricMatrix {
  public:
    explicit RealSymmetricMatrix(int dim);

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return a_[idx(i, j)]; }

    void set(int i, int j, double v) {
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = v;
    }

    // Validates exact symmetry of raw data (used after bulk fills).
    void check() const;

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

  private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * dim_ + j; }

    int dim_;
    std::vector<double> a_;
};

struct EigenDecomposition {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k], unit norm
};

// Cyclic Jacobi rotations; intended for the small (<= ~32) matrices that the
// 2d x 2d real embeddings produce.
EigenDecomposition sym_eig(const RealSymmetricMatrix& S);

// Smallest eigenvalue and a unit eigenvector. Guarantees
// |Sv - lambda v| <= 1e-10 * (1 + |lambda|) * dim.
std::pair<double, std::vector<double>> sym_eig_min(const RealSymmetricMatrix& S);

double sym_eig_max_value(const RealSymmetricMatrix& S);

}  // namespace pellab::numerics
