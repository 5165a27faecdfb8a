#include "pellab/ellipticity/complex_matrix.hpp"

#include <cmath>

namespace pellab::ellipticity {

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) {
    if (dim < 1) throw StructuralError("ComplexMatrix: dim must be >= 1");
    a_.assign(static_cast<std::size_t>(dim) * dim, cxd(0.0, 0.0));
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = cxd(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::scalar(cxd a) {
    ComplexMatrix m(1);
    m(0, 0) = a;
    return m;
}

ComplexMatrix ComplexMatrix::rotation(const ComplexMatrix& A, double angle) {
    ComplexMatrix m = A;
    const cxd phase(std::cos(angle), std::sin(angle));
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) m(i, j) *= phase;
    return m;
}

cvec ComplexMatrix::apply(const cvec& xi) const {
    if (static_cast<int>(xi.size()) != dim_)
        throw StructuralError("ComplexMatrix::apply: size mismatch");
    cvec y(dim_, cxd(0.0, 0.0));
    for (int i = 0; i < dim_; ++i) {
        cxd s(0.0, 0.0);
        for (int j = 0; j < dim_; ++j) s += a_[idx(i, j)] * xi[j];
        y[i] = s;
    }
    return y;
}

ComplexMatrix ComplexMatrix::adjoint_times_self() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            cxd s(0.0, 0.0);
            for (int k = 0; k < dim_; ++k) s += std::conj(a_[idx(k, i)]) * a_[idx(k, j)];
            m(i, j) = s;
        }
    return m;
}

MatrixField::MatrixField(ComplexMatrix default_matrix, std::size_t n_cells)
    : default_(std::move(default_matrix)), n_cells_(n_cells) {
    if (n_cells == 0) throw StructuralError("MatrixField: empty field");
}

void MatrixField::set_cell(std::size_t cell, ComplexMatrix m) {
    if (cell >= n_cells_) throw StructuralError("MatrixField: cell index out of range");
    if (m.dim() != default_.dim())
        throw StructuralError("MatrixField: mixed matrix dimensions");
    overrides_.insert_or_assign(cell, std::move(m));
}

const ComplexMatrix& MatrixField::at(std::size_t cell) const {
    if (cell >= n_cells_) throw StructuralError("MatrixField: cell index out of range");
    const auto it = overrides_.find(cell);
    return it == overrides_.end() ? default_ : it->second;
}

rvec identify_V(const cvec& z) {
    const std::size_t d = z.size();
    rvec x(2 * d);
    for (std::size_t j = 0; j < d; ++j) {
        x[j] = z[j].real();
        x[d + j] = z[j].imag();
    }
    return x;
}

cvec identify_V_inverse(const rvec& x) {
    if (x.size() % 2 != 0) throw StructuralError("identify_V_inverse: odd length");
    const std::size_t d = x.size() / 2;
    cvec z(d);
    for (std::size_t j = 0; j < d; ++j) z[j] = cxd(x[j], x[d + j]);
    return z;
}

rvec identify_W(const cvec& w1, const cvec& w2) {
    if (w1.size() != w2.size()) throw StructuralError("identify_W: size mismatch");
    // W(w1, w2) = (V(w1), V(w2)).
    rvec x = identify_V(w1);
    const rvec tail = identify_V(w2);
    x.insert(x.end(), tail.begin(), tail.end());
    return x;
}

std::pair<cvec, cvec> identify_W_inverse(const rvec& x) {
    if (x.size() % 4 != 0) throw StructuralError("identify_W_inverse: length not divisible by 4");
    const std::size_t half = x.size() / 2;
    const rvec head(x.begin(), x.begin() + half);
    const rvec tail(x.begin() + half, x.end());
    return {identify_V_inverse(head), identify_V_inverse(tail)};
}

cxd apply_Ip(cxd xi, double p) {
    if (!(p > 1.0)) throw ParameterError("apply_Ip: p must be > 1");
    return xi + (1.0 - 2.0 / p) * std::conj(xi);
}

cvec apply_Ip(const cvec& xi, double p) {
    if (!(p > 1.0)) throw ParameterError("apply_Ip: p must be > 1");
    const double c = 1.0 - 2.0 / p;
    cvec y(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) y[j] = xi[j] + c * std::conj(xi[j]);
    return y;
}

}  // namespace pellab::ellipticity
