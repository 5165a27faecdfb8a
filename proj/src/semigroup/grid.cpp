#include "pellab/semigroup/grid.hpp"

#include <algorithm>
#include <queue>

namespace pellab::semigroup {

Side side_from_string(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    if (s == "bottom") return Side::Bottom;
    if (s == "top") return Side::Top;
    throw StructuralError("unknown side: " + s);
}

std::string to_string(Side s) {
    switch (s) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Bottom: return "bottom";
        case Side::Top: return "top";
    }
    return "?";
}

GridDomain::GridDomain(int n, double h, FaceLabel left, FaceLabel right)
    : space_dim_(1), h_(h), nx_(n), ny_(1) {
    if (n < 1) throw StructuralError("GridDomain: need at least one node");
    if (!(h > 0.0)) throw ParameterError("GridDomain: h must be > 0");
    grid_to_active_.assign(static_cast<std::size_t>(nx_), -1);
    for (int i = 0; i < n; ++i) {
        grid_to_active_[i] = static_cast<std::ptrdiff_t>(active_.size());
        active_.push_back({i, 0});
    }
    build_faces(left, right, FaceLabel::Neumann, FaceLabel::Neumann);
}

GridDomain::GridDomain(const std::vector<std::string>& mask_rows, double h, FaceLabel left,
                       FaceLabel right, FaceLabel bottom, FaceLabel top)
    : space_dim_(2), h_(h) {
    if (!(h > 0.0)) throw ParameterError("GridDomain: h must be > 0");
    if (mask_rows.empty()) throw StructuralError("GridDomain: empty mask");
    ny_ = static_cast<int>(mask_rows.size());
    nx_ = static_cast<int>(mask_rows.front().size());
    for (const auto& row : mask_rows)
        if (static_cast<int>(row.size()) != nx_)
            throw StructuralError("GridDomain: ragged mask rows");

    grid_to_active_.assign(static_cast<std::size_t>(nx_) * ny_, -1);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i)
            if (mask_rows[j][i] == '#') {
                grid_to_active_[static_cast<std::size_t>(j) * nx_ + i] =
                    static_cast<std::ptrdiff_t>(active_.size());
                active_.push_back({i, j});
            }
    if (active_.empty()) throw StructuralError("GridDomain: mask has no active nodes");
    build_faces(left, right, bottom, top);
}

void GridDomain::build_faces(FaceLabel left, FaceLabel right, FaceLabel bottom,
                             FaceLabel top) {
    for (std::size_t c = 0; c < active_.size(); ++c) {
        for (int axis = 0; axis < space_dim_; ++axis) {
            for (int dir = -1; dir <= 1; dir += 2) {
                if (neighbor(c, axis, dir)) continue;
                FaceLabel label;
                if (axis == 0) {
                    label = dir < 0 ? left : right;
                } else {
                    label = dir < 0 ? bottom : top;
                }
                faces_.push_back({c, axis, dir, label});
            }
        }
    }
}

void GridDomain::relabel_face(std::size_t cell, int axis, int direction, FaceLabel label) {
    for (auto& f : faces_)
        if (f.cell == cell && f.axis == axis && f.direction == direction) {
            f.label = label;
            return;
        }
    throw StructuralError("GridDomain::relabel_face: no such boundary face");
}

std::vector<double> GridDomain::coordinates(std::size_t cell) const {
    const auto [i, j] = active_.at(cell);
    if (space_dim_ == 1) return {(i + 1) * h_};
    return {(i + 1) * h_, (j + 1) * h_};
}

std::optional<std::size_t> GridDomain::active_index(int i, int j) const {
    if (i < 0 || i >= nx_ || j < 0 || j >= ny_) return std::nullopt;
    const std::ptrdiff_t a = grid_to_active_[static_cast<std::size_t>(j) * nx_ + i];
    if (a < 0) return std::nullopt;
    return static_cast<std::size_t>(a);
}

std::optional<std::size_t> GridDomain::neighbor(std::size_t cell, int axis,
                                                int direction) const {
    const auto [i, j] = active_.at(cell);
    const int ni = axis == 0 ? i + direction : i;
    const int nj = axis == 1 ? j + direction : j;
    return active_index(ni, nj);
}

FaceLabel GridDomain::boundary_label(std::size_t cell, int axis, int direction) const {
    for (const auto& f : faces_)
        if (f.cell == cell && f.axis == axis && f.direction == direction) return f.label;
    throw StructuralError("GridDomain::boundary_label: not a boundary face");
}

bool GridDomain::all_neumann() const {
    return std::all_of(faces_.begin(), faces_.end(),
                       [](const BoundaryFace& f) { return f.label == FaceLabel::Neumann; });
}

bool GridDomain::connected() const {
    if (active_.empty()) return false;
    std::vector<char> seen(active_.size(), 0);
    std::queue<std::size_t> bfs;
    bfs.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!bfs.empty()) {
        const std::size_t c = bfs.front();
        bfs.pop();
        for (int axis = 0; axis < space_dim_; ++axis)
            for (int dir = -1; dir <= 1; dir += 2)
                if (const auto n = neighbor(c, axis, dir); n && !seen[*n]) {
                    seen[*n] = 1;
                    ++reached;
                    bfs.push(*n);
                }
    }
    return reached == active_.size();
}

}  // namespace pellab::semigroup
