#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pellab/common.hpp"

namespace pellab::semigroup {

enum class FaceLabel { Dirichlet, Neumann };

enum class Side { Left, Right, Bottom, Top };

Side side_from_string(const std::string& s);
std::string to_string(Side s);

// Node-centered masked grid in 1 or 2 space dimensions with mesh width h.
// Active node (i, j) sits at ((i+1)h, (j+1)h); links to inactive or outside
// nodes are boundary faces carrying a Dirichlet (eliminated zero node) or
// Neumann (zero flux, mirror ghost) label. The Dirichlet-labeled subset
// plays the role of the closed set Gamma in the mixed case.
class GridDomain {
  public:
    struct BoundaryFace {
        std::size_t cell;   // flat index of the interior node
        int axis;           // 0 = x, 1 = y
        int direction;      // +1 or -1
        FaceLabel label;
    };

    // 1D grid of n active nodes.
    GridDomain(int n, double h, FaceLabel left, FaceLabel right);

    // 2D grid from mask rows (row 0 = bottom), '#' marks active nodes; all
    // boundary faces take the per-side default label.
    GridDomain(const std::vector<std::string>& mask_rows, double h, FaceLabel left,
               FaceLabel right, FaceLabel bottom, FaceLabel top);

    // Overrides a specific boundary face label (mixed conditions: the
    // Dirichlet-labeled subset plays the role of the closed set Gamma).
    void relabel_face(std::size_t cell, int axis, int direction, FaceLabel label);

    int space_dim() const { return space_dim_; }
    double h() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t n_cells() const { return active_.size(); }
    double cell_volume() const { return space_dim_ == 1 ? h_ : h_ * h_; }

    // Coordinates of an active node.
    std::vector<double> coordinates(std::size_t cell) const;

    // Flat active index of grid position, if active.
    std::optional<std::size_t> active_index(int i, int j) const;

    // Neighbor of a cell along axis/direction: active index, or nothing if
    // the link leaves the active set (then it is a boundary face).
    std::optional<std::size_t> neighbor(std::size_t cell, int axis, int direction) const;

    FaceLabel boundary_label(std::size_t cell, int axis, int direction) const;

    const std::vector<BoundaryFace>& boundary_faces() const { return faces_; }

    bool all_neumann() const;
    bool connected() const;  // graph connectivity of the active set

  private:
    void build_faces(FaceLabel left, FaceLabel right, FaceLabel bottom, FaceLabel top);

    int space_dim_;
    double h_;
    int nx_ = 0, ny_ = 0;
    std::vector<std::pair<int, int>> active_;        // flat -> (i, j)
    std::vector<std::ptrdiff_t> grid_to_active_;     // (i + j*nx) -> flat or -1
    std::vector<BoundaryFace> faces_;
};

}  // namespace pellab::semigroup
