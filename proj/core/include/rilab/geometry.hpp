#ifndef RILAB_GEOMETRY_HPP
#define RILAB_GEOMETRY_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rilab/point.hpp"

namespace rilab {

// Finite lattice set with deterministic (lexicographic) enumeration and a
// stable point -> contiguous index map, so linear solvers can address it.
class FiniteSet {
  public:
    FiniteSet() = default;
    FiniteSet(std::vector<Pt> pts, int dim);

    bool contains(const Pt &p) const { return idx_.count(p) != 0; }
    int index_of(const Pt &p) const;
    const std::vector<Pt> &points() const { return pts_; }
    int size() const { return static_cast<int>(pts_.size()); }
    int dim() const { return dim_; }

  private:
    std::vector<Pt> pts_;
    std::unordered_map<Pt, int, PtHash> idx_;
    int dim_ = 0;
};

FiniteSet boundary(const FiniteSet &a);

enum class Region : uint8_t {
    A1 = 0,      // the target set A1
    Mid = 1,     // rest of A2^C: between A1 and V, and between V and dA2
    V = 2,       // the separating surface
    A2Bound = 3, // internal boundary of A2
    A2Far = 4,   // rest of A2 (everything outside the grid counts as this)
};

// Dense region labels over the bounding box of A2^C; single array lookup per
// walk step.
class LabelGrid {
  public:
    LabelGrid() = default;
    LabelGrid(int ext, int dim);

    Region at(const Pt &p) const {
        long long i = flat(p);
        return i < 0 ? Region::A2Far : static_cast<Region>(labels_[i]);
    }
    void set(const Pt &p, Region r) { labels_[flat(p)] = static_cast<uint8_t>(r); }
    bool in_a2c(const Pt &p) const {
        Region r = at(p);
        return r == Region::A1 || r == Region::Mid || r == Region::V;
    }
    int ext() const { return ext_; }

  private:
    long long flat(const Pt &p) const {
        long long i = 0;
        for (int k = 0; k < dim_; ++k) {
            int c = p.c[k] + ext_;
            if (c < 0 || c > 2 * ext_) return -1;
            i = i * (2 * ext_ + 1) + c;
        }
        return i;
    }
    int ext_ = 0, dim_ = 0;
    std::vector<uint8_t> labels_;
};

enum class Shape { Ball, SmoothedCube };

Shape shape_from_string(const std::string &s);
std::string to_string(Shape s);

struct GeometryTriple {
    Shape shape;
    int r = 0, s = 0, d = 0;
    FiniteSet a1;
    FiniteSet boundary_a1;
    FiniteSet v;
    FiniteSet a2_complement;
    FiniteSet boundary_a2;
    LabelGrid grid;
    // cube shape only: the unsmoothed hypercube H_{r+2s}
    FiniteSet h_unsmoothed;
};

// Budget guards the dense structures; |a2_complement| above it is an error.
GeometryTriple build_geometry(Shape shape, int r, int s, int d,
                              long long budget = 4'000'000);

// Exhaustive BFS check that every nearest-neighbor path from a1 to
// boundary_a2 crosses v.
bool separation_holds(const GeometryTriple &g);

// Cube shape: every boundary point of a1 is touched by a closed s-ball
// centered in the core hypercube and contained in a1.
bool smoothed_frontier_holds(const GeometryTriple &g);

} // namespace rilab

#endif
