#pragma once

#include <Eigen/Dense>
#include <utility>

#include "normstate/errors.hpp"
#include "normstate/grid.hpp"

namespace normstate {

/// Sampled radial function u(r_i) on a shared grid. Value semantics:
/// operations return new fields, nothing mutates in place.
struct Field {
    GridPtr grid;
    Eigen::ArrayXd values;

    Field() = default;
    Field(GridPtr g, Eigen::ArrayXd v) : grid(std::move(g)), values(std::move(v)) {
        if (!grid) throw config_error("Field: null grid");
        if (values.size() != grid->nodes.size())
            throw config_error("Field: value count does not match grid");
    }

    int size() const { return static_cast<int>(values.size()); }
    bool all_finite() const { return values.isFinite().all(); }
};

inline Field zero_field(const GridPtr& g) {
    return Field(g, Eigen::ArrayXd::Zero(g->nodes.size()));
}

/// Two-component state (u, v) on one grid.
struct FieldPair {
    Field u;
    Field v;

    FieldPair() = default;
    FieldPair(Field a, Field b) : u(std::move(a)), v(std::move(b)) {
        if (u.grid != v.grid) throw config_error("FieldPair: components must share a grid");
    }

    const GridPtr& grid() const { return u.grid; }
};

}  // namespace normstate
