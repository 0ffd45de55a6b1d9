#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nsf/fields.hpp"

namespace nsf {

/// A bundle of named fields on one mesh for serialization. Cell scalars carry
/// one value per triangle (e.g. per-cell means of quadrature-point data).
struct FieldOutput {
    const Mesh* mesh = nullptr;
    std::string title = "nsf fields";
    std::vector<std::pair<std::string, const ScalarField*>> scalars;
    std::vector<std::pair<std::string, const VectorField*>> vectors;
    std::vector<std::pair<std::string, std::vector<double>>> cell_scalars;
};

/// Legacy-VTK ASCII unstructured grid, vertex-index ordering, 17 significant
/// digits throughout so output is diffable across runs.
void write_vtk(const FieldOutput& fields, std::ostream& out);
void write_vtk_file(const FieldOutput& fields, const std::string& path);

}  // namespace nsf
