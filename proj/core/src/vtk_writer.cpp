#include "nsf/vtk_writer.hpp"

#include <fstream>
#include <stdexcept>

namespace nsf {

void write_vtk(const FieldOutput& fields, std::ostream& out) {
    const Mesh& mesh = *fields.mesh;
    for (const auto& [name, f] : fields.scalars)
        if (f->mesh != fields.mesh)
            throw std::invalid_argument("write_vtk: field '" + name + "' is on a different mesh");
    for (const auto& [name, f] : fields.vectors)
        if (f->mesh != fields.mesh)
            throw std::invalid_argument("write_vtk: field '" + name + "' is on a different mesh");
    for (const auto& [name, v] : fields.cell_scalars)
        if (static_cast<int>(v.size()) != mesh.triangle_count())
            throw std::invalid_argument("write_vtk: cell field '" + name + "' has wrong size");

    out.precision(17);
    out << "# vtk DataFile Version 3.0\n";
    out << fields.title << "\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.vertex_count() << " double\n";
    for (const Vec2& p : mesh.vertices()) out << p.x << " " << p.y << " 0\n";
    out << "CELLS " << mesh.triangle_count() << " " << 4 * mesh.triangle_count() << "\n";
    for (const auto& t : mesh.triangles()) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "CELL_TYPES " << mesh.triangle_count() << "\n";
    for (int t = 0; t < mesh.triangle_count(); ++t) out << "5\n";

    if (!fields.scalars.empty() || !fields.vectors.empty()) {
        out << "POINT_DATA " << mesh.vertex_count() << "\n";
        for (const auto& [name, f] : fields.scalars) {
            out << "SCALARS " << name << " double 1\n";
            out << "LOOKUP_TABLE default\n";
            for (int v = 0; v < mesh.vertex_count(); ++v) out << (*f)[v] << "\n";
        }
        for (const auto& [name, f] : fields.vectors) {
            out << "VECTORS " << name << " double\n";
            for (int v = 0; v < mesh.vertex_count(); ++v) {
                const Vec2 u = f->at(v);
                out << u.x << " " << u.y << " 0\n";
            }
        }
    }
    if (!fields.cell_scalars.empty()) {
        out << "CELL_DATA " << mesh.triangle_count() << "\n";
        for (const auto& [name, vals] : fields.cell_scalars) {
            out << "SCALARS " << name << " double 1\n";
            out << "LOOKUP_TABLE default\n";
            for (double v : vals) out << v << "\n";
        }
    }
}

void write_vtk_file(const FieldOutput& fields, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_vtk: cannot open '" + path + "'");
    write_vtk(fields, out);
    if (!out) throw std::runtime_error("write_vtk: write failed for '" + path + "'");
}

}  // namespace nsf
