#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sect/simplicial_complex.hpp"

namespace sect {

/// Rectangular binary mask; nonzero pixels are foreground. Row-major storage,
/// row 0 at the top of the image.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;
    double spacing = 1.0;

    bool at(int row, int col) const { return mask[static_cast<std::size_t>(row) * width + col] != 0; }
    int foreground_count() const;
};

/// Reads a PGM (P2 or P5) or a CSV of numbers; any nonzero value is
/// foreground. The format is chosen by file content, not extension.
BinaryImage load_mask(const std::string& path);

/// Triangulates the foreground: a vertex per pixel at (col*spacing,
/// row*spacing), edges between 4-adjacent pixels, and two triangles per fully
/// foreground unit square, split along the (r,c)-(r+1,c+1) diagonal.
SimplicialComplex mask_to_complex(const BinaryImage& img);

/// OFF triangle mesh. Faces must be triangles; isolated vertices are kept.
SimplicialComplex load_off(const std::string& path);

/// Dispatches on extension: .off mesh, .json complex dump, anything else a
/// mask.
SimplicialComplex load_shape(const std::string& path);

void save_complex(const std::string& path, const SimplicialComplex& K);
SimplicialComplex load_complex(const std::string& path);

struct SubjectEntry {
    std::string id;
    std::vector<std::string> mask_paths;
    std::string mesh_path;
    double response = 0.0;
    bool has_response = false;
};

/// Subjects plus covariate matrices aligned with the subject order.
struct Dataset {
    std::vector<SubjectEntry> subjects;
    std::map<std::string, Eigen::MatrixXd> covariates;
    std::map<std::string, std::vector<std::string>> covariate_names;
};

/// Loads a JSON manifest and its covariate CSVs. All referenced paths are
/// resolved relative to the manifest. Under strict mode a subject missing
/// from any covariate file is an error; otherwise it is dropped with a
/// warning on stderr.
Dataset load_dataset(const std::string& manifest_path, bool strict = true);

}  // namespace sect
