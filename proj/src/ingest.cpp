#include "sect/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sect {

namespace fs = std::filesystem;

int BinaryImage::foreground_count() const {
    int n = 0;
    for (std::uint8_t p : mask) n += (p != 0);
    return n;
}

namespace {

// Next whitespace-delimited token, skipping '#' comments to end of line.
std::string next_token(std::istream& in) {
    std::string tok;
    char c;
    while (in.get(c)) {
        if (c == '#') {
            while (in.get(c) && c != '\n') {
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(c);
    }
    return tok;
}

int parse_int(const std::string& tok, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad " + what + ": '" + tok + "'");
    }
}

BinaryImage load_pgm(std::ifstream& in, const std::string& path, bool binary) {
    BinaryImage img;
    img.width = parse_int(next_token(in), "PGM width");
    img.height = parse_int(next_token(in), "PGM height");
    const int maxval = parse_int(next_token(in), "PGM maxval");
    if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 65535) {
        throw std::runtime_error(path + ": invalid PGM header");
    }
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    img.mask.resize(count);
    if (binary) {
        // Header ends at the single whitespace byte consumed by next_token.
        const int bytes = maxval < 256 ? 1 : 2;
        std::vector<char> raw(count * bytes);
        in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
            throw std::runtime_error(path + ": truncated PGM pixel data");
        }
        for (std::size_t i = 0; i < count; ++i) {
            int v;
            if (bytes == 1) {
                v = static_cast<std::uint8_t>(raw[i]);
            } else {
                v = (static_cast<std::uint8_t>(raw[2 * i]) << 8) |
                    static_cast<std::uint8_t>(raw[2 * i + 1]);
            }
            img.mask[i] = v > 0 ? 1 : 0;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::string tok = next_token(in);
            if (tok.empty()) throw std::runtime_error(path + ": truncated PGM pixel data");
            img.mask[i] = parse_int(tok, "PGM pixel") > 0 ? 1 : 0;
        }
    }
    return img;
}

BinaryImage load_csv_mask(std::ifstream& in, const std::string& path) {
    BinaryImage img;
    std::string line;
    std::vector<std::vector<std::uint8_t>> rows;
    while (std::getline(in, line)) {
        std::vector<std::uint8_t> row;
        std::string cur;
        auto flush = [&]() {
            if (cur.empty()) return;
            try {
                row.push_back(std::stod(cur) != 0.0 ? 1 : 0);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": bad mask value '" + cur + "'");
            }
            cur.clear();
        };
        for (char c : line) {
            if (c == ',' || c == ';' || c == '\t' || c == ' ' || c == '\r') {
                flush();
            } else {
                cur.push_back(c);
            }
        }
        flush();
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty mask");
    img.height = static_cast<int>(rows.size());
    img.width = static_cast<int>(rows[0].size());
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != img.width) {
            throw std::runtime_error(path + ": rows differ in length, mask is not rectangular");
        }
        img.mask.insert(img.mask.end(), r.begin(), r.end());
    }
    return img;
}

}  // namespace

BinaryImage load_mask(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
        return load_pgm(in, path, magic[1] == '5');
    }
    in.clear();
    in.seekg(0);
    return load_csv_mask(in, path);
}

SimplicialComplex mask_to_complex(const BinaryImage& img) {
    if (img.foreground_count() == 0) throw std::invalid_argument("mask has no foreground pixels");
    const double s = img.spacing;
    std::vector<int> pixel_vertex(static_cast<std::size_t>(img.width) * img.height, -1);
    std::vector<std::array<double, 3>> vertices;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (!img.at(r, c)) continue;
            pixel_vertex[static_cast<std::size_t>(r) * img.width + c] =
                static_cast<int>(vertices.size());
            vertices.push_back({c * s, r * s, 0.0});
        }
    }
    auto vid = [&](int r, int c) { return pixel_vertex[static_cast<std::size_t>(r) * img.width + c]; };
    auto fg = [&](int r, int c) {
        return r >= 0 && r < img.height && c >= 0 && c < img.width && img.at(r, c);
    };

    std::vector<std::vector<int>> maximal;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (!img.at(r, c)) continue;
            if (fg(r, c + 1)) maximal.push_back({vid(r, c), vid(r, c + 1)});
            if (fg(r + 1, c)) maximal.push_back({vid(r, c), vid(r + 1, c)});
            if (fg(r, c + 1) && fg(r + 1, c) && fg(r + 1, c + 1)) {
                maximal.push_back({vid(r, c), vid(r, c + 1), vid(r + 1, c + 1)});
                maximal.push_back({vid(r, c), vid(r + 1, c), vid(r + 1, c + 1)});
            }
        }
    }
    return build_complex(vertices, maximal, 2);
}

SimplicialComplex load_off(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string tok = next_token(in);
    if (tok == "OFF") tok = next_token(in);
    const int nv = parse_int(tok, "OFF vertex count");
    const int nf = parse_int(next_token(in), "OFF face count");
    next_token(in);  // edge count, unused
    if (nv < 1) throw std::runtime_error(path + ": OFF file has no vertices");

    std::vector<std::array<double, 3>> vertices(nv);
    for (int i = 0; i < nv; ++i) {
        for (int c = 0; c < 3; ++c) {
            const std::string t = next_token(in);
            if (t.empty()) throw std::runtime_error(path + ": truncated OFF vertex list");
            try {
                vertices[i][c] = std::stod(t);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": bad OFF coordinate '" + t + "'");
            }
        }
    }
    std::vector<std::vector<int>> faces;
    faces.reserve(nf);
    for (int i = 0; i < nf; ++i) {
        const int arity = parse_int(next_token(in), "OFF face arity");
        if (arity != 3) {
            throw std::runtime_error(path + ": only triangle faces are supported, found a face with " +
                                     std::to_string(arity) + " vertices");
        }
        std::vector<int> tri(3);
        for (int c = 0; c < 3; ++c) tri[c] = parse_int(next_token(in), "OFF face index");
        faces.push_back(std::move(tri));
    }
    return build_complex(vertices, faces, 3);
}

SimplicialComplex load_shape(const std::string& path) {
    std::string ext = fs::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".off") return load_off(path);
    if (ext == ".json") return load_complex(path);
    return mask_to_complex(load_mask(path));
}

void save_complex(const std::string& path, const SimplicialComplex& K) {
    nlohmann::ordered_json j;
    j["format"] = "sect-complex";
    j["version"] = 1;
    j["dim"] = K.dim;
    auto& verts = j["vertices"] = nlohmann::ordered_json::array();
    for (const auto& v : K.vertices) verts.push_back({v[0], v[1], v[2]});
    auto& simp = j["simplices"] = nlohmann::ordered_json::array();
    for (int k = 0; k < 4; ++k) {
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const SimplexKey& s : K.simplices[k]) {
            nlohmann::ordered_json tup = nlohmann::ordered_json::array();
            for (int i = 0; i <= k; ++i) tup.push_back(s[i]);
            list.push_back(std::move(tup));
        }
        simp.push_back(std::move(list));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

SimplicialComplex load_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (j.value("format", "") != "sect-complex") {
        throw std::runtime_error(path + ": not a complex dump");
    }
    SimplicialComplex K;
    K.dim = j.at("dim").get<int>();
    for (const auto& v : j.at("vertices")) {
        K.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()});
    }
    const auto& simp = j.at("simplices");
    if (simp.size() != 4) throw std::runtime_error(path + ": expected 4 simplex lists");
    const int n = static_cast<int>(K.vertices.size());
    for (int k = 0; k < 4; ++k) {
        for (const auto& tup : simp[k]) {
            if (static_cast<int>(tup.size()) != k + 1) {
                throw std::runtime_error(path + ": simplex arity disagrees with its degree");
            }
            std::vector<int> idx;
            for (const auto& t : tup) idx.push_back(t.get<int>());
            SimplexKey key = make_key(idx);
            for (int i = 0; i <= k; ++i) {
                if (key[i] < 0 || key[i] >= n) {
                    throw std::runtime_error(path + ": vertex index out of range");
                }
            }
            K.simplices[k].push_back(key);
        }
        std::sort(K.simplices[k].begin(), K.simplices[k].end());
        K.simplices[k].erase(std::unique(K.simplices[k].begin(), K.simplices[k].end()),
                             K.simplices[k].end());
    }
    // Closure check: every face of every stored simplex must be stored.
    for (int k = 1; k < 4; ++k) {
        for (const SimplexKey& s : K.simplices[k]) {
            for (int drop = 0; drop <= k; ++drop) {
                SimplexKey face{-1, -1, -1, -1};
                int m = 0;
                for (int i = 0; i <= k; ++i) {
                    if (i != drop) face[m++] = s[i];
                }
                if (K.simplex_index(k - 1, face) < 0) {
                    throw std::runtime_error(path + ": stored complex is not closed under faces");
                }
            }
        }
    }
    return K;
}

namespace {

struct CsvTable {
    std::vector<std::string> columns;           // feature names, id column excluded
    std::vector<std::string> row_ids;
    std::vector<std::vector<double>> rows;
};

CsvTable load_covariate_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty covariate file");
    CsvTable table;
    {
        std::stringstream ss(line);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            if (first) {
                first = false;  // id column header
            } else {
                table.columns.push_back(cell);
            }
        }
    }
    if (table.columns.empty()) throw std::runtime_error(path + ": no feature columns");
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool first = true;
        std::string id;
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            if (first) {
                id = cell;
                first = false;
                continue;
            }
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": bad numeric cell '" + cell + "' for id " + id);
            }
            if (!std::isfinite(row.back())) {
                throw std::runtime_error(path + ": non-finite value for id " + id);
            }
        }
        if (row.size() != table.columns.size()) {
            throw std::runtime_error(path + ": row for id " + id + " has " +
                                     std::to_string(row.size()) + " values, expected " +
                                     std::to_string(table.columns.size()));
        }
        table.row_ids.push_back(id);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace

Dataset load_dataset(const std::string& manifest_path, bool strict) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot read " + manifest_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(manifest_path + ": " + e.what());
    }
    const fs::path base = fs::path(manifest_path).parent_path();
    auto resolve = [&](const std::string& rel) { return (base / rel).string(); };

    Dataset ds;
    std::set<std::string> seen;
    for (const auto& js : j.at("subjects")) {
        SubjectEntry e;
        e.id = js.at("id").get<std::string>();
        if (!seen.insert(e.id).second) {
            throw std::runtime_error("duplicate subject id " + e.id);
        }
        if (js.contains("masks")) {
            for (const auto& m : js["masks"]) e.mask_paths.push_back(resolve(m.get<std::string>()));
        }
        if (js.contains("mesh")) e.mesh_path = resolve(js["mesh"].get<std::string>());
        if (e.mask_paths.empty() == e.mesh_path.empty()) {
            throw std::runtime_error("subject " + e.id + " must have either masks or a mesh");
        }
        for (const auto& p : e.mask_paths) {
            if (!fs::exists(p)) throw std::runtime_error("subject " + e.id + ": missing file " + p);
        }
        if (!e.mesh_path.empty() && !fs::exists(e.mesh_path)) {
            throw std::runtime_error("subject " + e.id + ": missing file " + e.mesh_path);
        }
        if (js.contains("response")) {
            e.response = js["response"].get<double>();
            if (!std::isfinite(e.response)) {
                throw std::runtime_error("subject " + e.id + ": non-finite response");
            }
            e.has_response = true;
        }
        ds.subjects.push_back(std::move(e));
    }
    if (ds.subjects.empty()) throw std::runtime_error(manifest_path + ": no subjects");

    if (j.contains("covariates")) {
        // Load each table, then check coverage before any alignment.
        std::map<std::string, CsvTable> tables;
        for (const auto& [name, rel] : j["covariates"].items()) {
            CsvTable t = load_covariate_csv(resolve(rel.get<std::string>()));
            std::set<std::string> ids;
            for (const auto& id : t.row_ids) {
                if (!seen.count(id)) {
                    throw std::runtime_error("covariate '" + name + "' has unknown subject id " + id);
                }
                if (!ids.insert(id).second) {
                    throw std::runtime_error("covariate '" + name + "' has duplicate subject id " + id);
                }
            }
            tables.emplace(name, std::move(t));
        }
        std::vector<SubjectEntry> kept_subjects;
        std::vector<int> kept_index;
        for (std::size_t i = 0; i < ds.subjects.size(); ++i) {
            bool complete = true;
            for (const auto& [name, t] : tables) {
                if (std::find(t.row_ids.begin(), t.row_ids.end(), ds.subjects[i].id) ==
                    t.row_ids.end()) {
                    if (strict) {
                        throw std::runtime_error("subject " + ds.subjects[i].id +
                                                 " missing from covariate '" + name + "'");
                    }
                    std::cerr << "warning: dropping subject " << ds.subjects[i].id
                              << ", missing covariate '" << name << "'\n";
                    complete = false;
                    break;
                }
            }
            if (complete) {
                kept_subjects.push_back(ds.subjects[i]);
            }
        }
        ds.subjects = std::move(kept_subjects);
        if (ds.subjects.empty()) throw std::runtime_error("no subject has all covariates");
        for (auto& [name, t] : tables) {
            std::map<std::string, int> row_of;
            for (std::size_t r = 0; r < t.row_ids.size(); ++r) row_of[t.row_ids[r]] = static_cast<int>(r);
            Eigen::MatrixXd M(ds.subjects.size(), t.columns.size());
            for (std::size_t i = 0; i < ds.subjects.size(); ++i) {
                const auto& row = t.rows[row_of.at(ds.subjects[i].id)];
                for (std::size_t c = 0; c < row.size(); ++c) M(static_cast<int>(i), static_cast<int>(c)) = row[c];
            }
            ds.covariates.emplace(name, std::move(M));
            ds.covariate_names.emplace(name, t.columns);
        }
    }
    return ds;
}

}  // namespace sect
