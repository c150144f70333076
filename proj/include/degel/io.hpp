#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "degel/errors.hpp"
#include "degel/grid.hpp"

namespace degel {

/// Shortest round-trip-exact decimal form (17 significant digits).
inline std::string float17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Write-then-rename so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open output file: " + tmp.string());
        out << content;
        if (!out) throw ConfigError("failed writing output file: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

/// Minimal CSV emitter: header row, then rows of 17-digit floats / verbatim cells.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) body_ += ',';
            body_ += header[i];
        }
        body_ += '\n';
        columns_ = header.size();
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_) throw ConfigError("csv row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body_ += ',';
            body_ += cells[i];
        }
        body_ += '\n';
    }

    const std::string& str() const { return body_; }

  private:
    std::string body_;
    std::size_t columns_ = 0;
};

/// Solution field as CSV: one row per masked-in node, columns
/// i,j[,k], x,y[,z], u, mask (1 interior, 2 band).
template <int D>
inline std::string solution_csv(const ScalarField<D>& u) {
    std::vector<std::string> header;
    const char* idx_names[3] = {"i", "j", "k"};
    const char* coord_names[3] = {"x", "y", "z"};
    for (int a = 0; a < D; ++a) header.push_back(idx_names[a]);
    for (int a = 0; a < D; ++a) header.push_back(coord_names[a]);
    header.push_back("u");
    header.push_back("mask");
    CsvWriter csv(header);
    const Grid<D>& g = u.grid();
    for (std::size_t idx = 0; idx < g.num_nodes(); ++idx) {
        if (!g.masked_in(idx)) continue;
        const auto mi = g.multi_index(idx);
        const auto x = g.coords(idx);
        std::vector<std::string> cells;
        for (int a = 0; a < D; ++a) cells.push_back(std::to_string(mi[a]));
        for (int a = 0; a < D; ++a) cells.push_back(float17(x[a]));
        cells.push_back(float17(u[idx]));
        cells.push_back(g.mask(idx) == NodeMask::Interior ? "1" : "2");
        csv.row(cells);
    }
    return csv.str();
}

/// Load a solution CSV produced by solution_csv back into a field on the
/// given grid (validates the node count).
template <int D>
inline ScalarField<D> read_solution_csv(const std::filesystem::path& path,
                                        std::shared_ptr<const Grid<D>> grid) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open solution file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty solution file: " + path.string());
    ScalarField<D> u(grid);
    std::size_t rows = 0, expected = grid->interior().size() + grid->band().size();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        IVec<D> mi;
        double uval = 0.0;
        std::size_t pos = 0;
        auto next_cell = [&]() {
            const std::size_t comma = line.find(',', pos);
            const std::string cell = line.substr(pos, comma - pos);
            pos = (comma == std::string::npos) ? line.size() : comma + 1;
            return cell;
        };
        for (int a = 0; a < D; ++a) mi[a] = std::stoi(next_cell());
        for (int a = 0; a < D; ++a) next_cell(); // coordinates, recomputable
        uval = std::stod(next_cell());
        u[grid->flat_index(mi)] = uval;
        ++rows;
    }
    if (rows != expected)
        throw ConfigError("solution file node count does not match the grid: " + path.string());
    return u;
}

} // namespace degel
