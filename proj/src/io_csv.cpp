#include "areal/io_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "areal/error.hpp"

namespace areal {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_number(const std::string& cell, int row, const std::string& column) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw DataError("row " + std::to_string(row) + ", column '" + column +
                        "': not a number: '" + cell + "'");
    return v;
}

}  // namespace

CsvRead read_csv_points(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    const auto header = split_csv_line(line);

    int id_col = -1, x_col = -1, y_col = -1, group_col = -1;
    std::vector<std::pair<int, std::string>> attr_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto& name = header[c];
        if (name == "id") id_col = static_cast<int>(c);
        else if (name == "x") x_col = static_cast<int>(c);
        else if (name == "y") y_col = static_cast<int>(c);
        else if (name == "group") group_col = static_cast<int>(c);
        else attr_cols.emplace_back(static_cast<int>(c), name);
    }
    if (id_col < 0 || x_col < 0 || y_col < 0)
        throw DataError(path + ": header must contain id, x and y columns");

    std::vector<SpatialUnit> units;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("row " + std::to_string(row) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
        SpatialUnit u;
        u.id = cells[static_cast<std::size_t>(id_col)];
        u.centroid.x = parse_number(cells[static_cast<std::size_t>(x_col)], row, "x");
        u.centroid.y = parse_number(cells[static_cast<std::size_t>(y_col)], row, "y");
        if (group_col >= 0) u.group = cells[static_cast<std::size_t>(group_col)];
        for (const auto& [c, name] : attr_cols)
            u.attributes[name] = parse_number(cells[static_cast<std::size_t>(c)], row, name);
        units.push_back(std::move(u));
    }
    if (units.empty()) throw DataError(path + ": no data rows");

    CsvRead out{UnitCollection(std::move(units), CoordinateSystem::planar), {}};
    out.manifest.sources = {path};
    out.manifest.format = "csv-points";
    out.manifest.attribute_names = out.units.attribute_names();
    out.manifest.n = out.units.size();
    out.manifest.coordinate_system = CoordinateSystem::planar;
    return out;
}

void write_csv_points(const UnitCollection& units, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    const auto names = units.attribute_names();
    bool any_group = false;
    for (const auto& u : units.units())
        if (!u.group.empty()) any_group = true;

    out << "id,x,y";
    if (any_group) out << ",group";
    for (const auto& n : names) out << "," << n;
    out << "\n";
    out.precision(17);
    for (const auto& u : units.units()) {
        out << u.id << "," << u.centroid.x << "," << u.centroid.y;
        if (any_group) out << "," << u.group;
        for (const auto& n : names) out << "," << u.attributes.at(n);
        out << "\n";
    }
}

}  // namespace areal
