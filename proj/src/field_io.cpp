#include "mhd_inhibit/field_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mhdi {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

const char* boundary_name(BoundaryKind b) {
    switch (b) {
        case BoundaryKind::vanishing: return "vanishing";
        case BoundaryKind::periodic_vertical: return "periodic_vertical";
        case BoundaryKind::none: return "none";
    }
    return "none";
}

BoundaryKind boundary_from(const std::string& s) {
    if (s == "vanishing") return BoundaryKind::vanishing;
    if (s == "periodic_vertical") return BoundaryKind::periodic_vertical;
    if (s == "none") return BoundaryKind::none;
    throw InvalidArgument("read_field: unknown boundary kind '" + s + "'");
}

}  // namespace

void write_field(const std::string& stem, const VectorField3& field, const Grid3D& grid) {
    if (field.size() != grid.size()) throw InvalidArgument("write_field: field does not match grid");
    std::ofstream csv(stem + ".csv", std::ios::binary);
    if (!csv) throw Error("write_field: cannot open '" + stem + ".csv'");
    csv << "i,j,k,y1,y2,y3,v1,v2,v3\n";
    for (int k = 0; k < grid.n3; ++k)
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) {
                const std::size_t n = grid.index(i, j, k);
                const Vec3 y = grid.position(i, j, k);
                const Vec3 v = field.at(n);
                csv << i << ',' << j << ',' << k << ',' << format_double(y[0]) << ',' << format_double(y[1]) << ','
                    << format_double(y[2]) << ',' << format_double(v[0]) << ',' << format_double(v[1]) << ','
                    << format_double(v[2]) << '\n';
            }

    nlohmann::ordered_json meta;
    meta["n1"] = grid.n1;
    meta["n2"] = grid.n2;
    meta["n3"] = grid.n3;
    meta["a"] = format_double(grid.domain.a);
    meta["b"] = format_double(grid.domain.b);
    meta["L1"] = format_double(grid.domain.L1);
    meta["L2"] = format_double(grid.domain.L2);
    meta["interface"] = grid.domain.interface ? nlohmann::ordered_json(format_double(*grid.domain.interface))
                                              : nlohmann::ordered_json(nullptr);
    meta["boundary"] = boundary_name(field.boundary);
    meta["csv"] = stem.substr(stem.find_last_of('/') + 1) + ".csv";
    std::ofstream js(stem + ".json", std::ios::binary);
    if (!js) throw Error("write_field: cannot open '" + stem + ".json'");
    js << meta.dump(2) << '\n';
}

std::pair<VectorField3, Grid3D> read_field(const std::string& stem) {
    std::ifstream js(stem + ".json");
    if (!js) throw InvalidArgument("read_field: cannot open '" + stem + ".json'");
    nlohmann::json meta;
    try {
        js >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("read_field: malformed sidecar: " + std::string(e.what()));
    }
    auto num = [&](const char* key) { return std::strtod(meta.at(key).get<std::string>().c_str(), nullptr); };
    SlabDomain d;
    d.a = num("a");
    d.b = num("b");
    d.L1 = num("L1");
    d.L2 = num("L2");
    if (!meta.at("interface").is_null()) d.interface = num("interface");
    const Grid3D grid =
        make_uniform_grid(d, meta.at("n1").get<int>(), meta.at("n2").get<int>(), meta.at("n3").get<int>());

    VectorField3 f(grid.size());
    f.boundary = boundary_from(meta.at("boundary").get<std::string>());
    std::ifstream csv(stem + ".csv");
    if (!csv) throw InvalidArgument("read_field: cannot open '" + stem + ".csv'");
    std::string line;
    std::getline(csv, line);
    if (line != "i,j,k,y1,y2,y3,v1,v2,v3") throw InvalidArgument("read_field: unexpected CSV header");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        const long i = std::strtol(p, &end, 10);
        const long j = std::strtol(end + 1, &end, 10);
        const long k = std::strtol(end + 1, &end, 10);
        for (int c = 0; c < 3; ++c) std::strtod(end + 1, &end);
        Vec3 v;
        for (int c = 0; c < 3; ++c) v[c] = std::strtod(end + 1, &end);
        if (i < 0 || i >= grid.n1 || j < 0 || j >= grid.n2 || k < 0 || k >= grid.n3)
            throw InvalidArgument("read_field: index out of range in row " + std::to_string(rows + 2));
        f.set(grid.index(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)), v);
        ++rows;
    }
    if (rows != grid.size()) throw InvalidArgument("read_field: expected " + std::to_string(grid.size()) + " rows");
    return {std::move(f), grid};
}

}  // namespace mhdi
