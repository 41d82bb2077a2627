#include "mhd_inhibit/json_output.hpp"

#include "mhd_inhibit/errors.hpp"
#include "mhd_inhibit/field_io.hpp"

#include <cmath>
#include <fstream>

namespace mhdi {

namespace {

void emit(const Json& j, std::string& out, int indent, bool compact) {
    const std::string pad(indent, ' ');
    const std::string inner(indent + 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            if (compact) {
                out += "{";
                bool first = true;
                for (auto it = j.begin(); it != j.end(); ++it) {
                    if (!first) out += ",";
                    first = false;
                    out += Json(it.key()).dump() + ":";
                    emit(it.value(), out, 0, true);
                }
                out += "}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += inner;
                out += Json(it.key()).dump();
                out += ": ";
                emit(it.value(), out, indent + 2, compact);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            bool scalars = true;
            for (const auto& e : j)
                if (e.is_structured()) scalars = false;
            if (scalars || compact) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += compact ? "," : ", ";
                    emit(j[i], out, indent + 2, compact);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                emit(j[i], out, indent + 2, compact);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string to_json_text(const Json& j) {
    std::string out;
    emit(j, out, 0, false);
    out += '\n';
    return out;
}

std::string to_json_line(const Json& j) {
    std::string out;
    emit(j, out, 0, true);
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
    if (!f) throw Error("write failed for '" + path + "'");
}

}  // namespace mhdi
