#include "necklace/system_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "necklace/errors.hpp"

namespace necklace {

using nlohmann::json;

NecklaceSystem parse_system_file(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed system file: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("system file must be a JSON object");
    if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
        throw InputError("missing integer field 'dimension'");
    if (doc["dimension"].get<int>() != 2)
        throw InputError("unsupported dimension " + doc["dimension"].dump() +
                         " (only dimension 2 is supported)");
    if (!doc.contains("maps") || !doc["maps"].is_array())
        throw InputError("missing array field 'maps'");

    std::vector<AffineMap> maps;
    int index = 0;
    for (const auto& entry : doc["maps"]) {
        ++index;
        std::string where = "map " + std::to_string(index);
        if (!entry.is_object()) throw InputError(where + ": expected an object");
        if (!entry.contains("matrix")) throw InputError(where + ": missing 'matrix'");
        if (!entry.contains("translation")) throw InputError(where + ": missing 'translation'");
        const auto& mat = entry["matrix"];
        const auto& tr = entry["translation"];
        auto num = [&](const json& v, const std::string& field) {
            if (!v.is_number()) throw InputError(where + ": field '" + field + "' is not a number");
            return v.get<double>();
        };
        if (!mat.is_array() || mat.size() != 2 || !mat[0].is_array() || mat[0].size() != 2 ||
            !mat[1].is_array() || mat[1].size() != 2)
            throw InputError(where + ": 'matrix' must be a 2x2 array");
        if (!tr.is_array() || tr.size() != 2)
            throw InputError(where + ": 'translation' must have 2 entries");
        AffineMap m;
        m.linear = Mat2{num(mat[0][0], "matrix[0][0]"), num(mat[0][1], "matrix[0][1]"),
                        num(mat[1][0], "matrix[1][0]"), num(mat[1][1], "matrix[1][1]")};
        m.translation = Vec2{num(tr[0], "translation[0]"), num(tr[1], "translation[1]")};
        maps.push_back(m);
    }

    NecklaceSystem sys = make_system(std::move(maps));
    if (doc.contains("name") && doc["name"].is_string()) sys.name = doc["name"].get<std::string>();
    return sys;
}

NecklaceSystem load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system_file(buf.str());
}

std::string serialize_system(const NecklaceSystem& sys) {
    json doc;
    doc["dimension"] = 2;
    if (!sys.name.empty()) doc["name"] = sys.name;
    doc["maps"] = json::array();
    for (const AffineMap& m : sys.maps) {
        json e;
        e["matrix"] = {{m.linear.a, m.linear.b}, {m.linear.c, m.linear.d}};
        e["translation"] = {m.translation.x, m.translation.y};
        doc["maps"].push_back(e);
    }
    return doc.dump(2) + "\n";
}

}  // namespace necklace
