#include "treeqm/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "treeqm/error.hpp"

namespace treeqm {

  namespace {

    using nlohmann::json;

    FiniteGroup group_from_json(json const& j, char const* field) {
      if (j.is_string()) {
        return FiniteGroup::builtin(j.get<std::string>());
      }
      if (!j.is_object() || !j.contains("elements") || !j.contains("table")) {
        throw Error(ErrorKind::ParseError,
                    std::string("group ") + field
                        + " must be a builtin name or {elements, table}");
      }
      auto names = j.at("elements").get<std::vector<std::string>>();
      std::vector<std::vector<int>> table;
      for (auto const& row : j.at("table")) {
        std::vector<int> r;
        for (auto const& entry : row) {
          if (entry.is_number_integer()) {
            r.push_back(entry.get<int>());
            continue;
          }
          auto const name = entry.get<std::string>();
          auto       it   = std::find(names.begin(), names.end(), name);
          if (it == names.end()) {
            throw Error(ErrorKind::ParseError, std::string("group ") + field
                                                   + ": unknown element '" + name
                                                   + "' in table");
          }
          r.push_back(static_cast<int>(it - names.begin()));
        }
        table.push_back(std::move(r));
      }
      return FiniteGroup::from_table(std::move(names), table);
    }

    Embedding embedding_from_json(json const&        j,
                                  FiniteGroup const& c,
                                  FiniteGroup const& target,
                                  char const*        field) {
      if (!j.is_object()) {
        throw Error(ErrorKind::ParseError, std::string(field) + " must be an object");
      }
      std::vector<int> map(c.order(), -1);
      for (auto const& [key, value] : j.items()) {
        auto src = c.find(key);
        auto dst = target.find(value.get<std::string>());
        if (!src || !dst) {
          throw Error(ErrorKind::ParseError, std::string(field) + ": unknown element in "
                                                 + key + " -> " + value.dump());
        }
        map[static_cast<std::size_t>(*src)] = *dst;
      }
      for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i] < 0) {
          throw Error(ErrorKind::ParseError, std::string(field) + " does not map "
                                                 + c.name(static_cast<int>(i)));
        }
      }
      return Embedding::checked(c, target, std::move(map));
    }

  }  // namespace

  Instance parse_instance(std::string_view json_text) {
    json doc;
    try {
      doc = json::parse(json_text);
    } catch (json::exception const& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
    try {
      auto const kind = doc.at("kind").get<std::string>();
      if (kind == "free") {
        std::vector<std::string> gens;
        if (doc.contains("generators")) {
          gens = doc.at("generators").get<std::vector<std::string>>();
        }
        return Instance::free(doc.at("rank").get<int>(), std::move(gens));
      }
      if (kind == "amalgam") {
        auto a  = group_from_json(doc.at("A"), "A");
        auto b  = group_from_json(doc.at("B"), "B");
        auto c  = group_from_json(doc.at("C"), "C");
        auto ea = embedding_from_json(doc.at("embedA"), c, a, "embedA");
        auto eb = embedding_from_json(doc.at("embedB"), c, b, "embedB");
        return Instance::amalgam(std::move(a), std::move(b), std::move(c), std::move(ea),
                                 std::move(eb));
      }
      if (kind == "hnn") {
        throw Error(ErrorKind::ParseError, "HNN extensions are not supported");
      }
      throw Error(ErrorKind::ParseError, "unknown instance kind '" + kind + "'");
    } catch (json::exception const& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
  }

  Instance load_instance(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in) {
      throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
  }

}  // namespace treeqm
