#include "sgce/ged_io.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "sgce/error.hpp"
#include "sgce/util.hpp"

namespace sgce {

using nlohmann::json;

namespace {

json ref_to_json(const ItemRef& ref) {
  if (const auto* n = std::get_if<NodeRef>(&ref)) return {{"id", n->id}, {"label", n->label}};
  const auto& e = std::get<EdgeRef>(ref);
  return {{"src", e.src}, {"dst", e.dst}, {"label", e.label}};
}

ItemRef ref_from_json(const json& j, bool node) {
  try {
    if (node) return NodeRef{j.at("id").get<int>(), j.at("label").get<std::string>()};
    return EdgeRef{j.at("src").get<int>(), j.at("dst").get<int>(), j.at("label").get<std::string>()};
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed edit reference: ") + e.what());
  }
}

}  // namespace

json edit_path_to_json(const EditPath& path) {
  json ops = json::array();
  for (const auto& op : path.ops) {
    json o;
    o["kind"] = to_string(op.kind);
    if (op.source) o["source"] = ref_to_json(*op.source);
    if (op.target) o["target"] = ref_to_json(*op.target);
    o["cost"] = op.cost;
    ops.push_back(std::move(o));
  }
  return {{"source_id", path.source_id}, {"target_id", path.target_id}, {"total_cost", path.total_cost},
          {"node_edits", path.node_edits},  {"edge_edits", path.edge_edits}, {"ops", std::move(ops)}};
}

EditPath edit_path_from_json(const json& j) {
  EditPath path;
  try {
    path.source_id = j.value("source_id", "");
    path.target_id = j.value("target_id", "");
    for (const auto& o : j.at("ops")) {
      EditOp op;
      op.kind = edit_kind_from_string(o.at("kind").get<std::string>());
      const bool node = is_node_op(op.kind);
      if (o.contains("source")) op.source = ref_from_json(o["source"], node);
      if (o.contains("target")) op.target = ref_from_json(o["target"], node);
      op.cost = o.at("cost").get<double>();
      path.ops.push_back(std::move(op));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed edit path: ") + e.what());
  }
  for (const auto& op : path.ops) {
    path.total_cost += op.cost;
    if (op.cost > 0.0) ++(is_node_op(op.kind) ? path.node_edits : path.edge_edits);
  }
  return path;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

const char* color_of(const EditOp& op) {
  switch (op.kind) {
    case EditKind::NodeIns:
    case EditKind::EdgeIns: return "green";
    case EditKind::NodeDel:
    case EditKind::EdgeDel: return "red";
    default: return op.cost > 0.0 ? "blue" : "black";
  }
}

}  // namespace

std::string edit_path_to_dot(const EditPath& path) {
  std::ostringstream out;
  out << "digraph edit_path {\n";
  out << "  label=\"" << dot_escape(path.source_id) << " -> " << dot_escape(path.target_id) << "\";\n";
  // Target ids are resolved to the drawn node that produces them.
  std::map<int, std::string> target_name;
  for (const auto& op : path.ops) {
    if (!is_node_op(op.kind)) continue;
    std::string name, label;
    if (op.kind == EditKind::NodeIns) {
      const auto& t = std::get<NodeRef>(*op.target);
      name = "t" + std::to_string(t.id);
      label = t.label;
      target_name[t.id] = name;
    } else {
      const auto& s = std::get<NodeRef>(*op.source);
      name = "s" + std::to_string(s.id);
      label = s.label;
      if (op.kind == EditKind::NodeSub) {
        const auto& t = std::get<NodeRef>(*op.target);
        target_name[t.id] = name;
        if (t.label != s.label) label = s.label + " -> " + t.label;
      }
    }
    out << "  " << name << " [label=\"" << dot_escape(label) << "\", color=" << color_of(op) << "];\n";
  }
  auto resolve_target = [&](int id) {
    auto it = target_name.find(id);
    return it == target_name.end() ? "t" + std::to_string(id) : it->second;
  };
  for (const auto& op : path.ops) {
    if (is_node_op(op.kind)) continue;
    std::string from, to, label;
    if (op.kind == EditKind::EdgeIns) {
      const auto& t = std::get<EdgeRef>(*op.target);
      from = resolve_target(t.src);
      to = resolve_target(t.dst);
      label = t.label;
    } else {
      const auto& s = std::get<EdgeRef>(*op.source);
      from = "s" + std::to_string(s.src);
      to = "s" + std::to_string(s.dst);
      label = s.label;
      if (op.kind == EditKind::EdgeSub) {
        const auto& t = std::get<EdgeRef>(*op.target);
        if (t.label != s.label) label = s.label + " -> " + t.label;
      }
    }
    out << "  " << from << " -> " << to << " [label=\"" << dot_escape(label) << "\", color=" << color_of(op)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back().push_back(c);
    }
  }
  return fields;
}

}  // namespace

std::string ged_matrix_to_csv(const GedMatrix& m) {
  std::ostringstream out;
  out << "id";
  for (const auto& id : m.ids()) out << ',' << csv_field(id);
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << csv_field(m.ids()[i]);
    for (std::size_t j = 0; j < m.size(); ++j) {
      out << ',';
      if (auto v = m.at(i, j)) out << format_double(*v);
    }
    out << '\n';
  }
  return out.str();
}

GedMatrix ged_matrix_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("GED CSV: empty input");
  auto header = csv_split(line);
  if (header.empty() || header[0] != "id") throw ValidationError("GED CSV: header must start with 'id'");
  header.erase(header.begin());
  GedMatrix m(header);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = csv_split(line);
    if (row >= m.size() || fields.size() != m.size() + 1 || fields[0] != header[row]) {
      throw ValidationError("GED CSV: malformed row " + std::to_string(row + 1));
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      const auto& cell = fields[j + 1];
      if (cell.empty() || j == row) continue;
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        m.set(row, j, v);
      } catch (const std::exception&) {
        throw ValidationError("GED CSV: bad number '" + cell + "' in row " + std::to_string(row + 1));
      }
    }
    ++row;
  }
  if (row != m.size()) throw ValidationError("GED CSV: expected " + std::to_string(m.size()) + " rows");
  return m;
}

namespace {

constexpr char kCacheMagic[8] = {'S', 'G', 'C', 'E', 'G', 'E', 'D', '1'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
bool get(std::istream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

void write_ged_cache(const std::filesystem::path& file, const GedMatrix& m, std::uint64_t key) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + file.string());
  out.write(kCacheMagic, sizeof kCacheMagic);
  put(out, key);
  put(out, static_cast<std::uint64_t>(m.size()));
  for (const auto& id : m.ids()) {
    put(out, static_cast<std::uint64_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const auto v = m.at(i, j);
      put(out, static_cast<std::uint8_t>(v.has_value()));
      put(out, v.value_or(0.0));
    }
  }
}

std::optional<GedMatrix> read_ged_cache(const std::filesystem::path& file, std::uint64_t key) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint64_t stored_key = 0, n = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCacheMagic, sizeof magic) != 0) return std::nullopt;
  if (!get(in, stored_key) || stored_key != key || !get(in, n)) return std::nullopt;
  std::vector<std::string> ids(n);
  for (auto& id : ids) {
    std::uint64_t len = 0;
    if (!get(in, len) || len > (1U << 20)) return std::nullopt;
    id.resize(len);
    if (!in.read(id.data(), static_cast<std::streamsize>(len))) return std::nullopt;
  }
  GedMatrix m(std::move(ids));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::uint8_t present = 0;
      double v = 0.0;
      if (!get(in, present) || !get(in, v)) return std::nullopt;
      if (present) m.set(i, j, v);
    }
  }
  return m;
}

}  // namespace sgce
