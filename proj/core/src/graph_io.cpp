#include <sstream>

#include "ugk/csv.hpp"
#include "ugk/graph.hpp"

namespace ugk {

std::string serialize_graph(const HeteroGraph& graph, std::string_view config_hash) {
  graph.validate();
  const bool with_weights = graph.has_weights() || graph.has_attributes();
  const bool with_attrs = graph.has_attributes();
  std::string out = "# ugk-graph num_nodes=" + std::to_string(graph.num_nodes) +
                    " hour=" + std::to_string(graph.hour_index) + " config=" + std::string(config_hash) + "\n";
  for (RelationKind r : kAllRelations) {
    const std::size_t ri = relation_index(r);
    const EdgeList& list = graph.relation(r);
    for (std::size_t e = 0; e < list.size(); ++e) {
      out += std::to_string(ri);
      out += ',';
      out += std::to_string(list[e].src);
      out += ',';
      out += std::to_string(list[e].dst);
      if (with_weights) {
        out += ',';
        out += format_double(graph.weights[ri].empty() ? 1.0 : graph.weights[ri][e]);
      }
      if (with_attrs) {
        for (double a : graph.attributes[ri][e]) {
          out += ',';
          out += format_double(a);
        }
      }
      out += '\n';
    }
  }
  return out;
}

GraphFile parse_graph(std::string_view text) {
  GraphFile file;
  std::array<EdgeList, kNumRelations> lists;
  std::array<std::vector<double>, kNumRelations> weights;
  std::array<std::vector<EdgeAttributes>, kNumRelations> attrs;
  bool header = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (!header) {
      constexpr std::string_view kPrefix = "# ugk-graph ";
      if (view.substr(0, kPrefix.size()) != kPrefix) throw Error(ErrorCode::Format, "missing graph header");
      std::istringstream hs{std::string(view.substr(kPrefix.size()))};
      std::string token;
      while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Format, "bad header token " + token);
        const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
        if (key == "num_nodes") file.graph.num_nodes = static_cast<std::size_t>(parse_int(value));
        else if (key == "hour") file.graph.hour_index = static_cast<int>(parse_int(value));
        else if (key == "config") file.config_hash = value;
      }
      header = true;
      continue;
    }
    auto fields = split_fields(view);
    if (fields.size() != 3 && fields.size() != 4 && fields.size() != 9) {
      throw Error(ErrorCode::Format, "graph line has " + std::to_string(fields.size()) + " fields");
    }
    const auto ri = static_cast<std::size_t>(parse_int(fields[0]));
    if (ri >= kNumRelations) throw Error(ErrorCode::Format, "relation id out of range");
    lists[ri].push_back({static_cast<std::uint32_t>(parse_int(fields[1])),
                         static_cast<std::uint32_t>(parse_int(fields[2]))});
    if (fields.size() >= 4) weights[ri].push_back(parse_double(fields[3]));
    if (fields.size() == 9) {
      EdgeAttributes a{};
      for (std::size_t k = 0; k < 5; ++k) a[k] = parse_double(fields[4 + k]);
      attrs[ri].push_back(a);
    }
  }
  if (!header) throw Error(ErrorCode::Format, "empty graph file");
  for (std::size_t ri = 0; ri < kNumRelations; ++ri) {
    file.graph.edges[ri] = std::make_shared<const EdgeList>(std::move(lists[ri]));
    file.graph.weights[ri] = std::move(weights[ri]);
    file.graph.attributes[ri] = std::move(attrs[ri]);
  }
  file.graph.validate();
  return file;
}

void write_graph_file(const std::filesystem::path& path, const HeteroGraph& graph, std::string_view config_hash) {
  write_text_file(path, serialize_graph(graph, config_hash));
}

GraphFile read_graph_file(const std::filesystem::path& path) { return parse_graph(read_text_file(path)); }

}  // namespace ugk
