#include "treeg/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace treeg {

namespace {

std::runtime_error parse_error(const std::string& path, std::size_t line, const std::string& msg) {
  return std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // Trailing blank lines are common and harmless.
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) {
    lines.pop_back();
  }
  return lines;
}

long parse_int(const std::string& path, std::size_t line_no, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    while (used < text.size() && (text[used] == ' ' || text[used] == '\t')) ++used;
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw parse_error(path, line_no, "expected an integer, got '" + text + "'");
  }
}

double parse_double(const std::string& path, std::size_t line_no, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    while (used < text.size() && (text[used] == ' ' || text[used] == '\t')) ++used;
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw parse_error(path, line_no, "expected a number, got '" + text + "'");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  for (std::string& p : parts) {
    const std::size_t a = p.find_first_not_of(" \t");
    const std::size_t b = p.find_last_not_of(" \t");
    p = a == std::string::npos ? "" : p.substr(a, b - a + 1);
  }
  return parts;
}

}  // namespace

GraphDataset load_tudataset(const std::string& dir, const std::string& name) {
  const std::string prefix = dir + "/" + name + "/" + name + "_";
  const std::string indicator_path = prefix + "graph_indicator.txt";
  const std::string adjacency_path = prefix + "A.txt";
  const std::string graph_labels_path = prefix + "graph_labels.txt";
  const std::string node_labels_path = prefix + "node_labels.txt";
  const std::string node_attrs_path = prefix + "node_attributes.txt";
  const std::string graph_attrs_path = prefix + "graph_attributes.txt";

  // graph_indicator: one 1-based graph id per vertex, in global vertex order.
  const std::vector<std::string> indicator = read_lines(indicator_path);
  const auto total_vertices = static_cast<long>(indicator.size());
  if (total_vertices == 0) throw parse_error(indicator_path, 1, "no vertices");
  std::vector<int> vertex_graph(static_cast<std::size_t>(total_vertices));
  int n_graphs = 0;
  for (std::size_t i = 0; i < indicator.size(); ++i) {
    const long gid = parse_int(indicator_path, i + 1, indicator[i]);
    if (gid < 1) throw parse_error(indicator_path, i + 1, "graph ids are 1-based");
    vertex_graph[i] = static_cast<int>(gid - 1);
    n_graphs = std::max(n_graphs, static_cast<int>(gid));
  }
  std::vector<int> graph_size(static_cast<std::size_t>(n_graphs), 0);
  std::vector<int> local_index(static_cast<std::size_t>(total_vertices));
  for (std::size_t i = 0; i < vertex_graph.size(); ++i) {
    local_index[i] = graph_size[static_cast<std::size_t>(vertex_graph[i])]++;
  }
  for (int gi = 0; gi < n_graphs; ++gi) {
    if (graph_size[static_cast<std::size_t>(gi)] == 0) {
      throw parse_error(indicator_path, indicator.size(),
                        "graph id " + std::to_string(gi + 1) + " has no vertices");
    }
  }

  // Features: one-hot node labels first, then attribute columns.
  std::vector<int> node_label_ids;
  std::vector<int> node_label_values;
  if (file_exists(node_labels_path)) {
    const std::vector<std::string> lines = read_lines(node_labels_path);
    if (static_cast<long>(lines.size()) != total_vertices) {
      throw parse_error(node_labels_path, lines.size(), "node label count != vertex count");
    }
    std::vector<int> raw(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      raw[i] = static_cast<int>(parse_int(node_labels_path, i + 1, lines[i]));
    }
    node_label_values = raw;
    std::sort(node_label_values.begin(), node_label_values.end());
    node_label_values.erase(std::unique(node_label_values.begin(), node_label_values.end()),
                            node_label_values.end());
    node_label_ids.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      node_label_ids[i] = static_cast<int>(
          std::lower_bound(node_label_values.begin(), node_label_values.end(), raw[i]) -
          node_label_values.begin());
    }
  }
  std::vector<std::vector<double>> attrs;
  int attr_dims = 0;
  if (file_exists(node_attrs_path)) {
    const std::vector<std::string> lines = read_lines(node_attrs_path);
    if (static_cast<long>(lines.size()) != total_vertices) {
      throw parse_error(node_attrs_path, lines.size(), "attribute row count != vertex count");
    }
    attrs.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::vector<std::string> parts = split_csv(lines[i]);
      std::vector<double> row;
      row.reserve(parts.size());
      for (const std::string& p : parts) row.push_back(parse_double(node_attrs_path, i + 1, p));
      if (attr_dims == 0) attr_dims = static_cast<int>(row.size());
      if (static_cast<int>(row.size()) != attr_dims) {
        throw parse_error(node_attrs_path, i + 1, "ragged attribute row");
      }
      attrs.push_back(std::move(row));
    }
  }

  const int one_hot = static_cast<int>(node_label_values.size());
  const int n_feat = std::max(one_hot + attr_dims, 0);

  GraphDataset ds;
  ds.name = name;
  ds.one_hot_dims = one_hot;
  ds.attribute_dims = attr_dims;
  ds.graphs.resize(static_cast<std::size_t>(n_graphs));
  for (int gi = 0; gi < n_graphs; ++gi) {
    Graph& g = ds.graphs[static_cast<std::size_t>(gi)];
    g.n = graph_size[static_cast<std::size_t>(gi)];
    g.adj = Eigen::MatrixXd::Zero(g.n, g.n);
    g.features = Eigen::MatrixXd::Zero(g.n, n_feat);
    g.directed = false;
  }
  for (std::size_t i = 0; i < vertex_graph.size(); ++i) {
    Graph& g = ds.graphs[static_cast<std::size_t>(vertex_graph[i])];
    const int li = local_index[i];
    if (!node_label_ids.empty()) g.features(li, node_label_ids[i]) = 1.0;
    for (int a = 0; a < attr_dims; ++a) g.features(li, one_hot + a) = attrs[i][static_cast<std::size_t>(a)];
  }

  // Edges: both directions are usually listed; either way the adjacency is
  // made symmetric and duplicates collapse.
  const std::vector<std::string> arcs = read_lines(adjacency_path);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::vector<std::string> parts = split_csv(arcs[i]);
    if (parts.size() != 2) throw parse_error(adjacency_path, i + 1, "expected 'u, v'");
    const long a = parse_int(adjacency_path, i + 1, parts[0]);
    const long b = parse_int(adjacency_path, i + 1, parts[1]);
    if (a < 1 || a > total_vertices || b < 1 || b > total_vertices) {
      throw parse_error(adjacency_path, i + 1, "vertex index out of range");
    }
    const std::size_t ua = static_cast<std::size_t>(a - 1), ub = static_cast<std::size_t>(b - 1);
    if (vertex_graph[ua] != vertex_graph[ub]) {
      throw parse_error(adjacency_path, i + 1, "edge joins two different graphs");
    }
    Graph& g = ds.graphs[static_cast<std::size_t>(vertex_graph[ua])];
    g.adj(local_index[ub], local_index[ua]) = 1.0;
    g.adj(local_index[ua], local_index[ub]) = 1.0;
  }

  // Graph labels remapped to 0..C-1 by sorted original value.
  const std::vector<std::string> label_lines = read_lines(graph_labels_path);
  if (static_cast<int>(label_lines.size()) != n_graphs) {
    throw parse_error(graph_labels_path, label_lines.size(), "label count != graph count");
  }
  std::vector<int> raw_labels(label_lines.size());
  for (std::size_t i = 0; i < label_lines.size(); ++i) {
    raw_labels[i] = static_cast<int>(parse_int(graph_labels_path, i + 1, label_lines[i]));
  }
  ds.label_values = raw_labels;
  std::sort(ds.label_values.begin(), ds.label_values.end());
  ds.label_values.erase(std::unique(ds.label_values.begin(), ds.label_values.end()),
                        ds.label_values.end());
  ds.n_classes = static_cast<int>(ds.label_values.size());
  ds.labels.resize(raw_labels.size());
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    ds.labels[i] = static_cast<int>(
        std::lower_bound(ds.label_values.begin(), ds.label_values.end(), raw_labels[i]) -
        ds.label_values.begin());
  }

  if (file_exists(graph_attrs_path)) {
    const std::vector<std::string> lines = read_lines(graph_attrs_path);
    if (static_cast<int>(lines.size()) != n_graphs) {
      throw parse_error(graph_attrs_path, lines.size(), "target count != graph count");
    }
    ds.targets.resize(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      ds.targets[i] = parse_double(graph_attrs_path, i + 1, lines[i]);
    }
  }

  if (!node_label_ids.empty()) {
    ds.vertex_labels.resize(static_cast<std::size_t>(n_graphs));
    for (int gi = 0; gi < n_graphs; ++gi) {
      ds.vertex_labels[static_cast<std::size_t>(gi)].resize(
          static_cast<std::size_t>(graph_size[static_cast<std::size_t>(gi)]));
    }
    for (std::size_t i = 0; i < vertex_graph.size(); ++i) {
      ds.vertex_labels[static_cast<std::size_t>(vertex_graph[i])]
                      [static_cast<std::size_t>(local_index[i])] = node_label_ids[i];
    }
  }
  for (Graph& g : ds.graphs) g.validate();
  return ds;
}

void save_tudataset(const GraphDataset& ds, const std::string& dir, const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(dir) / name;
  fs::create_directories(base);
  const std::string prefix = (base / (name + "_")).string();

  std::ofstream fa(prefix + "A.txt");
  std::ofstream fi(prefix + "graph_indicator.txt");
  std::ofstream fg(prefix + "graph_labels.txt");
  if (!fa || !fi || !fg) throw std::runtime_error("cannot write dataset files under " + dir);

  const bool write_node_labels = ds.one_hot_dims > 0;
  std::ofstream fn;
  if (write_node_labels) fn.open(prefix + "node_labels.txt");
  const int attr_cols = ds.num_features() - ds.one_hot_dims;
  std::ofstream fattr;
  if (attr_cols > 0) fattr.open(prefix + "node_attributes.txt");

  char buf[64];
  long offset = 0;
  for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
    const Graph& g = ds.graphs[gi];
    for (int v = 0; v < g.n; ++v) {
      fi << (gi + 1) << "\n";
      if (write_node_labels) {
        int label_col = 0;
        for (int c = 0; c < ds.one_hot_dims; ++c) {
          if (g.features(v, c) == 1.0) label_col = c;
        }
        fn << label_col << "\n";
      }
      if (attr_cols > 0) {
        for (int a = 0; a < attr_cols; ++a) {
          std::snprintf(buf, sizeof(buf), "%.17g", g.features(v, ds.one_hot_dims + a));
          fattr << (a ? ", " : "") << buf;
        }
        fattr << "\n";
      }
      for (int u = 0; u < g.n; ++u) {
        if (g.adj(u, v) != 0.0) fa << (offset + v + 1) << ", " << (offset + u + 1) << "\n";
      }
    }
    const int label = ds.labels.empty() ? 0 : ds.labels[gi];
    fg << (static_cast<std::size_t>(label) < ds.label_values.size() ? ds.label_values[label]
                                                                    : label)
       << "\n";
    offset += g.n;
  }
  if (!ds.targets.empty()) {
    std::ofstream ft(prefix + "graph_attributes.txt");
    for (double t : ds.targets) {
      std::snprintf(buf, sizeof(buf), "%.17g", t);
      ft << buf << "\n";
    }
  }
}

GraphDataset add_constant_feature(GraphDataset ds) {
  for (Graph& g : ds.graphs) {
    Eigen::MatrixXd extended(g.n, g.features.cols() + 1);
    extended << g.features, Eigen::VectorXd::Ones(g.n);
    g.features = std::move(extended);
  }
  ds.has_constant = true;
  return ds;
}

std::pair<Graph, std::vector<std::pair<int, int>>> line_graph(const Graph& g) {
  if (g.directed) throw std::invalid_argument("line graph requires an undirected graph");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i; j < g.n; ++j) {
      if (g.adj(j, i) != 0.0) edges.emplace_back(i, j);
    }
  }
  Graph lg;
  lg.n = static_cast<int>(edges.size());
  lg.adj = Eigen::MatrixXd::Zero(lg.n, lg.n);
  lg.features = Eigen::MatrixXd::Ones(lg.n, 1);
  lg.directed = false;
  for (int a = 0; a < lg.n; ++a) {
    for (int b = a + 1; b < lg.n; ++b) {
      const auto& [i1, j1] = edges[static_cast<std::size_t>(a)];
      const auto& [i2, j2] = edges[static_cast<std::size_t>(b)];
      if (i1 == i2 || i1 == j2 || j1 == i2 || j1 == j2) {
        lg.adj(a, b) = lg.adj(b, a) = 1.0;
      }
    }
  }
  return {std::move(lg), std::move(edges)};
}

}  // namespace treeg
