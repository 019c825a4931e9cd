#include "lipaging/topology.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <string>

#include "lipaging/errors.hpp"

namespace lipaging {

const std::array<HexCoord, 6>& HexCoord::directions() {
  // E, NE, NW, W, SW, SE with r growing downwards.
  static const std::array<HexCoord, 6> kDirections = {
      HexCoord{1, 0},  HexCoord{1, -1}, HexCoord{0, -1},
      HexCoord{-1, 0}, HexCoord{-1, 1}, HexCoord{0, 1}};
  return kDirections;
}

int HexCoord::ring() const {
  return (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2;
}

namespace {

std::string edge_name(CellId a, CellId b) {
  return std::to_string(a) + "-" + std::to_string(b);
}

void validate_adjacency(const std::vector<std::vector<CellId>>& adjacency) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw ValidationError("graph has no cells");

  for (CellId i = 0; i < n; ++i) {
    const auto& adj = adjacency[i];
    for (std::size_t k = 0; k < adj.size(); ++k) {
      const CellId j = adj[k];
      if (j >= n) {
        throw ValidationError("edge " + edge_name(i, j) +
                              " references a cell outside 0.." +
                              std::to_string(n - 1));
      }
      if (j == i) throw ValidationError("self-loop at cell " + std::to_string(i));
      if (k > 0 && adj[k - 1] >= j) {
        throw ValidationError("neighbor list of cell " + std::to_string(i) +
                              " is unsorted or repeats edge " +
                              edge_name(i, j));
      }
      if (!std::binary_search(adjacency[j].begin(), adjacency[j].end(), i)) {
        throw ValidationError("asymmetric edge " + edge_name(i, j) + ": " +
                              std::to_string(j) + " does not list " +
                              std::to_string(i));
      }
    }
  }

  std::vector<bool> seen(n, false);
  std::queue<CellId> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const CellId c = frontier.front();
    frontier.pop();
    for (CellId j : adjacency[c]) {
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        frontier.push(j);
      }
    }
  }
  if (reached != n) {
    std::string missing;
    std::size_t listed = 0;
    for (CellId i = 0; i < n && listed < 8; ++i) {
      if (!seen[i]) {
        missing += (listed++ ? ", " : "") + std::to_string(i);
      }
    }
    if (n - reached > listed) missing += ", ...";
    throw ValidationError("graph is disconnected: cells {" + missing +
                          "} are unreachable from cell 0");
  }
}

}  // namespace

CellGraph::CellGraph(std::vector<std::vector<CellId>> adjacency,
                     std::vector<HexCoord> coords)
    : adjacency_(std::move(adjacency)), coords_(std::move(coords)) {
  validate_adjacency(adjacency_);
  if (!coords_.empty() && coords_.size() != adjacency_.size()) {
    throw ValidationError("coordinate count " + std::to_string(coords_.size()) +
                          " does not match cell count " +
                          std::to_string(adjacency_.size()));
  }
}

std::span<const CellId> CellGraph::neighbors(CellId cell) const {
  if (cell >= size()) {
    throw InvalidArgument("cell " + std::to_string(cell) + " out of range");
  }
  return adjacency_[cell];
}

std::size_t CellGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

const HexCoord& CellGraph::coord(CellId cell) const {
  if (!has_coords()) throw InvalidArgument("graph carries no coordinates");
  if (cell >= size()) {
    throw InvalidArgument("cell " + std::to_string(cell) + " out of range");
  }
  return coords_[cell];
}

CellGraph build_hex_patch(std::size_t n) {
  if (n == 0) throw InvalidArgument("hex patch needs at least one cell");

  const auto& dirs = HexCoord::directions();
  std::vector<HexCoord> coords;
  coords.reserve(n);
  coords.push_back({0, 0});
  for (int k = 1; coords.size() < n; ++k) {
    HexCoord cell = dirs[0] * k;
    for (int side = 0; side < 6 && coords.size() < n; ++side) {
      for (int step = 0; step < k && coords.size() < n; ++step) {
        coords.push_back(cell);
        cell = cell + dirs[(side + 2) % 6];
      }
    }
  }

  std::map<HexCoord, CellId> index;
  for (CellId i = 0; i < n; ++i) index.emplace(coords[i], i);

  std::vector<std::vector<CellId>> adjacency(n);
  for (CellId i = 0; i < n; ++i) {
    for (const auto& d : dirs) {
      if (auto it = index.find(coords[i] + d); it != index.end()) {
        adjacency[i].push_back(it->second);
      }
    }
    std::sort(adjacency[i].begin(), adjacency[i].end());
  }
  return CellGraph(std::move(adjacency), std::move(coords));
}

CellGraph load_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<std::vector<CellId>> adjacency;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::istringstream fields(line);
    if (!have_header) {
      std::string header;
      fields >> header;
      if (header.rfind("n=", 0) != 0) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": expected header `n=<count>`");
      }
      char* end = nullptr;
      const auto value = std::strtoull(header.c_str() + 2, &end, 10);
      if (*end != '\0' || header.size() == 2) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": malformed cell count `" + header + "`");
      }
      n = static_cast<std::size_t>(value);
      adjacency.assign(n, {});
      have_header = true;
      continue;
    }

    long long a = -1;
    long long b = -1;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": expected `i j` edge, got `" + line + "`");
    }
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n ||
        static_cast<std::size_t>(b) >= n) {
      throw ValidationError("edge " + std::to_string(a) + "-" +
                            std::to_string(b) + " on line " +
                            std::to_string(line_no) +
                            " references a cell outside 0.." +
                            std::to_string(n == 0 ? 0 : n - 1));
    }
    const auto i = static_cast<CellId>(a);
    const auto j = static_cast<CellId>(b);
    if (i == j) {
      throw ValidationError("self-loop " + edge_name(i, j) + " on line " +
                            std::to_string(line_no));
    }
    if (std::find(adjacency[i].begin(), adjacency[i].end(), j) !=
        adjacency[i].end()) {
      throw ValidationError("duplicate edge " + edge_name(i, j) + " on line " +
                            std::to_string(line_no));
    }
    adjacency[i].push_back(j);
    adjacency[j].push_back(i);
  }
  if (!have_header) throw ValidationError("missing `n=<count>` header");

  for (auto& adj : adjacency) std::sort(adj.begin(), adj.end());
  return CellGraph(std::move(adjacency));
}

CellGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path.string());
  return load_graph(in);
}

void write_graph(std::ostream& out, const CellGraph& graph) {
  out << "n=" << graph.size() << '\n';
  for (CellId i = 0; i < graph.size(); ++i) {
    for (CellId j : graph.neighbors(i)) {
      if (i < j) out << i << ' ' << j << '\n';
    }
  }
}

}  // namespace lipaging
