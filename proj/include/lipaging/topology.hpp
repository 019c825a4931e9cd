#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace lipaging {

using CellId = std::size_t;

/**
 * Axial hexagonal coordinate.  The six lattice directions are enumerated
 * counterclockwise starting from +q.
 */
struct HexCoord {
  int q = 0;
  int r = 0;

  static const std::array<HexCoord, 6>& directions();

  HexCoord operator+(const HexCoord& o) const { return {q + o.q, r + o.r}; }
  HexCoord operator*(int k) const { return {q * k, r * k}; }
  auto operator<=>(const HexCoord&) const = default;

  /// Lattice distance from the origin.
  int ring() const;
};

/**
 * Undirected, connected cell adjacency graph.  Immutable after construction;
 * the constructor rejects self-loops, duplicate or asymmetric adjacency and
 * disconnected inputs with a ValidationError.
 */
class CellGraph {
 public:
  /// `coords` may be empty when the graph has no planar embedding.
  CellGraph(std::vector<std::vector<CellId>> adjacency,
            std::vector<HexCoord> coords = {});

  std::size_t size() const { return adjacency_.size(); }
  std::span<const CellId> neighbors(CellId cell) const;
  std::size_t degree(CellId cell) const { return neighbors(cell).size(); }
  std::size_t edge_count() const;

  bool has_coords() const { return !coords_.empty(); }
  const HexCoord& coord(CellId cell) const;

  bool operator==(const CellGraph&) const = default;

 private:
  std::vector<std::vector<CellId>> adjacency_;
  std::vector<HexCoord> coords_;
};

/**
 * Grows a patch of `n` hexagonal cells around a center cell (cell 0), ring by
 * ring.  Inside ring k the sweep starts at k steps along +q and walks
 * counterclockwise.  Adjacency is the lattice adjacency restricted to the
 * patch.
 */
CellGraph build_hex_patch(std::size_t n);

/// Reads the edge-list format: a `n=<count>` header, then one `i j` per line.
CellGraph load_graph(std::istream& in);
CellGraph load_graph(const std::filesystem::path& path);

/// Writes the edge-list format with edges as `i j`, i < j, in sorted order.
void write_graph(std::ostream& out, const CellGraph& graph);

}  // namespace lipaging
