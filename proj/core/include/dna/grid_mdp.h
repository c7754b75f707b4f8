// Copyright 2026 The DNA Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DNA_GRID_MDP_H_
#define DNA_GRID_MDP_H_

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "dna/error.h"
#include "dna/tabular_mdp.h"

namespace dna {

// A lattice point. For the two dimensional maps coords are (y, x) with y
// growing downwards.
struct GridState {
  std::vector<int> coords;

  GridState() = default;
  GridState(std::initializer_list<int> c) : coords(c) {}
  explicit GridState(std::vector<int> c) : coords(std::move(c)) {}

  int dims() const { return static_cast<int>(coords.size()); }
  int operator[](int k) const { return coords[k]; }

  friend auto operator<=>(const GridState&, const GridState&) = default;
  friend bool operator==(const GridState&, const GridState&) = default;
};

int ManhattanDistance(const GridState& a, const GridState& b);

std::string ToString(const GridState& s);

// Rectangular box of lattice points with row-major state ids.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<int> extents);

  int dims() const { return static_cast<int>(extents_.size()); }
  int extent(int k) const { return extents_[k]; }
  const std::vector<int>& extents() const { return extents_; }
  int num_states() const { return num_states_; }

  bool Contains(const GridState& s) const;
  StateId Id(const GridState& s) const;
  GridState State(StateId id) const;

  // In-bounds states at Manhattan distance exactly one.
  std::vector<GridState> Neighbors(const GridState& s) const;

 private:
  std::vector<int> extents_;
  std::vector<int> strides_;
  int num_states_ = 0;
};

// Moves along one axis. Ids are dimension-major with the negative direction
// first, so on a (y, x) grid: 0 = N (y-1), 1 = S (y+1), 2 = W (x-1),
// 3 = E (x+1).
struct Action {
  ActionId id = 0;

  int dim() const { return id / 2; }
  int sign() const { return id % 2 == 0 ? -1 : 1; }

  friend bool operator==(const Action&, const Action&) = default;
};

inline constexpr ActionId kNorth = 0;
inline constexpr ActionId kSouth = 1;
inline constexpr ActionId kWest = 2;
inline constexpr ActionId kEast = 3;

int NumActions(int dims);
const char* ActionName(ActionId a, int dims);

enum class Tile : char {
  kStart = 'S',
  kFrozen = 'F',
  kHole = 'H',
  kGoal = 'G',
};

// Parameters that accompany a map file.
struct MdpConfig {
  double gamma = 0.95;
  double slip_intended = 0.9;
  double slip_lateral = 0.05;
  double goal_reward = 1.0;
  int cell_d = 2;
  int cell_spacing = 1;  // d - 1 for the default d

  void Validate() const;
};

enum class MapParseErrorKind {
  kEmpty,
  kRaggedRow,
  kUnknownCharacter,
  kNoStart,
  kMultipleStarts,
  kNoGoal,
};

const char* MapParseErrorKindName(MapParseErrorKind kind);

class MapParseError : public Error {
 public:
  MapParseError(MapParseErrorKind kind, int row, int column,
                const std::string& detail);

  MapParseErrorKind kind() const { return kind_; }
  int row() const { return row_; }
  int column() const { return column_; }

 private:
  MapParseErrorKind kind_;
  int row_;
  int column_;
};

// Stochastic grid world with absorbing holes and goals. Immutable once built;
// the lowered TabularMdp is computed in the constructor.
class GridMdp {
 public:
  GridMdp(Grid grid, std::vector<Tile> tiles, MdpConfig config);

  const Grid& grid() const { return grid_; }
  const MdpConfig& config() const { return config_; }
  const TabularMdp& tabular() const { return tabular_; }
  double gamma() const { return config_.gamma; }
  int num_states() const { return grid_.num_states(); }
  int num_actions() const { return NumActions(grid_.dims()); }

  Tile tile(StateId s) const { return tiles_[s]; }
  const std::vector<Tile>& tiles() const { return tiles_; }
  StateId start() const { return start_; }
  bool IsAbsorbing(StateId s) const;

  std::vector<GridState> Neighbors(const GridState& s) const;
  TransitionRow TransitionDistribution(const GridState& s, Action a) const;
  double Reward(const GridState& s, Action a) const;

  // Map text in the S/F/H/G alphabet (2-D grids only).
  std::string ToMapText() const;

 private:
  TransitionRow ComputeRow(StateId s, Action a) const;
  double ComputeReward(StateId s) const;

  Grid grid_;
  std::vector<Tile> tiles_;
  MdpConfig config_;
  StateId start_ = 0;
  TabularMdp tabular_;
};

// Parses rows of S/F/H/G. Blank trailing lines and trailing whitespace are
// ignored; CRLF line endings are accepted.
GridMdp LoadGridMap(std::string_view text, const MdpConfig& config = {});

}  // namespace dna

#endif  // DNA_GRID_MDP_H_
