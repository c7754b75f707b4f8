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

#include "dna/grid_mdp.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace dna {

int ManhattanDistance(const GridState& a, const GridState& b) {
  int d = 0;
  for (int k = 0; k < a.dims(); ++k) d += std::abs(a[k] - b[k]);
  return d;
}

std::string ToString(const GridState& s) {
  std::string out = "(";
  for (int k = 0; k < s.dims(); ++k) {
    if (k > 0) out += ",";
    out += std::to_string(s[k]);
  }
  return out + ")";
}

Grid::Grid(std::vector<int> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least one axis");
  }
  strides_.assign(extents_.size(), 1);
  num_states_ = 1;
  for (int k = dims() - 1; k >= 0; --k) {
    if (extents_[k] <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "grid extents must be positive");
    }
    strides_[k] = num_states_;
    num_states_ *= extents_[k];
  }
}

bool Grid::Contains(const GridState& s) const {
  if (s.dims() != dims()) return false;
  for (int k = 0; k < dims(); ++k) {
    if (s[k] < 0 || s[k] >= extents_[k]) return false;
  }
  return true;
}

StateId Grid::Id(const GridState& s) const {
  if (!Contains(s)) {
    throw Error(ErrorCode::kOutOfBounds, "state " + ToString(s) + " off grid");
  }
  StateId id = 0;
  for (int k = 0; k < dims(); ++k) id += s[k] * strides_[k];
  return id;
}

GridState Grid::State(StateId id) const {
  if (id < 0 || id >= num_states_) {
    throw Error(ErrorCode::kOutOfBounds, "state id out of range");
  }
  std::vector<int> c(extents_.size());
  for (int k = 0; k < dims(); ++k) {
    c[k] = id / strides_[k];
    id %= strides_[k];
  }
  return GridState(std::move(c));
}

std::vector<GridState> Grid::Neighbors(const GridState& s) const {
  if (!Contains(s)) {
    throw Error(ErrorCode::kOutOfBounds, "state " + ToString(s) + " off grid");
  }
  std::vector<GridState> out;
  for (int k = 0; k < dims(); ++k) {
    for (int sign : {-1, 1}) {
      GridState n = s;
      n.coords[k] += sign;
      if (Contains(n)) out.push_back(std::move(n));
    }
  }
  return out;
}

int NumActions(int dims) { return 2 * dims; }

const char* ActionName(ActionId a, int dims) {
  if (dims == 2) {
    static const char* kNames[] = {"N", "S", "W", "E"};
    if (a >= 0 && a < 4) return kNames[a];
  }
  return Action{a}.sign() < 0 ? "-" : "+";
}

void MdpConfig::Validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [0, 1)");
  }
  if (!(slip_intended >= 0.0 && slip_intended <= 1.0) ||
      !(slip_lateral >= 0.0 && slip_lateral <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "slip probabilities must lie in [0, 1]");
  }
  if (std::abs(slip_intended + 2.0 * slip_lateral - 1.0) > kRowSumTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "slip_intended + 2 * slip_lateral must equal 1");
  }
  if (!(goal_reward >= 0.0) || !std::isfinite(goal_reward)) {
    throw Error(ErrorCode::kInvalidArgument, "goal reward must be >= 0");
  }
  if (cell_d < 1) {
    throw Error(ErrorCode::kInvalidArgument, "cell_d must be >= 1");
  }
  if (cell_spacing < 1) {
    throw Error(ErrorCode::kInvalidArgument, "cell_spacing must be >= 1");
  }
}

const char* MapParseErrorKindName(MapParseErrorKind kind) {
  switch (kind) {
    case MapParseErrorKind::kEmpty:
      return "EmptyMap";
    case MapParseErrorKind::kRaggedRow:
      return "RaggedRow";
    case MapParseErrorKind::kUnknownCharacter:
      return "UnknownCharacter";
    case MapParseErrorKind::kNoStart:
      return "NoStart";
    case MapParseErrorKind::kMultipleStarts:
      return "MultipleStarts";
    case MapParseErrorKind::kNoGoal:
      return "NoGoal";
  }
  return "Unknown";
}

MapParseError::MapParseError(MapParseErrorKind kind, int row, int column,
                             const std::string& detail)
    : Error(ErrorCode::kMapParse,
            std::string(MapParseErrorKindName(kind)) + " at row " +
                std::to_string(row) + ", column " + std::to_string(column) +
                ": " + detail),
      kind_(kind),
      row_(row),
      column_(column) {}

GridMdp::GridMdp(Grid grid, std::vector<Tile> tiles, MdpConfig config)
    : grid_(std::move(grid)), tiles_(std::move(tiles)), config_(config) {
  config_.Validate();
  if (static_cast<int>(tiles_.size()) != grid_.num_states()) {
    throw Error(ErrorCode::kSizeMismatch, "tile count does not match grid");
  }
  start_ = -1;
  for (StateId s = 0; s < grid_.num_states(); ++s) {
    if (tiles_[s] == Tile::kStart) {
      if (start_ >= 0) {
        throw Error(ErrorCode::kInvalidArgument, "more than one start tile");
      }
      start_ = s;
    }
  }
  if (start_ < 0) {
    throw Error(ErrorCode::kInvalidArgument, "no start tile");
  }
  TabularMdp::Builder builder(grid_.num_states(), num_actions(),
                              config_.gamma);
  for (StateId s = 0; s < grid_.num_states(); ++s) {
    const double r = ComputeReward(s);
    for (ActionId a = 0; a < num_actions(); ++a) {
      builder.Set(s, a, ComputeRow(s, Action{a}), r);
    }
  }
  tabular_ = std::move(builder).Build();
}

bool GridMdp::IsAbsorbing(StateId s) const {
  return tiles_[s] == Tile::kHole || tiles_[s] == Tile::kGoal;
}

std::vector<GridState> GridMdp::Neighbors(const GridState& s) const {
  return grid_.Neighbors(s);
}

TransitionRow GridMdp::TransitionDistribution(const GridState& s,
                                              Action a) const {
  const StateId id = grid_.Id(s);
  if (a.id < 0 || a.id >= num_actions()) {
    throw Error(ErrorCode::kOutOfBounds, "action id out of range");
  }
  const auto row = tabular_.row(id, a.id);
  return TransitionRow(row.begin(), row.end());
}

double GridMdp::Reward(const GridState& s, Action a) const {
  const StateId id = grid_.Id(s);
  if (a.id < 0 || a.id >= num_actions()) {
    throw Error(ErrorCode::kOutOfBounds, "action id out of range");
  }
  return tabular_.reward(id, a.id);
}

TransitionRow GridMdp::ComputeRow(StateId s, Action a) const {
  if (IsAbsorbing(s)) return {{s, 1.0}};
  const GridState here = grid_.State(s);
  TransitionRow row;
  // Mass of a move that would leave the grid stays on s.
  auto add_move = [&](int dim, int sign, double p) {
    if (p == 0.0) return;
    GridState next = here;
    next.coords[dim] += sign;
    row.push_back({grid_.Contains(next) ? grid_.Id(next) : s, p});
  };
  add_move(a.dim(), a.sign(), config_.slip_intended);
  const int dims = grid_.dims();
  const double lateral_total = 2.0 * config_.slip_lateral;
  if (dims == 1) {
    if (lateral_total > 0.0) row.push_back({s, lateral_total});
  } else {
    const double each = lateral_total / (2.0 * (dims - 1));
    for (int k = 0; k < dims; ++k) {
      if (k == a.dim()) continue;
      add_move(k, -1, each);
      add_move(k, +1, each);
    }
  }
  return row;
}

double GridMdp::ComputeReward(StateId s) const {
  return tiles_[s] == Tile::kGoal ? config_.goal_reward : 0.0;
}

std::string GridMdp::ToMapText() const {
  if (grid_.dims() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "map text requires a 2-D grid");
  }
  std::string out;
  for (int y = 0; y < grid_.extent(0); ++y) {
    for (int x = 0; x < grid_.extent(1); ++x) {
      out += static_cast<char>(tiles_[grid_.Id({y, x})]);
    }
    out += '\n';
  }
  return out;
}

GridMdp LoadGridMap(std::string_view text, const MdpConfig& config) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() &&
           (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    rows.push_back(line);
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty() || rows.front().empty()) {
    throw MapParseError(MapParseErrorKind::kEmpty, 0, 0, "map has no tiles");
  }
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  std::vector<Tile> tiles;
  tiles.reserve(static_cast<std::size_t>(height) * width);
  int starts = 0;
  int goals = 0;
  for (int y = 0; y < height; ++y) {
    if (static_cast<int>(rows[y].size()) != width) {
      throw MapParseError(MapParseErrorKind::kRaggedRow, y,
                          static_cast<int>(rows[y].size()),
                          "expected " + std::to_string(width) +
                              " columns, found " +
                              std::to_string(rows[y].size()));
    }
    for (int x = 0; x < width; ++x) {
      const char c = rows[y][x];
      switch (c) {
        case 'S':
          if (++starts > 1) {
            throw MapParseError(MapParseErrorKind::kMultipleStarts, y, x,
                                "second 'S' tile");
          }
          tiles.push_back(Tile::kStart);
          break;
        case 'F':
          tiles.push_back(Tile::kFrozen);
          break;
        case 'H':
          tiles.push_back(Tile::kHole);
          break;
        case 'G':
          ++goals;
          tiles.push_back(Tile::kGoal);
          break;
        default:
          throw MapParseError(MapParseErrorKind::kUnknownCharacter, y, x,
                              std::string("unexpected character '") + c + "'");
      }
    }
  }
  if (starts == 0) {
    throw MapParseError(MapParseErrorKind::kNoStart, height, 0,
                        "no 'S' tile");
  }
  if (goals == 0) {
    throw MapParseError(MapParseErrorKind::kNoGoal, height, 0, "no 'G' tile");
  }
  return GridMdp(Grid({height, width}), std::move(tiles), config);
}

}  // namespace dna
