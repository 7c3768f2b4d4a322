// Copyright 2026 The afford Authors.
//
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

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "afford/error.h"
#include "afford/gamespec.h"

namespace afford {

namespace {

ObjectClassDef& mutable_class(GameSpec& spec, const std::string& id) {
  for (auto& c : spec.object_classes) {
    if (c.id == id) return c;
  }
  throw SemanticError("undeclared class '" + id + "' in variant table");
}

GameSpec apply_colorsize(GameSpec spec, const ModColorSize& mod) {
  const std::string& player = spec.player_class();
  for (const auto& e : mod.table) {
    if (e.cls == player) {
      throw NotApplicable("color/size substitution may not restyle the player class '" +
                          player + "'");
    }
    ObjectClassDef& def = mutable_class(spec, e.cls);
    def.color = e.color;
    def.size = e.size;
    def.scale_percent = e.scale_percent;
  }
  try {
    validate(spec);
  } catch (const SemanticError& err) {
    throw NotApplicable(std::string("color/size table breaks the game: ") + err.what());
  }
  return spec;
}

GameSpec apply_image(GameSpec spec, const ModImage& mod) {
  if (spec.renderer == Renderer::kFlatRect) {
    throw NotApplicable("image modification is not applicable: '" + spec.name +
                        "' draws flat rectangles");
  }
  for (const auto& e : mod.table) mutable_class(spec, e.cls).sprite = e.sprite;
  return spec;
}

GameSpec apply_position(GameSpec spec, const ModPosition& mod) {
  if (!spec.variants.position) {
    throw NotApplicable("position modification is not applicable: '" + spec.name +
                        "' declares no repositionable classes");
  }
  const PositionDecl& decl = *spec.variants.position;
  const double fraction = mod.fraction.value_or(decl.fraction);
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw SemanticError("position fraction outside [0, 1]");
  }
  auto movable = [&](const std::string& cls) {
    return std::find(decl.classes.begin(), decl.classes.end(), cls) !=
           decl.classes.end();
  };

  bool any = false;
  for (std::size_t li = 0; li < spec.levels.size(); ++li) {
    auto& placements = spec.levels[li].placements;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < placements.size(); ++i) {
      if (movable(placements[i].cls)) candidates.push_back(i);
    }
    if (candidates.empty()) continue;
    any = true;

    std::seed_seq seq{static_cast<std::uint32_t>(mod.seed),
                      static_cast<std::uint32_t>(mod.seed >> 32),
                      static_cast<std::uint32_t>(li)};
    std::mt19937_64 rng(seq);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const auto redraw = static_cast<std::size_t>(
        std::lround(fraction * static_cast<double>(candidates.size())));
    candidates.resize(redraw);
    std::sort(candidates.begin(), candidates.end());

    auto box_of = [&](const Placement& p) {
      return Box{p.position, spec.find_class(p.cls)->size};
    };
    for (std::size_t idx : candidates) {
      const Extent size = spec.find_class(placements[idx].cls)->size;
      std::vector<Cell> free_cells;
      const int y_lo = std::max(0, decl.row_min);
      const int y_hi = std::min(spec.grid_height - size.height, decl.row_max);
      for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = 0; x + size.width <= spec.grid_width; ++x) {
          const Box candidate{{x, y}, size};
          bool clear = true;
          for (const auto& other : placements) {
            if (candidate.overlaps(box_of(other))) {
              clear = false;
              break;
            }
          }
          if (clear) free_cells.push_back({x, y});
        }
      }
      if (free_cells.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
      placements[idx].position = free_cells[pick(rng)];
    }
  }
  if (!any) {
    throw NotApplicable("position modification is not applicable: '" + spec.name +
                        "' places none of the declared classes");
  }
  return spec;
}

}  // namespace

std::string_view to_string(VariantName name) {
  switch (name) {
    case VariantName::kBase: return "base";
    case VariantName::kModPosition: return "mod-position";
    case VariantName::kModColorSize: return "mod-colorsize";
    case VariantName::kModImage: return "mod-image";
  }
  return "base";
}

VariantName parse_variant_name(std::string_view text) {
  for (VariantName n : {VariantName::kBase, VariantName::kModPosition,
                        VariantName::kModColorSize, VariantName::kModImage}) {
    if (to_string(n) == text) return n;
  }
  throw SemanticError("unknown variant '" + std::string(text) +
                      "' (expected base, mod-position, mod-colorsize or mod-image)");
}

VariantName name_of(const VariantKind& kind) {
  return static_cast<VariantName>(kind.index());
}

GameSpec apply_variant(const GameSpec& spec, const VariantKind& kind) {
  return std::visit(
      [&](const auto& v) -> GameSpec {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BaseVariant>) {
          return spec;
        } else if constexpr (std::is_same_v<T, ModColorSize>) {
          return apply_colorsize(spec, v);
        } else if constexpr (std::is_same_v<T, ModImage>) {
          return apply_image(spec, v);
        } else {
          return apply_position(spec, v);
        }
      },
      kind);
}

VariantKind make_variant(const GameSpec& spec, VariantName name, std::uint64_t seed) {
  switch (name) {
    case VariantName::kBase:
      return BaseVariant{};
    case VariantName::kModPosition:
      return ModPosition{seed, std::nullopt};
    case VariantName::kModColorSize: {
      auto it = spec.variants.colorsize.find("default");
      if (it == spec.variants.colorsize.end()) {
        throw NotApplicable("'" + spec.name + "' ships no colorsize preset");
      }
      return ModColorSize{it->second};
    }
    case VariantName::kModImage: {
      if (spec.renderer == Renderer::kFlatRect) {
        throw NotApplicable("image modification is not applicable: '" + spec.name +
                            "' draws flat rectangles");
      }
      auto it = spec.variants.image.find("default");
      if (it == spec.variants.image.end()) {
        throw NotApplicable("'" + spec.name + "' ships no image preset");
      }
      return ModImage{it->second};
    }
  }
  return BaseVariant{};
}

bool variant_applicable(const GameSpec& spec, VariantName name) {
  try {
    apply_variant(spec, make_variant(spec, name, 0));
    return true;
  } catch (const NotApplicable&) {
    return false;
  }
}

}  // namespace afford
