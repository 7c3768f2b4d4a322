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
#include <array>
#include <cstdint>
#include <ostream>
#include <string_view>

#include "afford/engine.h"
#include "afford/error.h"

namespace afford {

namespace {

using Sprite = std::array<std::uint8_t, 8>;  // one byte per row, MSB = left

struct NamedSprite {
  std::string_view name;
  Sprite rows;
};

// clang-format off
constexpr NamedSprite kSprites[] = {
  {"ship",    {0x18, 0x18, 0x3c, 0x7e, 0xff, 0xff, 0xdb, 0x81}},
  {"fighter", {0x81, 0x81, 0xc3, 0xff, 0xff, 0x3c, 0x18, 0x18}},
  {"invader", {0x24, 0x7e, 0xdb, 0xff, 0xff, 0x5a, 0x81, 0x42}},
  {"squid",   {0x18, 0x3c, 0x7e, 0xdb, 0xff, 0x24, 0x5a, 0xa5}},
  {"laser",   {0x18, 0x18, 0x18, 0x18, 0x18, 0x18, 0x18, 0x18}},
  {"plasma",  {0x00, 0x3c, 0x7e, 0x7e, 0x7e, 0x7e, 0x3c, 0x00}},
  {"bomb",    {0x10, 0x08, 0x10, 0x08, 0x10, 0x08, 0x10, 0x08}},
  {"missile", {0x18, 0x3c, 0x18, 0x18, 0x18, 0x18, 0x3c, 0x66}},
  {"shield",  {0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff}},
  {"rubble",  {0xaa, 0x55, 0xaa, 0x55, 0xaa, 0x55, 0xaa, 0x55}},
  {"car",     {0x3c, 0x7e, 0x66, 0x7e, 0x7e, 0x66, 0x7e, 0x3c}},
  {"racer",   {0x18, 0x3c, 0x7e, 0x5a, 0x7e, 0xff, 0xff, 0x66}},
  {"truck",   {0x7e, 0x7e, 0x7e, 0x7e, 0x7e, 0x7e, 0x42, 0x42}},
  {"buggy",   {0x00, 0x66, 0xff, 0x7e, 0x3c, 0x7e, 0xff, 0x66}},
};
// clang-format on

Sprite sprite_for(std::string_view name) {
  for (const auto& s : kSprites) {
    if (s.name == name) return s.rows;
  }
  // Unknown names get a stable pattern derived from the name (FNV-1a).
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : name) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ULL;
  }
  Sprite rows{};
  for (int i = 0; i < 8; ++i) rows[i] = static_cast<std::uint8_t>(h >> (8 * i)) | 0x18;
  return rows;
}

}  // namespace

PixelFrame render(const WorldState& state, int cell_px) {
  if (cell_px < 1) throw ContractViolation("cell_px must be >= 1");
  const GameSpec& spec = state.game->spec();
  PixelFrame frame;
  frame.width = spec.grid_width * cell_px;
  frame.height = spec.grid_height * cell_px;
  frame.pixels.resize(static_cast<std::size_t>(frame.width) * frame.height * 3);
  for (std::size_t i = 0; i < frame.pixels.size(); i += 3) {
    frame.pixels[i] = spec.background.r;
    frame.pixels[i + 1] = spec.background.g;
    frame.pixels[i + 2] = spec.background.b;
  }
  auto put = [&](int x, int y, Color c) {
    const std::size_t at = (static_cast<std::size_t>(y) * frame.width + x) * 3;
    frame.pixels[at] = c.r;
    frame.pixels[at + 1] = c.g;
    frame.pixels[at + 2] = c.b;
  };

  for (const auto& o : state.objects) {
    const ObjectClassDef& def = state.game->class_def(o.class_index);
    const int x0 = o.position.x * cell_px;
    const int y0 = o.position.y * cell_px;
    const int w = o.bbox.width * cell_px;
    const int h = o.bbox.height * cell_px;
    if (spec.renderer == Renderer::kFlatRect) {
      for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) put(x, y, o.color);
      }
      continue;
    }
    const Sprite sprite = sprite_for(def.sprite);
    const int sw = std::max(1, w * def.scale_percent / 100);
    const int sh = std::max(1, h * def.scale_percent / 100);
    const int sx0 = x0 + (w - sw) / 2;
    const int sy0 = y0 + (h - sh) / 2;
    for (int y = 0; y < sh; ++y) {
      const int row = y * 8 / sh;
      for (int x = 0; x < sw; ++x) {
        const int col = x * 8 / sw;
        if (sprite[row] & (0x80 >> col)) put(sx0 + x, sy0 + y, o.color);
      }
    }
  }
  return frame;
}

void write_ppm(const PixelFrame& frame, std::ostream& out) {
  out << "P6\n" << frame.width << ' ' << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
}

}  // namespace afford
