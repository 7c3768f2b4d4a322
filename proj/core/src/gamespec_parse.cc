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

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "afford/error.h"
#include "afford/gamespec.h"

namespace afford {

namespace {

struct Token {
  std::string_view text;
  int column = 1;  // 1-based
};

struct Line {
  int number = 1;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      if (i >= raw.size()) break;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      line.tokens.push_back({raw.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

enum class Section { kHeader, kGrid, kClasses, kKeys, kDynamics, kRewards,
                     kTermination, kLevels, kVariants };

class Parser {
 public:
  explicit Parser(std::string_view text) : lines_(tokenize(text)) {}

  GameSpec run() {
    if (lines_.empty()) {
      throw SyntaxError(1, 1, "empty document: expected 'game <name>'");
    }
    for (const Line& line : lines_) {
      line_ = &line;
      const Token& head = line.tokens.front();
      if (head.text.front() == '[') {
        enter_section(head);
        expect_count(1);
        continue;
      }
      switch (section_) {
        case Section::kHeader: header(); break;
        case Section::kGrid: grid(); break;
        case Section::kClasses: classes(); break;
        case Section::kKeys: keys(); break;
        case Section::kDynamics: dynamics(); break;
        case Section::kRewards: rewards(); break;
        case Section::kTermination: termination(); break;
        case Section::kLevels: levels(); break;
        case Section::kVariants: variants(); break;
      }
    }
    if (spec_.name.empty()) {
      throw SyntaxError(lines_.front().number, 1, "missing 'game <name>' header");
    }
    validate(spec_);
    return std::move(spec_);
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw SyntaxError(line_->number, at.column, message);
  }
  [[noreturn]] void fail(const std::string& message) const {
    fail(line_->tokens.front(), message);
  }

  const Token& tok(std::size_t i) const { return line_->tokens[i]; }
  std::size_t count() const { return line_->tokens.size(); }

  void expect_count(std::size_t n) const {
    if (count() != n) {
      const Token& at = count() > n ? tok(n) : tok(count() - 1);
      fail(at, "'" + std::string(tok(0).text) + "' expects " +
                   std::to_string(n - 1) + " argument(s), got " +
                   std::to_string(count() - 1));
    }
  }
  void expect_count_between(std::size_t lo, std::size_t hi) const {
    if (count() < lo || count() > hi) {
      const Token& at = count() > hi ? tok(hi) : tok(count() - 1);
      fail(at, "wrong number of arguments for '" + std::string(tok(0).text) + "'");
    }
  }

  int integer(const Token& t) const {
    int value = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      fail(t, "expected integer, got '" + std::string(t.text) + "'");
    }
    return value;
  }
  int integer(std::size_t i) const { return integer(tok(i)); }

  double real(std::size_t i) const {
    const Token& t = tok(i);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      fail(t, "expected number, got '" + std::string(t.text) + "'");
    }
    return value;
  }

  std::string ident(std::size_t i) const {
    const Token& t = tok(i);
    for (char c : t.text) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
      if (!ok) fail(t, "invalid identifier '" + std::string(t.text) + "'");
    }
    return std::string(t.text);
  }

  std::vector<std::string_view> split(const Token& t, char sep) const {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
      std::size_t end = t.text.find(sep, pos);
      parts.push_back(t.text.substr(pos, end == std::string_view::npos
                                             ? std::string_view::npos
                                             : end - pos));
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
    for (auto p : parts) {
      if (p.empty()) fail(t, "malformed list '" + std::string(t.text) + "'");
    }
    return parts;
  }

  int sub_integer(const Token& t, std::string_view part) const {
    Token sub{part, t.column + static_cast<int>(part.data() - t.text.data())};
    return integer(sub);
  }

  Color color(std::size_t i) const {
    const Token& t = tok(i);
    auto parts = split(t, ',');
    if (parts.size() != 3) fail(t, "expected color r,g,b");
    Color c;
    std::uint8_t* channels[3] = {&c.r, &c.g, &c.b};
    for (int k = 0; k < 3; ++k) {
      int v = sub_integer(t, parts[k]);
      if (v < 0 || v > 255) fail(t, "color channel outside [0, 255]");
      *channels[k] = static_cast<std::uint8_t>(v);
    }
    return c;
  }

  Extent extent(std::size_t i) const {
    const Token& t = tok(i);
    auto parts = split(t, 'x');
    if (parts.size() != 2) fail(t, "expected size WxH");
    return {sub_integer(t, parts[0]), sub_integer(t, parts[1])};
  }

  void enter_section(const Token& head) {
    static constexpr std::pair<std::string_view, Section> kSections[] = {
        {"[grid]", Section::kGrid},         {"[classes]", Section::kClasses},
        {"[keys]", Section::kKeys},         {"[dynamics]", Section::kDynamics},
        {"[rewards]", Section::kRewards},   {"[termination]", Section::kTermination},
        {"[levels]", Section::kLevels},     {"[variants]", Section::kVariants},
    };
    if (spec_.name.empty()) fail(head, "expected 'game <name>' before sections");
    for (const auto& [name, section] : kSections) {
      if (head.text == name) {
        section_ = section;
        return;
      }
    }
    fail(head, "unknown section '" + std::string(head.text) + "'");
  }

  void header() {
    const auto word = tok(0).text;
    if (word == "game") {
      expect_count(2);
      spec_.name = ident(1);
    } else if (spec_.name.empty()) {
      fail("expected 'game <name>'");
    } else if (word == "renderer") {
      expect_count(2);
      if (tok(1).text == "flat_rect") {
        spec_.renderer = Renderer::kFlatRect;
      } else if (tok(1).text == "sprite") {
        spec_.renderer = Renderer::kSprite;
      } else {
        fail(tok(1), "renderer must be flat_rect or sprite");
      }
    } else if (word == "max_score") {
      expect_count(2);
      spec_.max_score = integer(1);
    } else {
      fail("unknown header directive '" + std::string(word) + "'");
    }
  }

  void grid() {
    const auto word = tok(0).text;
    if (word == "size") {
      expect_count(3);
      spec_.grid_width = integer(1);
      spec_.grid_height = integer(2);
    } else if (word == "background") {
      expect_count(2);
      spec_.background = color(1);
    } else {
      fail("unknown [grid] directive '" + std::string(word) + "'");
    }
  }

  void classes() {
    if (tok(0).text != "class") fail("expected 'class'");
    expect_count_between(5, 6);
    ObjectClassDef def;
    def.id = ident(1);
    def.color = color(2);
    def.size = extent(3);
    def.sprite = ident(4);
    if (count() == 6) def.scale_percent = integer(5);
    spec_.object_classes.push_back(std::move(def));
  }

  void keys() {
    if (tok(0).text != "key" || count() < 2) fail("expected 'key <kind> ...'");
    KeyDef key;
    const auto kind = tok(1).text;
    if (kind == "noop") {
      expect_count(2);
    } else if (kind == "move") {
      expect_count(4);
      key.kind = KeyDef::Kind::kMove;
      key.delta = {integer(2), integer(3)};
    } else if (kind == "fire") {
      expect_count_between(5, 6);
      key.kind = KeyDef::Kind::kFire;
      key.spawn_class = ident(2);
      key.delta = {integer(3), integer(4)};
      if (count() == 6) key.max_live = integer(5);
    } else {
      fail(tok(1), "unknown key kind '" + std::string(kind) + "'");
    }
    spec_.actions.push_back(std::move(key));
  }

  void dynamics() {
    const auto word = tok(0).text;
    if (word == "player") {
      expect_count(3);
      PlayerRule r{ident(1), EdgeMode::kClamp};
      if (tok(2).text == "wrap") {
        r.edge = EdgeMode::kWrap;
      } else if (tok(2).text != "clamp") {
        fail(tok(2), "edge mode must be clamp or wrap");
      }
      spec_.dynamics_rules.emplace_back(std::move(r));
    } else if (word == "move") {
      expect_count_between(4, 5);
      MoveRule r{ident(1), {integer(2), integer(3)}, 1};
      if (count() == 5) r.period = integer(4);
      spec_.dynamics_rules.emplace_back(std::move(r));
    } else if (word == "march") {
      expect_count_between(4, 5);
      MarchRule r{ident(1), integer(2), integer(3), false};
      if (count() == 5) {
        if (tok(4).text == "wrap") {
          r.wrap = true;
        } else if (tok(4).text != "bounce") {
          fail(tok(4), "march mode must be bounce or wrap");
        }
      }
      spec_.dynamics_rules.emplace_back(std::move(r));
    } else if (word == "spawn") {
      expect_count(6);
      spec_.dynamics_rules.emplace_back(
          SpawnRule{ident(1), ident(2), real(3), {integer(4), integer(5)}});
    } else if (word == "spawn_random") {
      expect_count(5);
      SpawnRandomRule r{ident(1), real(2), integer(3), {}};
      for (auto part : split(tok(4), ',')) r.columns.push_back(sub_integer(tok(4), part));
      spec_.dynamics_rules.emplace_back(std::move(r));
    } else if (word == "shoot") {
      expect_count(6);
      spec_.dynamics_rules.emplace_back(
          ShootRule{ident(1), ident(2), real(3), {integer(4), integer(5)}});
    } else {
      fail("unknown dynamics rule '" + std::string(word) + "'");
    }
  }

  void rewards() {
    const auto word = tok(0).text;
    if (word == "contact") {
      expect_count(5);
      ContactRule r{ident(1), ident(2), integer(3), Removal::kNone};
      const auto rm = tok(4).text;
      if (rm == "none") r.remove = Removal::kNone;
      else if (rm == "first") r.remove = Removal::kFirst;
      else if (rm == "second") r.remove = Removal::kSecond;
      else if (rm == "both") r.remove = Removal::kBoth;
      else fail(tok(4), "removal must be none, first, second or both");
      spec_.rewards.contacts.push_back(std::move(r));
    } else if (word == "step") {
      expect_count(2);
      spec_.rewards.per_step = integer(1);
    } else if (word == "win") {
      expect_count(2);
      spec_.rewards.on_win = integer(1);
    } else if (word == "lose") {
      expect_count(2);
      spec_.rewards.on_lose = integer(1);
    } else {
      fail("unknown reward rule '" + std::string(word) + "'");
    }
  }

  void termination() {
    auto& t = spec_.termination;
    const auto word = tok(0).text;
    if (word == "timeout") {
      expect_count(3);
      t.timeout = integer(1);
      if (t.timeout <= 0) {
        throw SemanticError("timeout must be > 0 when declared (line " +
                            std::to_string(line_->number) + ")");
      }
      if (tok(2).text == "win") t.timeout_outcome = Outcome::kWin;
      else if (tok(2).text == "lose") t.timeout_outcome = Outcome::kLose;
      else fail(tok(2), "timeout outcome must be win or lose");
    } else if (word == "collect") {
      expect_count(3);
      t.collect.push_back({ident(1), integer(2)});
    } else if (word == "clear") {
      expect_count(2);
      t.clear.push_back(ident(1));
    } else if (word == "reach") {
      expect_count(3);
      t.reach.push_back({ident(1), integer(2)});
    } else {
      fail("unknown termination rule '" + std::string(word) + "'");
    }
  }

  void levels() {
    const auto word = tok(0).text;
    if (word == "level") {
      expect_count(1);
      spec_.levels.emplace_back();
      return;
    }
    if (spec_.levels.empty()) fail("placement before the first 'level'");
    auto& level = spec_.levels.back();
    if (word == "place") {
      expect_count(4);
      level.placements.push_back({ident(1), {integer(2), integer(3)}});
    } else if (word == "block") {
      // block <class> <x> <y> <cols> <rows> <dx> <dy>: row-major expansion.
      expect_count(8);
      const std::string cls = ident(1);
      const int x = integer(2), y = integer(3), cols = integer(4), rows = integer(5);
      const int dx = integer(6), dy = integer(7);
      if (cols < 1 || rows < 1) fail(tok(4), "block needs at least one cell");
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          level.placements.push_back({cls, {x + c * dx, y + r * dy}});
        }
      }
    } else {
      fail("unknown level directive '" + std::string(word) + "'");
    }
  }

  void variants() {
    auto& v = spec_.variants;
    const auto word = tok(0).text;
    if (word == "position") {
      expect_count(5);
      PositionDecl decl{real(1), integer(2), integer(3), {}};
      for (auto part : split(tok(4), ',')) decl.classes.emplace_back(part);
      v.position = std::move(decl);
    } else if (word == "colorsize") {
      expect_count_between(5, 6);
      ColorSizeEntry e{ident(2), color(3), extent(4), 100};
      if (count() == 6) e.scale_percent = integer(5);
      v.colorsize[ident(1)].push_back(std::move(e));
    } else if (word == "image") {
      expect_count(4);
      v.image[ident(1)].push_back({ident(2), ident(3)});
    } else {
      fail("unknown variant declaration '" + std::string(word) + "'");
    }
  }

  std::vector<Line> lines_;
  const Line* line_ = nullptr;
  Section section_ = Section::kHeader;
  GameSpec spec_;
};

}  // namespace

GameSpec parse(std::string_view text) { return Parser(text).run(); }

}  // namespace afford
