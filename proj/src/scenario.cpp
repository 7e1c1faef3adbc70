#include "netvmo/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "netvmo/error.hpp"

namespace netvmo {

namespace {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

class Parser {
 public:
  Parser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  Scenario run();

 private:
  enum class Section { kNone, kCamera, kTarget, kFeatures, kGraph, kGains, kIntegration, kAnalysis };

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw Error(ErrorCode::kParse,
                fmt::format("{}:{}:{}: {}", source_, line_no_, column, message));
  }

  void begin_section(std::string_view name, std::size_t column);
  void assign(const Token& key, const std::vector<Token>& values);

  double number(const Token& t) const;
  std::size_t index(const Token& t) const;
  bool boolean(const Token& t) const;
  Vec3 vec3(const std::vector<Token>& values) const;
  void expect_count(const std::vector<Token>& values, std::size_t n) const;
  void once(std::string_view key, std::size_t column);

  std::string_view text_;
  std::string_view source_;
  std::size_t line_no_ = 0;
  Section section_ = Section::kNone;
  std::set<std::string, std::less<>> seen_keys_;
  std::set<Section> seen_sections_;
  std::set<std::string, std::less<>> camera_required_;
  bool target_has_camera_ = false;
  bool target_has_position_ = false;
  std::size_t block_line_ = 0;

  Scenario scenario_;
  bool has_features_ = false;

  void close_block();
};

std::vector<Token> split(std::string_view line, std::size_t offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back({line.substr(i, j - i), offset + i + 1});
    i = j;
  }
  return out;
}

double Parser::number(const Token& t) const {
  double value = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (!t.text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    fail(t.column, fmt::format("expected a number, got '{}'", t.text));
  }
  return value;
}

std::size_t Parser::index(const Token& t) const {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    fail(t.column, fmt::format("expected a non-negative integer, got '{}'", t.text));
  }
  return value;
}

bool Parser::boolean(const Token& t) const {
  if (t.text == "true" || t.text == "1") return true;
  if (t.text == "false" || t.text == "0") return false;
  fail(t.column, fmt::format("expected true or false, got '{}'", t.text));
}

void Parser::expect_count(const std::vector<Token>& values, std::size_t n) const {
  if (values.size() != n) {
    const std::size_t column = values.empty() ? 1 : values.front().column;
    fail(column, fmt::format("expected {} value(s), got {}", n, values.size()));
  }
}

Vec3 Parser::vec3(const std::vector<Token>& values) const {
  expect_count(values, 3);
  return {number(values[0]), number(values[1]), number(values[2])};
}

void Parser::once(std::string_view key, std::size_t column) {
  if (!seen_keys_.emplace(key).second) fail(column, fmt::format("duplicate key '{}'", key));
}

void Parser::close_block() {
  if (section_ == Section::kCamera && !camera_required_.empty()) {
    throw Error(ErrorCode::kParse,
                fmt::format("{}:{}:1: [camera] block is missing '{}'", source_, block_line_,
                            *camera_required_.begin()));
  }
  if (section_ == Section::kTarget && (!target_has_camera_ || !target_has_position_)) {
    throw Error(ErrorCode::kParse,
                fmt::format("{}:{}:1: [target] block is missing '{}'", source_, block_line_,
                            target_has_camera_ ? "position" : "camera"));
  }
}

void Parser::begin_section(std::string_view name, std::size_t column) {
  close_block();
  static const std::map<std::string_view, Section> kSections = {
      {"camera", Section::kCamera},   {"target", Section::kTarget},
      {"features", Section::kFeatures}, {"graph", Section::kGraph},
      {"gains", Section::kGains},     {"integration", Section::kIntegration},
      {"analysis", Section::kAnalysis}};
  auto it = kSections.find(name);
  if (it == kSections.end()) fail(column, fmt::format("unknown section [{}]", name));
  section_ = it->second;
  block_line_ = line_no_;
  seen_keys_.clear();
  if (section_ == Section::kCamera) {
    scenario_.cameras.emplace_back();
    camera_required_ = {"id", "position"};
  } else if (section_ == Section::kTarget) {
    scenario_.targets.emplace_back();
    target_has_camera_ = target_has_position_ = false;
  } else if (!seen_sections_.insert(section_).second) {
    fail(column, fmt::format("section [{}] appears more than once", name));
  }
  if (section_ == Section::kFeatures) has_features_ = true;
}

void Parser::assign(const Token& key, const std::vector<Token>& values) {
  const std::string_view k = key.text;
  const auto unknown = [&] {
    fail(key.column, fmt::format("unknown key '{}' in this section", k));
  };
  const auto scalar = [&]() -> const Token& {
    expect_count(values, 1);
    return values[0];
  };

  switch (section_) {
    case Section::kNone:
      fail(key.column, "key outside of any section");
    case Section::kCamera: {
      CameraSpec& c = scenario_.cameras.back();
      once(k, key.column);
      camera_required_.erase(std::string(k));
      if (k == "id") c.id = index(scalar());
      else if (k == "position") c.position = vec3(values);
      else if (k == "orientation") c.orientation = vec3(values);
      else if (k == "focal_length") c.focal_length = number(scalar());
      else if (k == "visible") c.visible = boolean(scalar());
      else if (k == "initial_position") c.initial_position = vec3(values);
      else if (k == "initial_orientation") c.initial_orientation = vec3(values);
      else if (k == "visible_windows") {
        if (values.empty() || values.size() % 2 != 0) {
          fail(values.empty() ? key.column : values.front().column,
               "visible_windows needs begin/end pairs");
        }
        for (std::size_t i = 0; i < values.size(); i += 2) {
          c.visible_windows.push_back({number(values[i]), number(values[i + 1])});
        }
      } else unknown();
      break;
    }
    case Section::kTarget: {
      TargetSpec& t = scenario_.targets.back();
      once(k, key.column);
      if (k == "camera") {
        t.camera = index(scalar());
        target_has_camera_ = true;
      } else if (k == "position") {
        t.position = vec3(values);
        target_has_position_ = true;
      } else if (k == "orientation") {
        t.orientation = vec3(values);
      } else if (k == "velocity") {
        expect_count(values, 6);
        for (int i = 0; i < 6; ++i) t.velocity(i) = number(values[static_cast<std::size_t>(i)]);
      } else {
        unknown();
      }
      break;
    }
    case Section::kFeatures:
      if (k != "point") unknown();
      scenario_.features.push_back(vec3(values));
      break;
    case Section::kGraph:
      if (k != "edge") unknown();
      expect_count(values, 2);
      scenario_.edges.emplace_back(index(values[0]), index(values[1]));
      break;
    case Section::kGains:
      once(k, key.column);
      if (k == "k_e") scenario_.gains.k_e = number(scalar());
      else if (k == "k_s") scenario_.gains.k_s = number(scalar());
      else unknown();
      break;
    case Section::kIntegration: {
      IntegrationSpec& s = scenario_.integration;
      once(k, key.column);
      if (k == "dt") s.dt = number(scalar());
      else if (k == "t_final") s.t_final = number(scalar());
      else if (k == "record_every") s.record_every = index(scalar());
      else if (k == "scheme") {
        const Token& v = scalar();
        if (v.text == "euler") s.scheme = IntegrationScheme::kLieEuler;
        else if (v.text == "midpoint") s.scheme = IntegrationScheme::kMidpoint;
        else fail(v.column, fmt::format("scheme must be euler or midpoint, got '{}'", v.text));
      } else if (k == "error_mode") {
        const Token& v = scalar();
        if (v.text == "visual") s.error_mode = ErrorMode::kVisual;
        else if (v.text == "geometric") s.error_mode = ErrorMode::kGeometric;
        else fail(v.column, fmt::format("error_mode must be visual or geometric, got '{}'", v.text));
      } else unknown();
      break;
    }
    case Section::kAnalysis: {
      AnalysisSpec& a = scenario_.analysis;
      once(k, key.column);
      if (k == "zeta_margin") a.zeta_margin = number(scalar());
      else if (k == "zeta") a.zeta = number(scalar());
      else if (k == "epsilon") a.epsilon = number(scalar());
      else if (k == "tail_fraction") a.tail_fraction = number(scalar());
      else unknown();
      break;
    }
  }
}

Scenario Parser::run() {
  std::size_t pos = 0;
  bool any_content = false;
  while (pos <= text_.size()) {
    const std::size_t end = std::min(text_.find('\n', pos), text_.size());
    std::string_view line = text_.substr(pos, end - pos);
    ++line_no_;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    any_content = true;

    if (line[first] == '[') {
      const std::size_t close = line.find(']', first);
      if (close == std::string_view::npos) fail(first + 1, "unterminated section header");
      if (line.find_first_not_of(" \t", close + 1) != std::string_view::npos) {
        fail(close + 2, "unexpected text after section header");
      }
      begin_section(line.substr(first + 1, close - first - 1), first + 1);
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(first + 1, "expected 'key = value'");
    const auto key_tokens = split(line.substr(0, eq), 0);
    if (key_tokens.size() != 1) fail(first + 1, "expected a single key before '='");
    const auto values = split(line.substr(eq + 1), eq + 1);
    if (values.empty()) fail(eq + 2, "missing value after '='");
    assign(key_tokens[0], values);
  }
  if (!any_content) {
    throw Error(ErrorCode::kParse, fmt::format("{}:1:1: scenario is empty", source_));
  }
  close_block();

  if (!has_features_) scenario_.features = FeatureModel::tetrahedron().points;
  std::sort(scenario_.cameras.begin(), scenario_.cameras.end(),
            [](const CameraSpec& a, const CameraSpec& b) { return a.id < b.id; });
  std::sort(scenario_.targets.begin(), scenario_.targets.end(),
            [](const TargetSpec& a, const TargetSpec& b) { return a.camera < b.camera; });
  validate(scenario_);
  return scenario_;
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kValidation, message);
}

}  // namespace

void validate(const Scenario& s) {
  if (s.cameras.empty()) invalid("cameras: at least one [camera] block is required");
  const std::size_t n = s.cameras.size();
  std::vector<bool> seen(n + 1, false);
  for (const auto& c : s.cameras) {
    if (c.id < 1 || c.id > n || seen[c.id]) {
      invalid(fmt::format("camera ids: ids must be unique and cover 1..{} (got {})", n, c.id));
    }
    seen[c.id] = true;
    if (!(c.focal_length > 0.0)) {
      invalid(fmt::format("camera {}: focal_length must be positive", c.id));
    }
    for (const auto& w : c.visible_windows) {
      if (!(w.end > w.begin)) {
        invalid(fmt::format("camera {}: visible window [{}, {}) is empty", c.id, w.begin, w.end));
      }
    }
  }

  std::vector<bool> has_target(n + 1, false);
  for (const auto& t : s.targets) {
    if (t.camera < 1 || t.camera > n) {
      invalid(fmt::format("target: camera {} does not exist", t.camera));
    }
    if (has_target[t.camera]) {
      invalid(fmt::format("target: camera {} has more than one target view", t.camera));
    }
    has_target[t.camera] = true;
  }
  for (const auto& c : s.cameras) {
    const bool views = c.visible_windows.empty() ? c.visible : true;
    if (views && !has_target[c.id]) {
      invalid(fmt::format("target views: visible camera {} has no [target] block", c.id));
    }
    if (!views && has_target[c.id]) {
      invalid(fmt::format("target views: camera {} is not visible but has a [target] block",
                          c.id));
    }
  }

  if (s.features.size() < 4) {
    invalid(fmt::format("features: at least 4 feature points are required (got {})",
                        s.features.size()));
  }

  std::vector<Edge> edges;
  for (auto [a, b] : s.edges) {
    if (a < 1 || a > n || b < 1 || b > n) {
      invalid(fmt::format("graph: edge ({}, {}) references a missing camera", a, b));
    }
    if (a == b) invalid(fmt::format("graph: self-loop on camera {}", a));
    edges.emplace_back(a - 1, b - 1);
  }
  if (!CommGraph(n, edges).is_connected()) {
    throw Error(ErrorCode::kDisconnectedGraph,
                "graph: communication graph is not connected");
  }

  if (!(s.gains.k_e > 0.0)) invalid("gains: k_e must be positive");
  if (!(s.gains.k_s >= 0.0)) invalid("gains: k_s must be non-negative");
  if (!(s.integration.dt > 0.0)) invalid("integration: dt must be positive");
  if (!(s.integration.t_final >= 0.0)) invalid("integration: t_final must be non-negative");
  if (s.integration.record_every < 1) invalid("integration: record_every must be >= 1");
  if (!(s.analysis.zeta_margin > 0.0)) invalid("analysis: zeta_margin must be positive");
  if (s.analysis.zeta && !(*s.analysis.zeta > 0.0)) invalid("analysis: zeta must be positive");
  if (!(s.analysis.epsilon > 0.0)) invalid("analysis: epsilon must be positive");
  if (!(s.analysis.tail_fraction > 0.0 && s.analysis.tail_fraction <= 1.0)) {
    invalid("analysis: tail_fraction must lie in (0, 1]");
  }
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
  return Parser(text, source).run();
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string());
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string vec(const Vec3& v) { return fmt::format("{} {} {}", num(v.x()), num(v.y()), num(v.z())); }

}  // namespace

std::string serialize(const Scenario& s) {
  std::string out;
  auto line = [&out](std::string_view text) {
    out += text;
    out += '\n';
  };
  for (const auto& c : s.cameras) {
    line("[camera]");
    line(fmt::format("id = {}", c.id));
    line(fmt::format("position = {}", vec(c.position)));
    line(fmt::format("orientation = {}", vec(c.orientation)));
    line(fmt::format("focal_length = {}", num(c.focal_length)));
    line(fmt::format("visible = {}", c.visible ? "true" : "false"));
    if (!c.visible_windows.empty()) {
      std::string windows;
      for (const auto& w : c.visible_windows) windows += fmt::format(" {} {}", num(w.begin), num(w.end));
      line("visible_windows =" + windows);
    }
    if (c.initial_position) line(fmt::format("initial_position = {}", vec(*c.initial_position)));
    if (c.initial_orientation) {
      line(fmt::format("initial_orientation = {}", vec(*c.initial_orientation)));
    }
    line("");
  }
  for (const auto& t : s.targets) {
    line("[target]");
    line(fmt::format("camera = {}", t.camera));
    line(fmt::format("position = {}", vec(t.position)));
    line(fmt::format("orientation = {}", vec(t.orientation)));
    line(fmt::format("velocity = {} {}", vec(t.velocity.head<3>()), vec(t.velocity.tail<3>())));
    line("");
  }
  line("[features]");
  for (const auto& p : s.features) line(fmt::format("point = {}", vec(p)));
  line("");
  line("[graph]");
  for (auto [a, b] : s.edges) line(fmt::format("edge = {} {}", a, b));
  line("");
  line("[gains]");
  line(fmt::format("k_e = {}", num(s.gains.k_e)));
  line(fmt::format("k_s = {}", num(s.gains.k_s)));
  line("");
  line("[integration]");
  line(fmt::format("dt = {}", num(s.integration.dt)));
  line(fmt::format("t_final = {}", num(s.integration.t_final)));
  line(fmt::format("record_every = {}", s.integration.record_every));
  line(fmt::format("scheme = {}",
                   s.integration.scheme == IntegrationScheme::kLieEuler ? "euler" : "midpoint"));
  line(fmt::format("error_mode = {}",
                   s.integration.error_mode == ErrorMode::kVisual ? "visual" : "geometric"));
  line("");
  line("[analysis]");
  line(fmt::format("zeta_margin = {}", num(s.analysis.zeta_margin)));
  if (s.analysis.zeta) line(fmt::format("zeta = {}", num(*s.analysis.zeta)));
  line(fmt::format("epsilon = {}", num(s.analysis.epsilon)));
  line(fmt::format("tail_fraction = {}", num(s.analysis.tail_fraction)));
  return out;
}

Network build_network(const Scenario& s) {
  validate(s);
  std::vector<CameraNode> cameras;
  std::vector<std::optional<TargetView>> targets(s.cameras.size());
  for (const auto& c : s.cameras) {
    CameraNode node;
    node.id = c.id;
    node.world_pose = {exp_so3(c.orientation), c.position};
    node.intrinsics.focal_length = c.focal_length;
    node.visible = c.visible;
    node.schedule = c.visible_windows;
    cameras.push_back(std::move(node));
  }
  for (const auto& t : s.targets) {
    targets[t.camera - 1] =
        TargetView{{exp_so3(t.orientation), t.position}, Twist::from_vector(t.velocity)};
  }
  std::vector<Edge> edges;
  for (auto [a, b] : s.edges) edges.emplace_back(a - 1, b - 1);
  return Network(std::move(cameras), std::move(targets), FeatureModel{s.features},
                 CommGraph(s.cameras.size(), edges));
}

ObserverState build_initial_state(const Scenario& s, const Network& network) {
  std::vector<Pose> estimates;
  for (const auto& c : s.cameras) {
    estimates.push_back({exp_so3(c.initial_orientation.value_or(Vec3::Zero())),
                         c.initial_position.value_or(kDefaultInitialPosition)});
  }
  return initial_state(network, std::move(estimates));
}

SimulationOptions simulation_options(const Scenario& s) {
  SimulationOptions options;
  options.step.gains = s.gains;
  options.step.dt = s.integration.dt;
  options.step.scheme = s.integration.scheme;
  options.step.error_mode = s.integration.error_mode;
  options.t_final = s.integration.t_final;
  options.record_every = s.integration.record_every;
  return options;
}

}  // namespace netvmo
