// Copyright 2026 The Authors.
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

#include "rca/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace rca {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& msg) const {
    std::ostringstream out;
    out << source_;
    if (!mark.is_null()) out << ':' << mark.line + 1 << ':' << mark.column + 1;
    out << ": " << msg;
    throw LoadError(out.str());
  }
  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    fail(node.Mark(), msg);
  }

  void expect_map(const YAML::Node& node, const std::string& what,
                  std::initializer_list<const char*> keys) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) {
        fail(kv.first, "unknown key '" + key + "' in " + what);
      }
    }
  }

  YAML::Node require(const YAML::Node& map, const char* key) const {
    YAML::Node v = map[key];
    if (!v) fail(map, std::string("missing key '") + key + "'");
    return v;
  }

  std::string str(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "expected a scalar");
    return node.Scalar();
  }

  std::int64_t integer(const YAML::Node& node) const {
    const std::string text = str(node);
    std::int64_t out = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    if (ec == std::errc::result_out_of_range) fail(node, "integer overflow");
    if (ec != std::errc() || ptr != end) {
      fail(node, "expected an integer, got '" + text + "'");
    }
    return out;
  }

  int small_int(const YAML::Node& node, int lo, int hi) const {
    const auto v = integer(node);
    if (v < lo || v > hi) {
      fail(node, "value " + std::to_string(v) + " outside [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
  }

  bool boolean(const YAML::Node& node) const {
    bool out = false;
    if (!node.IsScalar() || !YAML::convert<bool>::decode(node, out)) {
      fail(node, "expected true or false");
    }
    return out;
  }

  Rational rational(const YAML::Node& node) const {
    const std::string text = str(node);
    try {
      return parse_rational(text);
    } catch (const std::exception&) {
      fail(node, "expected a rational (integer, p/q or decimal), got '" +
                     text + "'");
    }
  }

 private:
  std::string source_;
};

std::int64_t parse_int(const std::string& text) {
  std::int64_t out = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw std::invalid_argument("bad integer '" + text + "'");
  }
  return out;
}

YAML::Node parse_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    Reader(source).fail(e.mark, e.msg);
  }
}

std::string kind_name(MechanismKind k) {
  switch (k) {
    case MechanismKind::kMA:
      return "ma";
    case MechanismKind::kMsCA:
      return "msca";
    case MechanismKind::kMCA:
      return "mca";
  }
  return "?";
}

std::string dynamics_name(DynamicsKind k) {
  return k == DynamicsKind::kRegret ? "regret" : "best-response";
}

std::string rational_text(const Rational& r) { return to_string(r); }

Instance read_instance(const Reader& in, const YAML::Node& root) {
  in.expect_map(root, "instance", {"m", "items", "s", "agents"});
  Instance inst;
  inst.m = in.small_int(in.require(root, "m"), 1, kMaxItems);
  if (YAML::Node items = root["items"]) {
    if (!items.IsSequence()) in.fail(items, "items must be a list of labels");
    if (static_cast<int>(items.size()) != inst.m) {
      in.fail(items, "expected " + std::to_string(inst.m) + " item labels, got " +
                         std::to_string(items.size()));
    }
    std::set<std::string> seen;
    for (const auto& label : items) {
      const std::string name = in.str(label);
      if (name.empty()) in.fail(label, "empty item label");
      if (!seen.insert(name).second) {
        in.fail(label, "duplicate item label '" + name + "'");
      }
      inst.labels.push_back(name);
    }
  } else {
    inst.labels = default_labels(inst.m);
  }
  if (YAML::Node s = root["s"]) inst.s = in.small_int(s, 1, inst.m);

  YAML::Node agents = in.require(root, "agents");
  if (agents.IsNull()) return inst;
  if (!agents.IsSequence()) in.fail(agents, "agents must be a list");
  std::map<std::int64_t, Valuation> by_id;
  for (const auto& agent : agents) {
    in.expect_map(agent, "agent", {"id", "atoms"});
    YAML::Node id_node = in.require(agent, "id");
    const auto id = in.integer(id_node);
    if (id < 1) in.fail(id_node, "agent ids start at 1");
    if (by_id.contains(id)) {
      in.fail(id_node, "duplicate agent id " + std::to_string(id));
    }
    YAML::Node atoms = in.require(agent, "atoms");
    std::vector<Atom> list;
    if (!atoms.IsNull()) {
      if (!atoms.IsSequence()) in.fail(atoms, "atoms must be a list");
      for (const auto& atom : atoms) {
        in.expect_map(atom, "atom", {"items", "value"});
        YAML::Node items = in.require(atom, "items");
        if (!items.IsSequence() || items.size() == 0) {
          in.fail(items, "atom items must be a non-empty list of labels");
        }
        std::uint32_t mask = 0;
        for (const auto& label : items) {
          const std::string name = in.str(label);
          auto it = std::find(inst.labels.begin(), inst.labels.end(), name);
          if (it == inst.labels.end()) {
            in.fail(label, "unknown item '" + name + "'");
          }
          mask |= std::uint32_t{1} << (it - inst.labels.begin());
        }
        YAML::Node value_node = in.require(atom, "value");
        const auto value = in.integer(value_node);
        if (value <= 0) in.fail(value_node, "values must be positive ticks");
        if (value > kMaxBid) in.fail(value_node, "value overflow");
        const Bundle set(mask);
        if (std::any_of(list.begin(), list.end(),
                        [&](const Atom& a) { return a.set == set; })) {
          in.fail(atom, "duplicate atom bundle for agent " + std::to_string(id));
        }
        list.push_back({set, value});
      }
    }
    try {
      by_id.emplace(id, Valuation(std::move(list)));
    } catch (const std::invalid_argument& e) {
      in.fail(agent, e.what());
    }
  }
  std::int64_t expected = 1;
  for (auto& [id, valuation] : by_id) {
    if (id != expected) {
      in.fail(agents, "agent ids must be contiguous from 1; missing " +
                          std::to_string(expected));
    }
    inst.types.push_back(std::move(valuation));
    ++expected;
  }
  return inst;
}

void emit_instance(YAML::Emitter& out, const Instance& inst) {
  out << YAML::BeginMap;
  out << YAML::Key << "m" << YAML::Value << inst.m;
  out << YAML::Key << "items" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& label : inst.labels) out << label;
  out << YAML::EndSeq;
  if (inst.s) out << YAML::Key << "s" << YAML::Value << *inst.s;
  out << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < inst.n(); ++i) {
    out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << i + 1;
    out << YAML::Key << "atoms" << YAML::Value << YAML::BeginSeq;
    for (const Atom& atom : inst.types[i].atoms()) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "items"
          << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (int k = 0; k < inst.m; ++k) {
        if (atom.set.mask() >> k & 1) out << inst.labels[k];
      }
      out << YAML::EndSeq << YAML::Key << "value" << YAML::Value << atom.value
          << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
}

MechanismKind read_kind(const Reader& in, const YAML::Node& node) {
  const std::string name = in.str(node);
  for (MechanismKind k :
       {MechanismKind::kMA, MechanismKind::kMsCA, MechanismKind::kMCA}) {
    if (kind_name(k) == name) return k;
  }
  in.fail(node, "unknown mechanism kind '" + name + "' (ma, msca, mca)");
}

std::vector<std::string> read_labels(const Reader& in, const YAML::Node& node) {
  if (!node.IsSequence()) in.fail(node, "expected a list of item labels");
  std::vector<std::string> out;
  for (const auto& x : node) out.push_back(in.str(x));
  return out;
}

template <class F>
auto wrap(const Reader& in, const YAML::Node& node, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const LoadError&) {
    throw;
  } catch (const std::exception& e) {
    in.fail(node, e.what());
  }
}

}  // namespace

Instance parse_instance(const std::string& text, const std::string& source) {
  const Reader in(source);
  return read_instance(in, parse_yaml(text, source));
}

Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_file(path), path.string());
}

std::string dump_instance(const Instance& instance) {
  YAML::Emitter out;
  emit_instance(out, instance);
  return std::string(out.c_str()) + "\n";
}

ExperimentConfig parse_experiment(const std::string& text,
                                  const std::string& source,
                                  const InstanceResolver& resolve) {
  const Reader in(source);
  const YAML::Node root = parse_yaml(text, source);
  in.expect_map(root, "experiment",
                {"name", "instance", "instances", "generate", "mechanism",
                 "dynamics", "agents", "acceptance"});
  ExperimentConfig config;
  if (YAML::Node name = root["name"]) config.name = in.str(name);

  auto add_instance = [&](const YAML::Node& node) {
    if (node.IsMap()) {
      config.instance_paths.emplace_back();
      config.instances.push_back(read_instance(in, node));
      return;
    }
    const std::string path = in.str(node);
    std::string body;
    try {
      body = resolve(path);
    } catch (const std::exception& e) {
      in.fail(node, "cannot read instance '" + path + "': " + e.what());
    }
    config.instance_paths.push_back(path);
    config.instances.push_back(parse_instance(body, path));
  };
  if (YAML::Node one = root["instance"]) add_instance(one);
  if (YAML::Node many = root["instances"]) {
    if (!many.IsSequence()) in.fail(many, "instances must be a list");
    for (const auto& x : many) add_instance(x);
  }

  if (YAML::Node gen = root["generate"]) {
    in.expect_map(gen, "generate",
                  {"family", "instances", "min_agents", "max_agents", "items",
                   "s", "max_value", "max_atoms", "seed"});
    GenerateSpec g;
    g.family = wrap(in, in.require(gen, "family"),
                    [&] { return parse_family(in.str(gen["family"])); });
    if (auto x = gen["instances"]) g.instances = in.small_int(x, 1, 1 << 20);
    if (auto x = gen["min_agents"]) g.min_agents = in.small_int(x, 0, 32);
    if (auto x = gen["max_agents"]) g.max_agents = in.small_int(x, 0, 32);
    if (g.min_agents > g.max_agents) {
      in.fail(gen, "min_agents exceeds max_agents");
    }
    if (auto x = gen["items"]) {
      g.items.clear();
      if (x.IsSequence()) {
        for (const auto& v : x) g.items.push_back(in.small_int(v, 1, kMaxItems));
      } else {
        g.items.push_back(in.small_int(x, 1, kMaxItems));
      }
      if (g.items.empty()) in.fail(x, "items must not be empty");
    }
    if (auto x = gen["s"]) g.s = in.small_int(x, 1, kMaxItems);
    if (auto x = gen["max_value"]) {
      g.max_value = in.integer(x);
      if (g.max_value < 1 || g.max_value > kMaxBid) {
        in.fail(x, "max_value out of range");
      }
    }
    if (auto x = gen["max_atoms"]) g.max_atoms = in.small_int(x, 1, 64);
    if (auto x = gen["seed"]) {
      config.generate_seed = static_cast<std::uint64_t>(in.integer(x));
    }
    config.generate = g;
  }

  const YAML::Node mech = in.require(root, "mechanism");
  in.expect_map(mech, "mechanism",
                {"kind", "rule", "s", "side_a", "side_b", "gamma",
                 "separated_lottery"});
  MechanismSpec& m = config.mechanism;
  m.kind = read_kind(in, in.require(mech, "kind"));
  if (auto x = mech["rule"]) {
    if (m.kind != MechanismKind::kMA) in.fail(x, "rule applies to ma only");
    m.rule = in.str(x);
  }
  if (auto x = mech["s"]) m.s = in.small_int(x, 1, kMaxItems);
  if (auto x = mech["side_a"]) m.side_a = read_labels(in, x);
  if (auto x = mech["side_b"]) m.side_b = read_labels(in, x);
  if (auto x = mech["gamma"]) {
    if (m.kind != MechanismKind::kMCA) in.fail(x, "gamma applies to mca only");
    m.gamma = in.rational(x);
  } else if (m.kind == MechanismKind::kMCA) {
    in.fail(mech, "mca requires gamma");
  }
  if (auto x = mech["separated_lottery"]) m.lottery = in.rational(x);

  const YAML::Node dyn = in.require(root, "dynamics");
  in.expect_map(dyn, "dynamics",
                {"kind", "rounds", "rounds_per_agent", "seed", "replicas",
                 "scripted_order", "start", "keep_on_tie"});
  DynamicsSpec& d = config.dynamics;
  {
    const YAML::Node kind = in.require(dyn, "kind");
    const std::string name = in.str(kind);
    if (name == "regret") {
      d.kind = DynamicsKind::kRegret;
    } else if (name == "best-response") {
      d.kind = DynamicsKind::kBestResponse;
    } else {
      in.fail(kind, "unknown dynamics kind '" + name + "'");
    }
  }
  if (auto x = dyn["rounds"]) {
    d.rounds = in.integer(x);
    if (*d.rounds < 1) in.fail(x, "rounds must be >= 1");
  }
  if (auto x = dyn["rounds_per_agent"]) {
    d.rounds_per_agent = in.integer(x);
    if (*d.rounds_per_agent < 1) in.fail(x, "rounds_per_agent must be >= 1");
  }
  if (d.rounds.has_value() == d.rounds_per_agent.has_value()) {
    in.fail(dyn, "set exactly one of rounds and rounds_per_agent");
  }
  if (auto x = dyn["seed"]) d.seed = static_cast<std::uint64_t>(in.integer(x));
  if (auto x = dyn["replicas"]) d.replicas = in.small_int(x, 1, 1 << 20);
  if (auto x = dyn["scripted_order"]) {
    d.order = wrap(in, x, [&] { return parse_scripted_order(in.str(x)); });
  }
  if (auto x = dyn["start"]) {
    const std::string name = in.str(x);
    if (name == "empty") {
      d.start = StartMode::kEmpty;
    } else if (name == "truthful") {
      d.start = StartMode::kTruthful;
    } else {
      in.fail(x, "start must be empty or truthful");
    }
  }
  if (auto x = dyn["keep_on_tie"]) d.keep_on_tie = in.boolean(x);

  if (YAML::Node ag = root["agents"]) {
    in.expect_map(ag, "agents",
                  {"behavior", "eta", "fpl_scale", "byzantine", "byzantine_last"});
    AgentsSpec& a = config.agents;
    if (auto x = ag["behavior"]) {
      a.behavior = wrap(in, x, [&] { return parse_behavior(in.str(x)); });
    }
    if (auto x = ag["eta"]) a.params.eta = to_double(in.rational(x));
    if (auto x = ag["fpl_scale"]) {
      a.params.fpl_scale = in.integer(x);
      if (*a.params.fpl_scale < 1) in.fail(x, "fpl_scale must be >= 1");
    }
    if (auto x = ag["byzantine"]) {
      if (!x.IsSequence()) in.fail(x, "byzantine must be a list of agent ids");
      for (const auto& id : x) {
        const auto v = in.integer(id);
        if (v < 1) in.fail(id, "agent ids start at 1");
        for (const Instance& inst : config.instances) {
          if (v > inst.n()) {
            in.fail(id, "agent " + std::to_string(v) + " does not exist");
          }
        }
        a.byzantine.push_back(static_cast<AgentId>(v - 1));
      }
    }
    if (auto x = ag["byzantine_last"]) a.byzantine_last = in.small_int(x, 0, 32);
  } else if (d.kind == DynamicsKind::kRegret) {
    config.agents.behavior = Behavior::kMW;
  }

  if (YAML::Node acc = root["acceptance"]) {
    in.expect_map(acc, "acceptance",
                  {"epsilon", "bound", "slack", "min_pass_fraction",
                   "require_separated", "min_step_fraction", "price_cover",
                   "expect_cycle_period", "expect_converged",
                   "expect_final_ratio", "max_final_regret", "max_regret"});
    AcceptanceSpec& a = config.acceptance;
    if (auto x = acc["epsilon"]) a.epsilon = in.rational(x);
    if (auto x = acc["bound"]) {
      a.bound = wrap(in, x, [&] { return parse_bound(in.str(x)); });
    }
    if (auto x = acc["slack"]) a.slack = in.rational(x);
    if (auto x = acc["min_pass_fraction"]) a.min_pass_fraction = in.rational(x);
    if (auto x = acc["require_separated"]) a.require_separated = in.boolean(x);
    if (auto x = acc["min_step_fraction"]) a.min_step_fraction = in.rational(x);
    if (auto x = acc["price_cover"]) a.price_cover = in.boolean(x);
    if (auto x = acc["expect_cycle_period"]) a.expect_cycle_period = in.integer(x);
    if (auto x = acc["expect_converged"]) a.expect_converged = in.boolean(x);
    if (auto x = acc["expect_final_ratio"]) a.expect_final_ratio = in.rational(x);
    if (auto x = acc["max_final_regret"]) a.max_final_regret = in.rational(x);
    if (auto x = acc["max_regret"]) a.max_regret = in.rational(x);
  }

  wrap(in, root, [&] {
    validate(config);
    return 0;
  });
  return config;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  const auto dir = path.parent_path();
  return parse_experiment(read_file(path), path.string(),
                          [&](const std::string& rel) {
                            const std::filesystem::path p(rel);
                            return read_file(p.is_absolute() ? p : dir / p);
                          });
}

std::string dump_experiment(const ExperimentConfig& config) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  if (!config.name.empty()) out << YAML::Key << "name" << YAML::Value << config.name;
  if (!config.instances.empty()) {
    out << YAML::Key << "instances" << YAML::Value << YAML::BeginSeq;
    for (std::size_t k = 0; k < config.instances.size(); ++k) {
      const bool inline_instance =
          k >= config.instance_paths.size() || config.instance_paths[k].empty();
      if (inline_instance) {
        emit_instance(out, config.instances[k]);
      } else {
        out << config.instance_paths[k];
      }
    }
    out << YAML::EndSeq;
  }
  if (config.generate) {
    const GenerateSpec& g = *config.generate;
    out << YAML::Key << "generate" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "family" << YAML::Value << to_string(g.family);
    out << YAML::Key << "instances" << YAML::Value << g.instances;
    out << YAML::Key << "min_agents" << YAML::Value << g.min_agents;
    out << YAML::Key << "max_agents" << YAML::Value << g.max_agents;
    out << YAML::Key << "items" << YAML::Value << YAML::Flow << g.items;
    out << YAML::Key << "s" << YAML::Value << g.s;
    out << YAML::Key << "max_value" << YAML::Value << g.max_value;
    out << YAML::Key << "max_atoms" << YAML::Value << g.max_atoms;
    out << YAML::Key << "seed" << YAML::Value << config.generate_seed;
    out << YAML::EndMap;
  }

  const MechanismSpec& m = config.mechanism;
  out << YAML::Key << "mechanism" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << kind_name(m.kind);
  if (m.kind == MechanismKind::kMA) {
    out << YAML::Key << "rule" << YAML::Value << m.rule;
  }
  if (m.s) out << YAML::Key << "s" << YAML::Value << *m.s;
  if (!m.side_a.empty()) {
    out << YAML::Key << "side_a" << YAML::Value << YAML::Flow << m.side_a;
  }
  if (!m.side_b.empty()) {
    out << YAML::Key << "side_b" << YAML::Value << YAML::Flow << m.side_b;
  }
  if (m.kind == MechanismKind::kMCA) {
    out << YAML::Key << "gamma" << YAML::Value << rational_text(m.gamma);
  }
  if (m.lottery) {
    out << YAML::Key << "separated_lottery" << YAML::Value
        << rational_text(*m.lottery);
  }
  out << YAML::EndMap;

  const DynamicsSpec& d = config.dynamics;
  out << YAML::Key << "dynamics" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << dynamics_name(d.kind);
  if (d.rounds) out << YAML::Key << "rounds" << YAML::Value << *d.rounds;
  if (d.rounds_per_agent) {
    out << YAML::Key << "rounds_per_agent" << YAML::Value << *d.rounds_per_agent;
  }
  out << YAML::Key << "seed" << YAML::Value << d.seed;
  out << YAML::Key << "replicas" << YAML::Value << d.replicas;
  if (d.order) {
    out << YAML::Key << "scripted_order" << YAML::Value
        << YAML::DoubleQuoted << format_scripted_order(*d.order);
  }
  out << YAML::Key << "start" << YAML::Value
      << (d.start == StartMode::kEmpty ? "empty" : "truthful");
  out << YAML::Key << "keep_on_tie" << YAML::Value << d.keep_on_tie;
  out << YAML::EndMap;

  const AgentsSpec& a = config.agents;
  out << YAML::Key << "agents" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "behavior" << YAML::Value << to_string(a.behavior);
  if (a.params.eta) {
    // Shortest text that reads back to the same double.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, *a.params.eta);
    out << YAML::Key << "eta" << YAML::Value << std::string(buf, res.ptr);
  }
  if (a.params.fpl_scale) {
    out << YAML::Key << "fpl_scale" << YAML::Value << *a.params.fpl_scale;
  }
  if (!a.byzantine.empty()) {
    std::vector<int> ids;
    for (AgentId id : a.byzantine) ids.push_back(id + 1);
    out << YAML::Key << "byzantine" << YAML::Value << YAML::Flow << ids;
  }
  if (a.byzantine_last) {
    out << YAML::Key << "byzantine_last" << YAML::Value << a.byzantine_last;
  }
  out << YAML::EndMap;

  const AcceptanceSpec& c = config.acceptance;
  out << YAML::Key << "acceptance" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "epsilon" << YAML::Value << rational_text(c.epsilon);
  out << YAML::Key << "bound" << YAML::Value << to_string(c.bound);
  out << YAML::Key << "slack" << YAML::Value << rational_text(c.slack);
  out << YAML::Key << "min_pass_fraction" << YAML::Value
      << rational_text(c.min_pass_fraction);
  out << YAML::Key << "require_separated" << YAML::Value << c.require_separated;
  if (c.min_step_fraction) {
    out << YAML::Key << "min_step_fraction" << YAML::Value
        << rational_text(*c.min_step_fraction);
  }
  out << YAML::Key << "price_cover" << YAML::Value << c.price_cover;
  if (c.expect_cycle_period) {
    out << YAML::Key << "expect_cycle_period" << YAML::Value
        << *c.expect_cycle_period;
  }
  if (c.expect_converged) {
    out << YAML::Key << "expect_converged" << YAML::Value << *c.expect_converged;
  }
  if (c.expect_final_ratio) {
    out << YAML::Key << "expect_final_ratio" << YAML::Value
        << rational_text(*c.expect_final_ratio);
  }
  if (c.max_final_regret) {
    out << YAML::Key << "max_final_regret" << YAML::Value
        << rational_text(*c.max_final_regret);
  }
  if (c.max_regret) {
    out << YAML::Key << "max_regret" << YAML::Value << rational_text(*c.max_regret);
  }
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void write_trace_csv(std::ostream& out, const Trace& trace, int n) {
  out << "round,updater";
  for (int i = 1; i <= n; ++i) out << ",set_" << i << ",bid_" << i;
  out << ",coin";
  for (int i = 1; i <= n; ++i) out << ",won_" << i;
  for (int i = 1; i <= n; ++i) out << ",pay_" << i;
  out << ",declared_sw,true_sw\n";
  for (const RoundRecord& r : trace.rounds) {
    out << r.round << ',';
    if (r.updater) {
      out << *r.updater + 1;
    } else {
      out << "ALL";
    }
    for (int i = 0; i < n; ++i) {
      out << ',' << r.profile[i].set().mask() << ',' << r.profile[i].bid();
    }
    out << ',' << (r.coin.ignore_big ? "i" : "k");
    if (r.coin.lottery_agent) out << ":L" << *r.coin.lottery_agent + 1;
    for (int i = 0; i < n; ++i) out << ',' << r.outcome.allocation[i].mask();
    for (int i = 0; i < n; ++i) out << ',' << r.outcome.payments[i];
    out << ',' << r.declared_sw << ',' << r.true_sw << '\n';
  }
}

Rational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const auto p = parse_int(text.substr(0, slash));
    const auto q = parse_int(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p, q);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12 || frac[0] == '-' || frac[0] == '+') {
      throw std::invalid_argument("bad decimal '" + text + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    const std::string whole = text.substr(0, dot);
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::string digits = negative ? whole.substr(1) : whole;
    const auto w = digits.empty() ? 0 : parse_int(digits);
    const auto magnitude = w * scale + parse_int(frac);
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_int(text));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace rca
