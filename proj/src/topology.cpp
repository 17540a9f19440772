#include "ntnsplit/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ntnsplit {

namespace {

void append(ResolvedPath& head, const ResolvedPath& tail) {
  if (head.nodes.empty()) {
    head = tail;
    return;
  }
  head.hops.insert(head.hops.end(), tail.hops.begin(), tail.hops.end());
  head.nodes.insert(head.nodes.end(), tail.nodes.begin() + 1, tail.nodes.end());
  head.delay_ms += tail.delay_ms;
}

ResolvedPath reversed(const ResolvedPath& p) {
  ResolvedPath r;
  r.delay_ms = p.delay_ms;
  r.nodes.assign(p.nodes.rbegin(), p.nodes.rend());
  for (auto it = p.hops.rbegin(); it != p.hops.rend(); ++it) {
    r.hops.push_back({it->link, it->to, it->from});
  }
  return r;
}

ResolvedPath at_node(NodeId n) {
  ResolvedPath p;
  p.nodes.push_back(n);
  return p;
}

enum class Chain { source, target };

std::optional<Chain> chain_of(Function f) {
  switch (f) {
    case Function::s_ru:
    case Function::s_du:
    case Function::s_cu: return Chain::source;
    case Function::t_ru:
    case Function::t_du:
    case Function::t_cu: return Chain::target;
    default: return std::nullopt;
  }
}

// 0 = RU, 1 = DU, 2 = CU
int chain_level(Function f) {
  switch (f) {
    case Function::s_ru:
    case Function::t_ru: return 0;
    case Function::s_du:
    case Function::t_du: return 1;
    default: return 2;
  }
}

std::array<Function, 3> chain_functions(Chain c) {
  if (c == Chain::source) return {Function::s_ru, Function::s_du, Function::s_cu};
  return {Function::t_ru, Function::t_du, Function::t_cu};
}

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::a: return "A";
    case Scenario::b1: return "B1";
    case Scenario::b2: return "B2";
    case Scenario::c: return "C";
  }
  return "?";
}

const char* scenario_family(Scenario s) {
  switch (s) {
    case Scenario::a: return "A";
    case Scenario::b1:
    case Scenario::b2: return "B";
    case Scenario::c: return "C";
  }
  return "?";
}

const char* to_string(SplitOption s) {
  switch (s) {
    case SplitOption::lls: return "lls";
    case SplitOption::cu_du: return "cu-du";
    case SplitOption::gnb_onboard: return "gnb";
  }
  return "?";
}

const char* to_string(AmfSite s) {
  return s == AmfSite::source_gs ? "source" : "target";
}

Scenario scenario_from_string(const std::string& text) {
  for (Scenario s : {Scenario::a, Scenario::b1, Scenario::b2, Scenario::c}) {
    if (text == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown scenario '" + text + "'");
}

SplitOption split_option_from_string(const std::string& text) {
  for (SplitOption s : {SplitOption::lls, SplitOption::cu_du, SplitOption::gnb_onboard}) {
    if (text == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown split option '" + text + "'");
}

AmfSite amf_site_from_string(const std::string& text) {
  if (text == "source") return AmfSite::source_gs;
  if (text == "target") return AmfSite::target_gs;
  throw std::invalid_argument("unknown AMF site '" + text + "'");
}

std::string label(const Deployment& dep) {
  std::string out = std::string{to_string(dep.scenario)} + "/" + to_string(dep.split);
  if (dep.scenario == Scenario::c) out += std::string{"/amf-"} + to_string(dep.amf_site);
  return out;
}

const char* to_string(NodeId n) {
  switch (n) {
    case NodeId::ue: return "UE";
    case NodeId::sat1: return "SAT1";
    case NodeId::sat2: return "SAT2";
    case NodeId::gs1: return "GS1";
    case NodeId::gs2: return "GS2";
  }
  return "?";
}

bool is_satellite(NodeId n) { return n == NodeId::sat1 || n == NodeId::sat2; }
bool is_ground(NodeId n) { return n == NodeId::gs1 || n == NodeId::gs2; }

const char* to_string(Function f) {
  switch (f) {
    case Function::ue: return "UE";
    case Function::s_ru: return "sRU";
    case Function::t_ru: return "tRU";
    case Function::s_du: return "sDU";
    case Function::t_du: return "tDU";
    case Function::s_cu: return "sCU";
    case Function::t_cu: return "tCU";
    case Function::amf_upf: return "AMF/UPF";
  }
  return "?";
}

const char* to_string(ChoVariant v) {
  switch (v) {
    case ChoVariant::intra_du: return "Intra-DU";
    case ChoVariant::inter_du: return "Inter-DU";
    case ChoVariant::inter_gnb_intra_amf: return "Inter-gNB-Intra-AMF";
  }
  return "?";
}

Topology::Topology(Deployment dep, std::vector<Link> links, std::map<Function, NodeId> placement)
    : dep_(dep), links_(std::move(links)), placement_(std::move(placement)) {
  for (const Link& l : links_) {
    if (!std::isfinite(l.delay_ms) || l.delay_ms < 0.0) {
      throw std::invalid_argument("link delays must be finite and non-negative");
    }
  }
  const auto all = nodes();
  for (NodeId from : all) {
    if (from == NodeId::ue) continue;
    for (NodeId to : all) {
      if (to == NodeId::ue) continue;
      if (auto r = compute_route(from, to)) routes_.emplace(std::pair{from, to}, std::move(*r));
    }
  }
}

std::vector<NodeId> Topology::nodes() const {
  std::vector<NodeId> out;
  auto add = [&](NodeId n) {
    if (std::ranges::find(out, n) == out.end()) out.push_back(n);
  };
  for (const Link& l : links_) {
    add(l.a);
    add(l.b);
  }
  for (const auto& [fn, node] : placement_) add(node);
  std::ranges::sort(out);
  return out;
}

std::vector<Function> Topology::hosted(NodeId node) const {
  std::vector<Function> out;
  for (const auto& [fn, n] : placement_) {
    if (n == node) out.push_back(fn);
  }
  return out;
}

NodeId Topology::node_of(Function f) const {
  auto it = placement_.find(f);
  if (it == placement_.end()) {
    throw std::invalid_argument(std::string{"function "} + to_string(f) + " is not placed");
  }
  return it->second;
}

std::optional<NodeId> Topology::own_gateway(NodeId sat) const {
  for (const Link& l : links_) {
    if (l.cls != LinkClass::fl) continue;
    if (l.a == sat) return l.b;
    if (l.b == sat) return l.a;
  }
  return std::nullopt;
}

std::optional<ResolvedPath> Topology::restricted_shortest(NodeId from, NodeId to,
                                                          LinkClass allowed) const {
  if (from == to) return at_node(from);
  // Dijkstra over at most five nodes; ties go to the lower link index.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::map<NodeId, double> dist;
  std::map<NodeId, PathHop> via;
  std::vector<NodeId> open{from};
  dist[from] = 0.0;
  std::vector<NodeId> done;
  while (!open.empty()) {
    auto best = std::ranges::min_element(open, {}, [&](NodeId n) { return dist[n]; });
    const NodeId u = *best;
    open.erase(best);
    done.push_back(u);
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const Link& l = links_[i];
      if (l.cls != allowed || (l.a != u && l.b != u)) continue;
      const NodeId v = l.a == u ? l.b : l.a;
      if (std::ranges::find(done, v) != done.end()) continue;
      const double cand = dist[u] + l.delay_ms;
      const double cur = dist.contains(v) ? dist[v] : inf;
      if (cand < cur) {
        dist[v] = cand;
        via[v] = {i, u, v};
        if (std::ranges::find(open, v) == open.end()) open.push_back(v);
      }
    }
  }
  if (!via.contains(to)) return std::nullopt;

  ResolvedPath p;
  for (NodeId n = to; n != from; n = via.at(n).from) p.hops.push_back(via.at(n));
  std::ranges::reverse(p.hops);
  p.nodes.push_back(from);
  for (const PathHop& h : p.hops) {
    p.nodes.push_back(h.to);
    p.delay_ms += links_[h.link].delay_ms;
  }
  return p;
}

// Satellites talk among themselves over ISL and ground sites over IGSL. A
// satellite with its own feeder link always reaches the ground through it;
// one without relays over ISL to the nearest satellite that has one.
std::optional<ResolvedPath> Topology::compute_route(NodeId from, NodeId to) const {
  if (from == to) return at_node(from);
  if (is_satellite(from) && is_satellite(to)) return restricted_shortest(from, to, LinkClass::isl);
  if (is_ground(from) && is_ground(to)) return restricted_shortest(from, to, LinkClass::igsl);
  if (is_ground(from)) {
    auto r = compute_route(to, from);
    if (!r) return std::nullopt;
    return reversed(*r);
  }

  auto via_gateway = [&](NodeId sat) -> std::optional<ResolvedPath> {
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const Link& l = links_[i];
      if (l.cls != LinkClass::fl || (l.a != sat && l.b != sat)) continue;
      const NodeId gs = l.a == sat ? l.b : l.a;
      auto ground = restricted_shortest(gs, to, LinkClass::igsl);
      if (!ground) return std::nullopt;
      ResolvedPath p;
      p.nodes = {sat, gs};
      p.hops.push_back({i, sat, gs});
      p.delay_ms = l.delay_ms;
      append(p, *ground);
      return p;
    }
    return std::nullopt;
  };

  if (own_gateway(from)) return via_gateway(from);

  std::optional<ResolvedPath> best;
  for (NodeId sat : {NodeId::sat1, NodeId::sat2}) {
    if (sat == from || !own_gateway(sat)) continue;
    auto space = restricted_shortest(from, sat, LinkClass::isl);
    if (!space) continue;
    auto down = via_gateway(sat);
    if (!down) continue;
    append(*space, *down);
    if (!best || space->delay_ms < best->delay_ms) best = std::move(space);
  }
  return best;
}

std::optional<ResolvedPath> Topology::route(NodeId from, NodeId to) const {
  auto it = routes_.find({from, to});
  if (it == routes_.end()) return std::nullopt;
  return it->second;
}

ResolvedPath Topology::node_path(NodeId from, NodeId to) const {
  auto r = route(from, to);
  if (!r) {
    throw std::logic_error(std::string{"no route from "} + to_string(from) + " to " +
                           to_string(to) + " in " + label(dep_));
  }
  return *r;
}

ResolvedPath Topology::uu_path_from_ue(Function to) const {
  const auto chain = chain_of(to);
  if (!chain) {
    throw std::invalid_argument(std::string{"UE cannot address "} + to_string(to) +
                                " directly over Uu");
  }
  const auto fns = chain_functions(*chain);
  const NodeId access = node_of(fns[0]);

  ResolvedPath p = at_node(NodeId::ue);
  bool found = false;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (l.cls != LinkClass::sl) continue;
    if ((l.a == NodeId::ue && l.b == access) || (l.b == NodeId::ue && l.a == access)) {
      p.hops.push_back({i, NodeId::ue, access});
      p.nodes.push_back(access);
      p.delay_ms = l.delay_ms;
      found = true;
      break;
    }
  }
  if (!found) {
    throw std::logic_error(std::string{"no service link to "} + to_string(access));
  }
  for (int level = 1; level <= chain_level(to); ++level) {
    append(p, node_path(node_of(fns[level - 1]), node_of(fns[level])));
  }
  return p;
}

ResolvedPath Topology::resolve_path(Function from, Function to) const {
  if (from == Function::ue && to == Function::ue) {
    throw std::invalid_argument("UE-to-UE messages are not modeled");
  }
  if (from == Function::ue) return uu_path_from_ue(to);
  if (to == Function::ue) return reversed(uu_path_from_ue(from));
  return node_path(node_of(from), node_of(to));
}

Topology build_topology(const Deployment& dep, const LinkDelays& d) {
  std::vector<Link> links;
  links.push_back({NodeId::ue, NodeId::sat1, LinkClass::sl, d.sl_ms});
  NodeId target_sat = NodeId::sat2;
  NodeId target_gs = NodeId::gs1;
  switch (dep.scenario) {
    case Scenario::a:
      target_sat = NodeId::sat1;
      links.push_back({NodeId::sat1, NodeId::gs1, LinkClass::fl, d.fl_ms});
      break;
    case Scenario::b1:
      links.push_back({NodeId::ue, NodeId::sat2, LinkClass::sl, d.sl_ms});
      links.push_back({NodeId::sat1, NodeId::gs1, LinkClass::fl, d.fl_ms});
      links.push_back({NodeId::sat1, NodeId::sat2, LinkClass::isl, d.isl_ms});
      break;
    case Scenario::b2:
      links.push_back({NodeId::ue, NodeId::sat2, LinkClass::sl, d.sl_ms});
      links.push_back({NodeId::sat2, NodeId::gs1, LinkClass::fl, d.fl_ms});
      links.push_back({NodeId::sat1, NodeId::sat2, LinkClass::isl, d.isl_ms});
      break;
    case Scenario::c:
      target_gs = NodeId::gs2;
      links.push_back({NodeId::ue, NodeId::sat2, LinkClass::sl, d.sl_ms});
      links.push_back({NodeId::sat1, NodeId::gs1, LinkClass::fl, d.fl_ms});
      links.push_back({NodeId::sat2, NodeId::gs2, LinkClass::fl, d.fl_ms});
      links.push_back({NodeId::sat1, NodeId::sat2, LinkClass::isl, d.isl_ms});
      links.push_back({NodeId::gs1, NodeId::gs2, LinkClass::igsl, d.igsl_ms});
      break;
  }

  std::map<Function, NodeId> at;
  at[Function::ue] = NodeId::ue;
  auto place_chain = [&](Function ru, Function du, Function cu, NodeId sat, NodeId gs) {
    at[ru] = sat;
    at[du] = dep.split == SplitOption::lls ? gs : sat;
    at[cu] = dep.split == SplitOption::gnb_onboard ? sat : gs;
  };
  place_chain(Function::s_ru, Function::s_du, Function::s_cu, NodeId::sat1, NodeId::gs1);
  place_chain(Function::t_ru, Function::t_du, Function::t_cu, target_sat, target_gs);

  at[Function::amf_upf] = NodeId::gs1;
  if (dep.scenario == Scenario::c && dep.amf_site == AmfSite::target_gs) {
    at[Function::amf_upf] = NodeId::gs2;
  }
  return Topology(dep, std::move(links), std::move(at));
}

ChoVariant select_procedure(const Deployment& dep) {
  switch (dep.scenario) {
    case Scenario::a: return ChoVariant::intra_du;
    case Scenario::c: return ChoVariant::inter_gnb_intra_amf;
    case Scenario::b1:
    case Scenario::b2:
      switch (dep.split) {
        case SplitOption::lls: return ChoVariant::intra_du;
        case SplitOption::cu_du: return ChoVariant::inter_du;
        case SplitOption::gnb_onboard: return ChoVariant::inter_gnb_intra_amf;
      }
  }
  return ChoVariant::intra_du;
}

std::vector<Deployment> default_deployments(AmfSite amf_site) {
  std::vector<Deployment> out;
  for (Scenario s : {Scenario::a, Scenario::b1, Scenario::b2, Scenario::c}) {
    for (SplitOption sp : {SplitOption::lls, SplitOption::cu_du, SplitOption::gnb_onboard}) {
      out.push_back({s, sp, amf_site});
    }
  }
  return out;
}

nlohmann::json to_json(const ResolvedPath& path, const Topology& topo) {
  nlohmann::json hops = nlohmann::json::array();
  for (const PathHop& h : path.hops) {
    const Link& l = topo.links()[h.link];
    hops.push_back({{"class", to_string(l.cls)},
                    {"from", to_string(h.from)},
                    {"to", to_string(h.to)},
                    {"delay_ms", l.delay_ms}});
  }
  return hops;
}

nlohmann::json to_json(const Topology& topo) {
  const Deployment& dep = topo.deployment();
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId n : topo.nodes()) {
    nlohmann::json fns = nlohmann::json::array();
    for (Function f : topo.hosted(n)) fns.push_back(to_string(f));
    nodes.push_back({{"id", to_string(n)}, {"hosted_functions", fns}});
  }
  nlohmann::json links = nlohmann::json::array();
  for (const Link& l : topo.links()) {
    links.push_back({{"a", to_string(l.a)},
                     {"b", to_string(l.b)},
                     {"class", to_string(l.cls)},
                     {"delay_ms", l.delay_ms}});
  }
  nlohmann::json placement = nlohmann::json::object();
  for (const auto& [fn, node] : topo.placement()) placement[to_string(fn)] = to_string(node);
  return {{"deployment",
           {{"scenario", to_string(dep.scenario)},
            {"split", to_string(dep.split)},
            {"amf_site", to_string(dep.amf_site)}}},
          {"procedure", to_string(select_procedure(dep))},
          {"nodes", nodes},
          {"links", links},
          {"placement", placement}};
}

}  // namespace ntnsplit
