#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ntnsplit/geometry.hpp"

namespace ntnsplit {

enum class Scenario { a, b1, b2, c };
enum class SplitOption { lls, cu_du, gnb_onboard };
enum class AmfSite { source_gs, target_gs };

const char* to_string(Scenario s);
const char* to_string(SplitOption s);
const char* to_string(AmfSite s);
Scenario scenario_from_string(const std::string& text);
SplitOption split_option_from_string(const std::string& text);
AmfSite amf_site_from_string(const std::string& text);

/// Scenario letter without the B variant digit ("A", "B", "C").
const char* scenario_family(Scenario s);

struct Deployment {
  Scenario scenario = Scenario::a;
  SplitOption split = SplitOption::gnb_onboard;
  AmfSite amf_site = AmfSite::source_gs;  // only meaningful for scenario C

  bool operator==(const Deployment&) const = default;
};

std::string label(const Deployment& dep);

enum class NodeId { ue, sat1, sat2, gs1, gs2 };

const char* to_string(NodeId n);
bool is_satellite(NodeId n);
bool is_ground(NodeId n);

/// Logical network functions of the source chain, target chain and core.
/// Functions shared by both chains are placed on the same node.
enum class Function { ue, s_ru, t_ru, s_du, t_du, s_cu, t_cu, amf_upf };

inline constexpr Function kAllFunctions[] = {Function::ue,   Function::s_ru, Function::t_ru,
                                             Function::s_du, Function::t_du, Function::s_cu,
                                             Function::t_cu, Function::amf_upf};

const char* to_string(Function f);

struct Link {
  NodeId a;
  NodeId b;
  LinkClass cls;
  double delay_ms;
};

struct PathHop {
  std::size_t link;  // index into Topology::links()
  NodeId from;
  NodeId to;
};

struct ResolvedPath {
  std::vector<PathHop> hops;
  std::vector<NodeId> nodes;  // hops.size() + 1 entries, or just the origin
  double delay_ms = 0.0;

  std::size_t relay_count() const { return nodes.size() > 2 ? nodes.size() - 2 : 0; }
};

enum class ChoVariant { intra_du, inter_du, inter_gnb_intra_amf };

const char* to_string(ChoVariant v);

class Topology {
 public:
  Topology(Deployment dep, std::vector<Link> links, std::map<Function, NodeId> placement);

  const Deployment& deployment() const { return dep_; }
  const std::vector<Link>& links() const { return links_; }
  const std::map<Function, NodeId>& placement() const { return placement_; }
  std::vector<NodeId> nodes() const;
  std::vector<Function> hosted(NodeId node) const;

  /// Throws std::invalid_argument for an unplaced function.
  NodeId node_of(Function f) const;

  /// Node-to-node route between two network (non-UE) nodes.
  std::optional<ResolvedPath> route(NodeId from, NodeId to) const;

  /// Path a message takes between two functions. Messages to or from the UE
  /// use the serving link of the chain the other endpoint belongs to, then
  /// climb RU -> DU -> CU hosts of that chain.
  ResolvedPath resolve_path(Function from, Function to) const;

 private:
  ResolvedPath node_path(NodeId from, NodeId to) const;
  ResolvedPath uu_path_from_ue(Function to) const;
  std::optional<ResolvedPath> compute_route(NodeId from, NodeId to) const;
  std::optional<ResolvedPath> restricted_shortest(NodeId from, NodeId to, LinkClass allowed) const;
  std::optional<NodeId> own_gateway(NodeId sat) const;

  Deployment dep_;
  std::vector<Link> links_;
  std::map<Function, NodeId> placement_;
  std::map<std::pair<NodeId, NodeId>, ResolvedPath> routes_;
};

/// Physical network and function placement for one deployment.
/// Throws std::invalid_argument for negative or non-finite delays.
Topology build_topology(const Deployment& dep, const LinkDelays& delays);

ChoVariant select_procedure(const Deployment& dep);

/// A(3) + B1(3) + B2(3) + C(3), each scenario in LLS, CU-DU, gNB order.
std::vector<Deployment> default_deployments(AmfSite amf_site = AmfSite::source_gs);

nlohmann::json to_json(const Topology& topo);
nlohmann::json to_json(const ResolvedPath& path, const Topology& topo);

}  // namespace ntnsplit
