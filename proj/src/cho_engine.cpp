#include "ntnsplit/cho_engine.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ntnsplit {

namespace {

using F = Function;

MessageSpec msg(std::string name, Phase phase, F from, F to, std::vector<std::string> deps) {
  MessageSpec m;
  m.name = std::move(name);
  m.phase = phase;
  m.from = from;
  m.to = to;
  m.deps = std::move(deps);
  return m;
}

MessageSpec local_step(std::string name, Phase phase, LocalStep step,
                       std::vector<std::string> deps) {
  MessageSpec m;
  m.name = std::move(name);
  m.phase = phase;
  m.local = step;
  m.deps = std::move(deps);
  return m;
}

std::string numbered(const std::string& base, int i) {
  return i == 0 ? base : base + "#" + std::to_string(i + 1);
}

// Setup request/response pairs towards every candidate target; returns the
// names of the responses that the UE configuration waits for.
std::vector<std::string> add_candidate_pairs(std::vector<MessageSpec>& out, int count,
                                             const std::string& req, const std::string& resp,
                                             F source, F target) {
  std::vector<std::string> responses;
  for (int i = 0; i < count; ++i) {
    out.push_back(msg(numbered(req, i), Phase::setup, source, target, {}));
    out.push_back(msg(numbered(resp, i), Phase::setup, target, source, {numbered(req, i)}));
    responses.push_back(numbered(resp, i));
  }
  return responses;
}

// RRC CHO exchange over Uu, identical in every variant.
void add_uu_exchange(std::vector<MessageSpec>& out, std::vector<std::string> config_deps,
                     const CatalogOptions& opts) {
  out.push_back(msg("CHO_CONFIG", Phase::setup, F::s_cu, F::ue, std::move(config_deps)));
  out.push_back(msg("CHO_CONFIG_COMPLETE", Phase::setup, F::ue, F::s_cu, {"CHO_CONFIG"}));

  MessageSpec ssb = local_step("SSB_ACQ", Phase::buffer, LocalStep::ssb_acquisition, {});
  ssb.after_trigger = true;
  out.push_back(std::move(ssb));
  out.push_back(msg("MSG1", Phase::buffer, F::ue, F::t_du, {"SSB_ACQ"}));
  out.push_back(msg("MSG2", Phase::buffer, F::t_du, F::ue, {"MSG1"}));
  out.push_back(msg("MSG3", Phase::buffer, F::ue, F::t_cu, {"MSG2"}));
  out.push_back(msg("MSG4", Phase::buffer, opts.msg4_from_du ? F::t_du : F::t_cu, F::ue, {"MSG3"}));
}

}  // namespace

const char* to_string(Phase p) {
  switch (p) {
    case Phase::setup: return "setup";
    case Phase::buffer: return "buffer";
    case Phase::execution: return "execution";
  }
  return "?";
}

const MessageSpec* ProcedureCatalog::find(const std::string& name) const {
  auto it = std::ranges::find(messages, name, &MessageSpec::name);
  return it == messages.end() ? nullptr : &*it;
}

const TraceEvent* TimelineTrace::find(const std::string& name) const {
  auto it = std::ranges::find(events, name, &TraceEvent::name);
  return it == events.end() ? nullptr : &*it;
}

ProcedureCatalog procedure_catalog(ChoVariant variant, const CatalogOptions& opts) {
  if (opts.candidate_count < 1) throw std::invalid_argument("candidate_count must be >= 1");

  ProcedureCatalog cat;
  cat.variant = variant;
  auto& out = cat.messages;
  switch (variant) {
    case ChoVariant::intra_du:
      add_uu_exchange(out, {}, opts);
      break;

    case ChoVariant::inter_du: {
      auto responses = add_candidate_pairs(out, opts.candidate_count, "UE_CTX_SETUP_REQ",
                                           "UE_CTX_SETUP_RESP", F::s_cu, F::t_du);
      add_uu_exchange(out, std::move(responses), opts);
      out.push_back(msg("ACCESS_SUCCESS", Phase::buffer, F::t_du, F::s_cu, {"MSG3"}));
      out.push_back(msg("STOP_DATA", Phase::buffer, F::s_cu, F::s_du, {"ACCESS_SUCCESS"}));
      out.push_back(
          msg("UE_CTX_RELEASE", Phase::execution, F::s_cu, F::s_du, {"MSG4", "STOP_DATA"}));
      break;
    }

    case ChoVariant::inter_gnb_intra_amf: {
      auto responses = add_candidate_pairs(out, opts.candidate_count, "HO_REQUEST",
                                           "HO_REQUEST_ACK", F::s_cu, F::t_cu);
      add_uu_exchange(out, std::move(responses), opts);
      out.push_back(msg("HO_SUCCESS", Phase::buffer, F::t_cu, F::s_cu, {"MSG4"}));
      out.push_back(msg("PATH_SWITCH_REQ", Phase::execution, F::t_cu, F::amf_upf, {"MSG4"}));
      out.push_back(local_step("CN_API", Phase::execution, LocalStep::cn_api, {"PATH_SWITCH_REQ"}));
      out.push_back(msg("END_MARKER", Phase::execution, F::amf_upf, F::s_cu, {"CN_API"}));
      out.push_back(msg("END_MARKER_FWD", Phase::execution, F::s_cu, F::t_cu, {"END_MARKER"}));
      out.push_back(msg("PATH_SWITCH_ACK", Phase::execution, F::amf_upf, F::t_cu, {"CN_API"}));
      out.push_back(
          msg("UE_CTX_RELEASE", Phase::execution, F::t_cu, F::s_cu, {"PATH_SWITCH_ACK"}));
      break;
    }
  }
  return cat;
}

void TimingConfig::validate() const {
  if (!(per_message_processing_ms >= 0.0) || !(ssb_acquisition_ms >= 0.0) ||
      !(cn_api_total_ms >= 0.0) || !(trigger_offset_ms >= 0.0)) {
    throw std::invalid_argument("timing constants must be non-negative");
  }
}

double local_delay_ms(LocalStep step, const TimingConfig& timing) {
  switch (step) {
    case LocalStep::none: return 0.0;
    case LocalStep::ssb_acquisition: return timing.ssb_acquisition_ms;
    case LocalStep::cn_api: return timing.cn_api_total_ms;
  }
  return 0.0;
}

namespace {

// Explicit dependencies plus setup -> after-trigger edges, as index lists.
std::vector<std::vector<std::size_t>> predecessor_lists(const ProcedureCatalog& catalog) {
  const auto& ms = catalog.messages;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!index.emplace(ms[i].name, i).second) {
      throw std::invalid_argument("duplicate message name '" + ms[i].name + "'");
    }
  }
  std::vector<std::vector<std::size_t>> preds(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (const auto& d : ms[i].deps) {
      auto it = index.find(d);
      if (it == index.end()) {
        throw std::invalid_argument("message '" + ms[i].name + "' depends on unknown '" + d + "'");
      }
      preds[i].push_back(it->second);
    }
    if (ms[i].after_trigger) {
      for (std::size_t j = 0; j < ms.size(); ++j) {
        if (ms[j].phase == Phase::setup && j != i) preds[i].push_back(j);
      }
    }
  }
  return preds;
}

}  // namespace

std::vector<std::size_t> schedule_order(const ProcedureCatalog& catalog) {
  const auto preds = predecessor_lists(catalog);
  const std::size_t n = preds.size();
  std::vector<std::size_t> pending(n);
  std::vector<std::vector<std::size_t>> succs(n);
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = preds[i].size();
    for (std::size_t p : preds[i]) succs[p].push_back(i);
  }

  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    auto it = std::ranges::min_element(ready);
    const std::size_t u = *it;
    ready.erase(it);
    order.push_back(u);
    for (std::size_t v : succs[u]) {
      if (--pending[v] == 0) ready.push_back(v);
    }
  }
  if (order.size() != n) throw std::invalid_argument("procedure catalog has a dependency cycle");
  return order;
}

void validate_catalog(const ProcedureCatalog& catalog) {
  schedule_order(catalog);
  for (const auto& m : catalog.messages) {
    if (m.after_trigger && m.phase == Phase::setup) {
      throw std::invalid_argument("setup message '" + m.name + "' cannot wait for the trigger");
    }
    for (const auto& d : m.deps) {
      const MessageSpec* dep = catalog.find(d);
      if (dep->phase > m.phase) {
        throw std::invalid_argument("message '" + m.name + "' (" + to_string(m.phase) +
                                    ") waits on later-phase '" + d + "'");
      }
    }
    if (!m.is_local() && m.from == Function::ue && m.to == Function::ue) {
      throw std::invalid_argument("message '" + m.name + "' has no network endpoint");
    }
  }
}

TimelineTrace evaluate_timeline(const ProcedureCatalog& catalog, const Topology& topo,
                                const TimingConfig& timing) {
  timing.validate();
  validate_catalog(catalog);
  const auto order = schedule_order(catalog);
  const auto& ms = catalog.messages;

  TimelineTrace trace;
  trace.variant = catalog.variant;
  trace.events.resize(ms.size());
  std::map<std::string, double> arrival;

  bool any_trigger = false;
  for (std::size_t idx : order) {
    const MessageSpec& m = ms[idx];
    TraceEvent& ev = trace.events[idx];
    ev.name = m.name;
    ev.phase = m.phase;
    ev.from = m.from;
    ev.to = m.to;
    ev.local = m.is_local();

    double start = 0.0;
    for (const auto& d : m.deps) start = std::max(start, arrival.at(d));
    if (m.after_trigger) {
      if (!any_trigger) {
        // Every setup message precedes this one in the schedule order.
        for (std::size_t j = 0; j < ms.size(); ++j) {
          if (ms[j].phase == Phase::setup) {
            trace.setup_end_ms = std::max(trace.setup_end_ms, arrival.at(ms[j].name));
          }
        }
        trace.trigger_ms = trace.setup_end_ms + timing.trigger_offset_ms;
        any_trigger = true;
      }
      start = std::max(start, trace.trigger_ms);
    }
    ev.start_ms = start;

    if (ev.local) {
      ev.arrival_ms = start + local_delay_ms(m.local, timing);
    } else {
      ev.path = topo.resolve_path(m.from, m.to);
      ev.elided = ev.path.hops.empty();
      for (const PathHop& h : ev.path.hops) ev.links.push_back(topo.links()[h.link].cls);
      if (ev.elided) {
        ev.arrival_ms = start;
      } else {
        double processing = timing.per_message_processing_ms;
        if (timing.processing_at_relays) {
          processing *= static_cast<double>(1 + ev.path.relay_count());
        }
        ev.arrival_ms = start + ev.path.delay_ms + processing;
      }
    }
    arrival[m.name] = ev.arrival_ms;
  }

  if (!any_trigger) {
    for (const auto& ev : trace.events) {
      if (ev.phase == Phase::setup) trace.setup_end_ms = std::max(trace.setup_end_ms, ev.arrival_ms);
    }
    trace.trigger_ms = trace.setup_end_ms;
  }
  for (const auto& ev : trace.events) trace.completion_ms = std::max(trace.completion_ms, ev.arrival_ms);

  if (const TraceEvent* msg4 = trace.find("MSG4")) {
    trace.buffer_end_ms = msg4->arrival_ms;
  } else {
    trace.buffer_end_ms = trace.trigger_ms;
    for (const auto& ev : trace.events) {
      if (ev.phase == Phase::buffer) trace.buffer_end_ms = std::max(trace.buffer_end_ms, ev.arrival_ms);
    }
  }

  if (catalog.variant == ChoVariant::inter_gnb_intra_amf) {
    trace.notes.emplace_back(
        "downlink user data is forwarded source gNB -> target gNB between MSG4 and the path "
        "switch; user-plane traffic is not counted");
  }
  for (const auto& ev : trace.events) {
    if (ev.elided) trace.notes.push_back(ev.name + " stays on one node and is elided");
  }
  return trace;
}

PhaseDurations phase_durations(const TimelineTrace& trace) {
  if (trace.events.empty()) return {};
  PhaseDurations p;
  p.setup_ms = trace.setup_end_ms;
  p.buffer_ms = trace.buffer_end_ms - trace.trigger_ms;
  p.execution_ms = trace.completion_ms - trace.buffer_end_ms;
  p.total_ms = trace.completion_ms;
  return p;
}

int MessageCounts::of(LinkClass cls) const {
  auto it = total.find(cls);
  return it == total.end() ? 0 : it->second;
}

int MessageCounts::of(Phase phase, LinkClass cls) const {
  auto it = by_phase.find(phase);
  if (it == by_phase.end()) return 0;
  auto jt = it->second.find(cls);
  return jt == it->second.end() ? 0 : jt->second;
}

int MessageCounts::crossings() const {
  int sum = 0;
  for (const auto& [cls, n] : total) sum += n;
  return sum;
}

MessageCounts message_counts(const TimelineTrace& trace) {
  MessageCounts c;
  for (LinkClass cls : kAllLinkClasses) {
    c.total[cls] = 0;
    for (Phase p : {Phase::setup, Phase::buffer, Phase::execution}) c.by_phase[p][cls] = 0;
  }
  for (const auto& ev : trace.events) {
    if (!ev.transmitted()) continue;
    for (LinkClass cls : ev.links) {
      ++c.total[cls];
      ++c.by_phase[ev.phase][cls];
    }
  }
  return c;
}

nlohmann::json to_json(const TimelineTrace& trace) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& ev : trace.events) {
    nlohmann::json links = nlohmann::json::array();
    for (LinkClass cls : ev.links) links.push_back(to_string(cls));
    nlohmann::json j = {{"name", ev.name},
                        {"phase", to_string(ev.phase)},
                        {"start_ms", ev.start_ms},
                        {"arrival_ms", ev.arrival_ms},
                        {"links", links},
                        {"local", ev.local},
                        {"elided", ev.elided}};
    if (!ev.local) {
      j["from"] = to_string(ev.from);
      j["to"] = to_string(ev.to);
    }
    events.push_back(std::move(j));
  }
  return {{"procedure", to_string(trace.variant)},
          {"setup_end_ms", trace.setup_end_ms},
          {"trigger_ms", trace.trigger_ms},
          {"buffer_end_ms", trace.buffer_end_ms},
          {"completion_ms", trace.completion_ms},
          {"notes", trace.notes},
          {"events", events}};
}

}  // namespace ntnsplit
