#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "ntnsplit/cho_engine.hpp"

using namespace ntnsplit;

namespace {

LinkDelays table_delays() {
  LinkDelays d;
  d.sl_ms = 3.59;
  d.fl_ms = 6.45;
  d.isl_ms = 7.28;
  d.igsl_ms = 7.99;
  return d;
}

TimelineTrace run(Scenario s, SplitOption o, const LinkDelays& d = table_delays(),
                  const TimingConfig& t = {}, const CatalogOptions& c = {}) {
  const Deployment dep{s, o};
  return evaluate_timeline(procedure_catalog(select_procedure(dep), c), build_topology(dep, d), t);
}

// Every linear extension of the precedence relation, each evaluated by a
// plain sequential pass. Returns the per-message arrival times of each order.
struct BruteForce {
  std::vector<std::vector<double>> arrivals;
  std::vector<double> setup_end;
};

BruteForce enumerate_orders(const ProcedureCatalog& cat, const Topology& topo,
                            const TimingConfig& timing) {
  const auto& ms = cat.messages;
  const std::size_t n = ms.size();
  std::vector<std::vector<std::size_t>> preds(n);
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < n; ++i) {
      if (ms[i].name == name) return i;
    }
    throw std::logic_error("unknown " + name);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& d : ms[i].deps) preds[i].push_back(index_of(d));
    if (ms[i].after_trigger) {
      for (std::size_t j = 0; j < n; ++j) {
        if (ms[j].phase == Phase::setup) preds[i].push_back(j);
      }
    }
  }

  BruteForce out;
  std::vector<std::size_t> order;
  std::vector<bool> used(n, false);
  std::function<void()> dfs = [&] {
    if (order.size() == n) {
      std::vector<double> arr(n, 0.0);
      double setup_end = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        const MessageSpec& m = ms[i];
        double start = 0.0;
        for (std::size_t p : preds[i]) {
          if (!m.after_trigger || ms[p].phase != Phase::setup) start = std::max(start, arr[p]);
        }
        if (m.after_trigger) {
          for (std::size_t j = 0; j < n; ++j) {
            if (ms[j].phase == Phase::setup) setup_end = std::max(setup_end, arr[j]);
          }
          start = std::max(start, setup_end + timing.trigger_offset_ms);
        }
        double cost = 0.0;
        if (m.local == LocalStep::ssb_acquisition) {
          cost = timing.ssb_acquisition_ms;
        } else if (m.local == LocalStep::cn_api) {
          cost = timing.cn_api_total_ms;
        } else {
          const ResolvedPath p = topo.resolve_path(m.from, m.to);
          if (!p.hops.empty()) cost = p.delay_ms + timing.per_message_processing_ms;
        }
        arr[i] = start + cost;
      }
      out.arrivals.push_back(arr);
      out.setup_end.push_back(setup_end);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (!std::ranges::all_of(preds[i], [&](std::size_t p) { return used[p]; })) continue;
      used[i] = true;
      order.push_back(i);
      dfs();
      order.pop_back();
      used[i] = false;
    }
  };
  dfs();
  return out;
}

int transmitted(const ProcedureCatalog& c) {
  return static_cast<int>(std::ranges::count_if(c.messages, [](const auto& m) { return !m.is_local(); }));
}

}  // namespace

TEST_CASE("catalog sizes") {
  const auto intra = procedure_catalog(ChoVariant::intra_du);
  CHECK(transmitted(intra) == 6);
  CHECK(intra.messages.size() == 7);

  const auto inter_du = procedure_catalog(ChoVariant::inter_du);
  CHECK(inter_du.messages.size() == 12);
  CHECK(transmitted(inter_du) == 11);

  const auto gnb = procedure_catalog(ChoVariant::inter_gnb_intra_amf);
  CHECK(gnb.messages.size() == 16);
  CHECK(std::ranges::count_if(gnb.messages, [](const auto& m) {
          return m.local == LocalStep::cn_api;
        }) == 1);
  CHECK(local_delay_ms(LocalStep::cn_api, TimingConfig{}) == 50.0);

  for (auto v : {ChoVariant::intra_du, ChoVariant::inter_du, ChoVariant::inter_gnb_intra_amf}) {
    const auto c = procedure_catalog(v);
    CHECK_NOTHROW(validate_catalog(c));
    for (const char* name : {"MSG1", "MSG2", "MSG3", "MSG4"}) {
      REQUIRE(c.find(name) != nullptr);
      CHECK(c.find(name)->phase == Phase::buffer);
    }
  }
}

TEST_CASE("candidate count adds setup pairs") {
  CatalogOptions o;
  o.candidate_count = 3;
  const auto c = procedure_catalog(ChoVariant::inter_gnb_intra_amf, o);
  CHECK(c.messages.size() == 20);
  CHECK(c.find("HO_REQUEST#3") != nullptr);
  CHECK(c.find("CHO_CONFIG")->deps.size() == 3);
  CHECK(procedure_catalog(ChoVariant::intra_du, o).messages.size() == 7);
  o.candidate_count = 0;
  CHECK_THROWS_AS(procedure_catalog(ChoVariant::inter_du, o), std::invalid_argument);
}

TEST_CASE("earliest start equals every topological order") {
  struct Case {
    Scenario s;
    SplitOption o;
  };
  const Case cases[] = {
      {Scenario::a, SplitOption::lls},        {Scenario::a, SplitOption::gnb_onboard},
      {Scenario::b1, SplitOption::cu_du},     {Scenario::b2, SplitOption::cu_du},
      {Scenario::b1, SplitOption::gnb_onboard}, {Scenario::c, SplitOption::lls},
      {Scenario::c, SplitOption::gnb_onboard},
  };
  TimingConfig timing;
  timing.trigger_offset_ms = 3.0;
  for (const auto& c : cases) {
    const Deployment dep{c.s, c.o};
    CAPTURE(label(dep));
    const auto cat = procedure_catalog(select_procedure(dep));
    const auto topo = build_topology(dep, table_delays());
    const auto trace = evaluate_timeline(cat, topo, timing);
    const auto bf = enumerate_orders(cat, topo, timing);
    REQUIRE(!bf.arrivals.empty());
    if (cat.variant != ChoVariant::intra_du) CHECK(bf.arrivals.size() > 1);
    for (std::size_t k = 0; k < bf.arrivals.size(); ++k) {
      CHECK(bf.setup_end[k] == doctest::Approx(trace.setup_end_ms));
      for (std::size_t i = 0; i < cat.messages.size(); ++i) {
        CHECK(bf.arrivals[k][i] == doctest::Approx(trace.events[i].arrival_ms));
      }
    }
  }
}

TEST_CASE("hand-summed anchors for scenario A") {
  // Sequential chains over the reference row; processing 1 ms per message.
  const double sl = 3.59, fl = 6.45, proc = 1.0, ssb = 20.0;

  const auto gnb = phase_durations(run(Scenario::a, SplitOption::gnb_onboard));
  const double gnb_buffer = ssb + 4 * (sl + proc);
  const double gnb_total = 2 * (sl + proc) + gnb_buffer;
  CHECK(gnb_buffer == doctest::Approx(38.36));
  CHECK(gnb_total == doctest::Approx(47.54));
  CHECK(std::abs(gnb.buffer_ms - gnb_buffer) < 1e-9);
  CHECK(std::abs(gnb.total_ms - gnb_total) < 1e-9);
  CHECK(gnb.execution_ms == 0.0);

  const auto lls = phase_durations(run(Scenario::a, SplitOption::lls));
  const double lls_buffer = ssb + 4 * (sl + fl + proc);
  const double lls_setup = 2 * (sl + fl + proc);
  CHECK(lls_buffer == doctest::Approx(64.16));
  CHECK(std::abs(lls.buffer_ms - lls_buffer) < 1e-9);
  CHECK(std::abs(lls.setup_ms - lls_setup) < 1e-9);
  CHECK(lls.total_ms == doctest::Approx(86.24));
}

TEST_CASE("trigger offset shifts buffer end and completion only") {
  for (const Deployment& dep : default_deployments()) {
    CAPTURE(label(dep));
    TimingConfig t0, t1;
    t1.trigger_offset_ms = 12.5;
    const auto a = run(dep.scenario, dep.split, table_delays(), t0);
    const auto b = run(dep.scenario, dep.split, table_delays(), t1);
    CHECK(b.setup_end_ms == a.setup_end_ms);
    CHECK(b.buffer_end_ms == doctest::Approx(a.buffer_end_ms + 12.5));
    CHECK(b.completion_ms == doctest::Approx(a.completion_ms + 12.5));
    CHECK(phase_durations(b).buffer_ms == doctest::Approx(phase_durations(a).buffer_ms));
  }
  TimingConfig t;
  t.trigger_offset_ms = 10.0;
  CHECK(phase_durations(run(Scenario::a, SplitOption::lls, table_delays(), t)).total_ms ==
        doctest::Approx(96.24));
}

TEST_CASE("durations never decrease when a link gets slower") {
  const LinkDelays base = table_delays();
  for (const Deployment& dep : default_deployments()) {
    CAPTURE(label(dep));
    const auto p0 = phase_durations(run(dep.scenario, dep.split, base));
    for (LinkClass cls : kAllLinkClasses) {
      LinkDelays d = base;
      switch (cls) {
        case LinkClass::sl: d.sl_ms += 1.0; break;
        case LinkClass::fl: d.fl_ms += 1.0; break;
        case LinkClass::isl: d.isl_ms += 1.0; break;
        case LinkClass::igsl: d.igsl_ms += 1.0; break;
      }
      const auto p1 = phase_durations(run(dep.scenario, dep.split, d));
      CHECK(p1.setup_ms >= p0.setup_ms);
      CHECK(p1.total_ms >= p0.total_ms);
    }
  }
}

TEST_CASE("buffer lower bound and gNB-onboard independence") {
  const TimingConfig t;
  for (const Deployment& dep : default_deployments()) {
    const auto p = phase_durations(run(dep.scenario, dep.split));
    CHECK(p.buffer_ms >= t.ssb_acquisition_ms + 4 * t.per_message_processing_ms);
  }
  for (Scenario s : {Scenario::a, Scenario::b1, Scenario::b2, Scenario::c}) {
    const double ref = phase_durations(run(s, SplitOption::gnb_onboard)).buffer_ms;
    LinkDelays d = table_delays();
    d.fl_ms = 40.0;
    d.isl_ms = 0.5;
    d.igsl_ms = 100.0;
    CHECK(phase_durations(run(s, SplitOption::gnb_onboard, d)).buffer_ms == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("setup and buffer are affine in a uniform delay scale") {
  for (const Deployment& dep : default_deployments()) {
    CAPTURE(label(dep));
    std::vector<PhaseDurations> p;
    for (double k : {0.0, 1.0, 2.0, 3.5}) {
      p.push_back(phase_durations(run(dep.scenario, dep.split, table_delays().scaled(k))));
    }
    const double ds = p[1].setup_ms - p[0].setup_ms;
    const double db = p[1].buffer_ms - p[0].buffer_ms;
    CHECK(p[2].setup_ms == doctest::Approx(p[0].setup_ms + 2 * ds));
    CHECK(p[3].setup_ms == doctest::Approx(p[0].setup_ms + 3.5 * ds));
    CHECK(p[2].buffer_ms == doctest::Approx(p[0].buffer_ms + 2 * db));
    CHECK(p[3].buffer_ms == doctest::Approx(p[0].buffer_ms + 3.5 * db));
    CHECK(p[1].total_ms <= p[2].total_ms);
    CHECK(p[2].total_ms <= p[3].total_ms);
  }
}

TEST_CASE("per-link counts") {
  auto counts = [](Scenario s, SplitOption o) { return message_counts(run(s, o)); };
  const auto a_gnb = counts(Scenario::a, SplitOption::gnb_onboard);
  CHECK(a_gnb.of(LinkClass::sl) == 6);
  CHECK(a_gnb.of(LinkClass::fl) == 0);
  CHECK(a_gnb.of(LinkClass::isl) == 0);
  CHECK(a_gnb.of(LinkClass::igsl) == 0);

  const auto a_lls = counts(Scenario::a, SplitOption::lls);
  CHECK(a_lls.of(LinkClass::sl) == 6);
  CHECK(a_lls.of(LinkClass::fl) == 6);

  const auto b2 = counts(Scenario::b2, SplitOption::cu_du);
  CHECK(b2.of(LinkClass::sl) == 6);
  CHECK(b2.of(LinkClass::fl) == 9);
  CHECK(b2.of(LinkClass::isl) == 4);
  CHECK(b2.of(LinkClass::igsl) == 0);
}

TEST_CASE("counts add up across phases and events") {
  for (const Deployment& dep : default_deployments()) {
    const auto trace = run(dep.scenario, dep.split);
    const auto c = message_counts(trace);
    int hops = 0;
    for (const auto& ev : trace.events) {
      if (ev.transmitted()) hops += static_cast<int>(ev.links.size());
      if (ev.elided) CHECK(ev.arrival_ms == ev.start_ms);
    }
    CHECK(c.crossings() == hops);
    for (LinkClass cls : kAllLinkClasses) {
      CHECK(c.of(Phase::setup, cls) + c.of(Phase::buffer, cls) + c.of(Phase::execution, cls) ==
            c.of(cls));
    }
  }
}

TEST_CASE("relay processing and MSG4 from the DU") {
  TimingConfig t;
  t.processing_at_relays = true;
  const auto lls = phase_durations(run(Scenario::a, SplitOption::lls, table_delays(), t));
  CHECK(lls.buffer_ms == doctest::Approx(20 + 4 * (10.04 + 2)));

  CatalogOptions o;
  o.msg4_from_du = true;
  const auto cu_du = phase_durations(run(Scenario::a, SplitOption::cu_du, table_delays(), {}, o));
  // MSG1, MSG2 and MSG4 stay on the service link, MSG3 climbs to the CU.
  CHECK(cu_du.buffer_ms == doctest::Approx(20 + 3 * 4.59 + 11.04));
}

TEST_CASE("inter-gNB execution waits for the core") {
  const auto trace = run(Scenario::c, SplitOption::gnb_onboard);
  const auto* cn = trace.find("CN_API");
  const auto* req = trace.find("PATH_SWITCH_REQ");
  REQUIRE(cn);
  REQUIRE(req);
  CHECK(cn->start_ms == req->arrival_ms);
  CHECK(cn->arrival_ms == doctest::Approx(req->arrival_ms + 50.0));
  CHECK(trace.completion_ms == trace.find("UE_CTX_RELEASE")->arrival_ms);
  CHECK_FALSE(trace.notes.empty());
}

TEST_CASE("malformed catalogs") {
  const auto topo = build_topology({Scenario::a, SplitOption::lls}, table_delays());
  ProcedureCatalog cyc;
  cyc.messages.push_back({"X", Phase::setup, Function::ue, Function::s_cu, {"Y"}, LocalStep::none, false});
  cyc.messages.push_back({"Y", Phase::setup, Function::s_cu, Function::ue, {"X"}, LocalStep::none, false});
  CHECK_THROWS_AS(schedule_order(cyc), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_timeline(cyc, topo, {}), std::invalid_argument);

  ProcedureCatalog unknown;
  unknown.messages.push_back({"X", Phase::setup, Function::ue, Function::s_cu, {"Z"}, LocalStep::none, false});
  CHECK_THROWS_AS(validate_catalog(unknown), std::invalid_argument);

  ProcedureCatalog dup;
  dup.messages.push_back({"X", Phase::setup, Function::ue, Function::s_cu, {}, LocalStep::none, false});
  dup.messages.push_back({"X", Phase::setup, Function::ue, Function::s_cu, {}, LocalStep::none, false});
  CHECK_THROWS_AS(validate_catalog(dup), std::invalid_argument);

  ProcedureCatalog uu;
  uu.messages.push_back({"X", Phase::setup, Function::ue, Function::ue, {}, LocalStep::none, false});
  CHECK_THROWS_AS(validate_catalog(uu), std::invalid_argument);

  ProcedureCatalog backwards;
  backwards.messages.push_back({"E", Phase::execution, Function::s_cu, Function::amf_upf, {}, LocalStep::none, false});
  backwards.messages.push_back({"S", Phase::setup, Function::ue, Function::s_cu, {"E"}, LocalStep::none, false});
  CHECK_THROWS_AS(validate_catalog(backwards), std::invalid_argument);

  TimingConfig neg;
  neg.ssb_acquisition_ms = -1.0;
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("empty catalog") {
  const auto topo = build_topology({Scenario::a, SplitOption::lls}, table_delays());
  const auto trace = evaluate_timeline(ProcedureCatalog{}, topo, {});
  const auto p = phase_durations(trace);
  CHECK(p.setup_ms == 0.0);
  CHECK(p.buffer_ms == 0.0);
  CHECK(p.execution_ms == 0.0);
  CHECK(p.total_ms == 0.0);
  CHECK(message_counts(trace).crossings() == 0);
}

TEST_CASE("trace JSON lists every event") {
  const auto trace = run(Scenario::b1, SplitOption::cu_du);
  const auto j = to_json(trace);
  CHECK(j.at("events").size() == trace.events.size());
  CHECK(j.at("procedure") == "Inter-DU");
}
