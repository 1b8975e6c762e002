/* Copyright 2026 The Aragog Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "aragog/simulation.h"

#include <algorithm>
#include <deque>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "aragog/predictor.h"
#include "aragog/request.h"
#include "aragog/router.h"
#include "aragog/scheduler.h"

namespace aragog {

namespace {

// Per-request facts produced at the router lane, consumed when the request
// becomes schedulable.
struct PendingPrediction {
  std::vector<Configuration> viable;
  double start = 0.0;
  double duration = 0.0;
  int evals = 0;
  bool truncated = false;
};

struct Sim {
  const Scenario& scenario;
  const RunOptions& options;

  WorkflowGraph graph;
  ModelCatalog catalog;
  ConfigSpace space;
  ServiceTimeModel service;
  std::vector<EngineState> engines;

  PolicyKind policy;
  double rate;
  std::uint64_t seed;
  int beam_width;
  RunMode mode;
  double horizon = -1.0;

  std::vector<double> arrivals;
  AccuracyTable truth;
  std::unique_ptr<OracleRouter> oracle;
  std::unique_ptr<NoisyRouter> noisy;
  const RouterBackend* router = nullptr;
  std::unique_ptr<ConfigPredictor> predictor;
  PredictorBudget budget;
  Configuration per_workflow_choice;

  EventQueue events;
  std::vector<std::optional<Request>> requests;
  std::vector<PendingPrediction> pending;
  std::vector<RuntimeCostContext> arrival_ctx;  // runtime-cost policy only
  std::vector<std::size_t> schedulable;         // ids, (arrival, id) order
  std::deque<RequestId> lane_fifo;
  int lanes_busy = 0;
  bool round_pending = false;

  std::size_t arrived = 0;
  std::size_t completed_count = 0;
  double next_sample;
  double last_time = 0.0;

  RunTrace trace;

  Sim(const Scenario& sc, const RunOptions& opt)
      : scenario(sc),
        options(opt),
        graph(sc.build_graph()),
        catalog(sc.build_catalog()),
        space(graph, catalog),
        service(sc.build_service_model()),
        engines(sc.build_engines()),
        policy(opt.policy),
        rate(opt.arrival_rate.value_or(sc.workload.arrival_rate)),
        seed(opt.seed.value_or(sc.seed)),
        beam_width(opt.beam_width.value_or(sc.scheduler.beam_width)),
        mode(opt.mode),
        truth(space, {}),
        budget(sc.predictor.min_budget, sc.predictor.ema_alpha),
        next_sample(sc.sample_interval) {
    if (rate <= 0) throw ValidationError("arrival rate must be positive");
    for (std::size_t i = 0; i < engines.size(); ++i) {
      if (engines[i].model != static_cast<int>(i)) {
        throw ValidationError("engine pools must be in model tier order");
      }
    }

    if (mode == RunMode::kHorizon) {
      horizon = options.horizon.value_or(scenario.workload.horizon);
      if (horizon <= 0) throw ValidationError("horizon must be positive");
      arrivals = poisson_arrivals_until(rate, horizon, seed);
    } else {
      std::size_t n = options.num_requests.value_or(scenario.workload.num_requests);
      if (n < 1) throw ValidationError("num_requests must be at least 1");
      arrivals = poisson_arrivals(rate, n, seed);
    }

    truth = generate_accuracy_table(space, scenario.accuracy, arrivals.size(),
                                    seed);
    oracle = std::make_unique<OracleRouter>(truth, scenario.router.eval_latency);
    router = oracle.get();
    if (scenario.router.kind == RouterConfig::Kind::kNoisy) {
      std::uint64_t noise_seed = scenario.router.noise_seed.value_or(
          rng::mix({seed, 0x5EEDULL}));
      noisy = std::make_unique<NoisyRouter>(*oracle,
                                            scenario.router.false_positive_rate,
                                            scenario.router.false_negative_rate,
                                            noise_seed);
      router = noisy.get();
    }
    PredictorParams pp;
    pp.chain_cap = scenario.predictor.chain_cap;
    predictor = std::make_unique<ConfigPredictor>(space, *router, pp);

    if (policy == PolicyKind::kPerWorkflow) {
      std::vector<AccurateSet> sample;
      sample.reserve(scenario.workload.per_workflow_sample);
      for (std::size_t k = 0; k < scenario.workload.per_workflow_sample; ++k) {
        sample.push_back(generate_accurate_set(space, scenario.accuracy, seed, k,
                                               rng::kPolicySampleSalt));
      }
      per_workflow_choice = select_per_workflow_config(sample, space);
    }

    requests.resize(arrivals.size());
    pending.resize(arrivals.size());
    if (policy == PolicyKind::kPerInputRuntimeCost) {
      arrival_ctx.resize(arrivals.size());
    }

    trace.scenario_name = scenario.name;
    trace.policy = policy_name(policy);
    trace.mode = mode;
    trace.rate = rate;
    trace.seed = seed;
    trace.beam_width = beam_width;
    trace.horizon = horizon;
    trace.offered = arrivals.size();
    trace.requests.resize(arrivals.size());

    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      Event e;
      e.time = arrivals[i];
      e.type = EventType::kArrival;
      e.request = i;
      events.push(e);
      trace.requests[i].id = i;
      trace.requests[i].arrival = arrivals[i];
    }
  }

  void request_round(double now) {
    if (round_pending) return;
    round_pending = true;
    Event e;
    e.time = now;
    e.type = EventType::kRoundTrigger;
    events.push(e);
  }

  void insert_schedulable(std::size_t id) {
    auto pos = std::lower_bound(
        schedulable.begin(), schedulable.end(), id,
        [&](std::size_t a, std::size_t b) {
          const Request& ra = *requests[a];
          const Request& rb = *requests[b];
          if (ra.arrival != rb.arrival) return ra.arrival < rb.arrival;
          return ra.id < rb.id;
        });
    schedulable.insert(pos, id);
  }

  RuntimeCostContext snapshot_load() const {
    RuntimeCostContext ctx;
    ctx.service = &service;
    ctx.occupancy.resize(engines.size());
    ctx.queued_ahead.assign(engines.size(), 0);
    ctx.slots.resize(engines.size());
    for (std::size_t i = 0; i < engines.size(); ++i) {
      ctx.occupancy[i] = engines[i].occupancy();
      ctx.slots[i] = engines[i].slots;
    }
    for (std::size_t id : schedulable) {
      const Request& r = *requests[id];
      for (int agent : r.ready_agents()) {
        for (int m : r.candidate_models(agent)) {
          ++ctx.queued_ahead[static_cast<std::size_t>(m)];
        }
      }
    }
    return ctx;
  }

  void start_lanes(double now) {
    while (lanes_busy < scenario.predictor.router_lanes && !lane_fifo.empty()) {
      RequestId id = lane_fifo.front();
      lane_fifo.pop_front();
      double b = budget.budget();
      PredictionResult res = predictor->predict(id, b);

      PendingPrediction& p = pending[static_cast<std::size_t>(id)];
      p.start = now;
      p.duration = res.router_time;
      p.evals = res.router_eval_count();
      p.truncated = res.truncated;
      if (policy == PolicyKind::kAragog) {
        p.viable = std::move(res.viable.configs);
      } else {
        const RuntimeCostContext* ctx =
            policy == PolicyKind::kPerInputRuntimeCost
                ? &arrival_ctx[static_cast<std::size_t>(id)]
                : nullptr;
        p.viable = {select_per_input_config(truth.at(id), space, policy, ctx)};
      }

      ++lanes_busy;
      Event e;
      e.time = now + p.duration;
      e.type = EventType::kPredictionComplete;
      e.request = id;
      events.push(e);
    }
  }

  void on_arrival(double now, RequestId id) {
    ++arrived;
    if (policy == PolicyKind::kPerWorkflow) {
      requests[static_cast<std::size_t>(id)] =
          Request::make(id, now, graph, {per_workflow_choice});
      trace.requests[static_cast<std::size_t>(id)].viable_count = 1;
      insert_schedulable(static_cast<std::size_t>(id));
      request_round(now);
      return;
    }
    if (policy == PolicyKind::kPerInputRuntimeCost) {
      arrival_ctx[static_cast<std::size_t>(id)] = snapshot_load();
    }
    lane_fifo.push_back(id);
    start_lanes(now);
  }

  void on_prediction_complete(double now, RequestId id) {
    --lanes_busy;
    PendingPrediction& p = pending[static_cast<std::size_t>(id)];
    requests[static_cast<std::size_t>(id)] =
        Request::make(id, arrivals[static_cast<std::size_t>(id)], graph,
                      std::move(p.viable));
    RequestRecord& rec = trace.requests[static_cast<std::size_t>(id)];
    rec.prediction_start = p.start;
    rec.prediction_duration = p.duration;
    rec.router_evals = p.evals;
    rec.prediction_truncated = p.truncated;
    rec.viable_count =
        static_cast<int>(requests[static_cast<std::size_t>(id)]->viable.size());
    insert_schedulable(static_cast<std::size_t>(id));
    request_round(now);
    start_lanes(now);
  }

  void on_stage_complete(double now, RequestId id, int agent, int engine_idx) {
    engines[static_cast<std::size_t>(engine_idx)].release_stage(id, agent);
    Request& r = *requests[static_cast<std::size_t>(id)];
    r.mark_complete(agent, now);
    if (r.finished()) {
      ++completed_count;
      RequestRecord& rec = trace.requests[static_cast<std::size_t>(id)];
      rec.completion = now;
      rec.executed = r.executed_model;
      Configuration executed{r.executed_model};
      rec.accurate = truth.accurate(id, executed);
      rec.static_cost = space.static_cost(executed);
      schedulable.erase(
          std::find(schedulable.begin(), schedulable.end(),
                    static_cast<std::size_t>(id)));
    }
    request_round(now);
  }

  void on_round(double now) {
    round_pending = false;
    std::vector<const Request*> queue;
    std::vector<Request*> mut;
    std::vector<std::size_t> ids;
    queue.reserve(schedulable.size());
    for (std::size_t id : schedulable) {
      Request& r = *requests[id];
      if (!r.ready_agents().empty()) {
        queue.push_back(&r);
        mut.push_back(&r);
        ids.push_back(id);
      }
    }
    if (queue.empty()) return;

    SchedulerParams params;
    params.beam_width = beam_width;
    Assignment assignment = beam_schedule(queue, engines, params);

    std::vector<FairnessViolation> violations =
        audit_round_fairness(queue, engines, assignment);
    trace.fairness_violations += violations.size();

    RoundRecord round;
    round.time = now;
    round.queue_len = queue.size();
    round.pairs = assignment.triples.size() +
                  static_cast<std::size_t>(assignment.skips);
    round.assigned = assignment.triples.size();
    round.skips = assignment.skips;
    round.states_explored = assignment.states_explored;
    round.utilization = assignment.utilization;
    round.flexibility = assignment.flexibility;
    round.fairness_ok = violations.empty();
    trace.rounds.push_back(round);

    auto service_time = [&](RequestId rid, int agent, int model) {
      return service.sample(seed, rid, agent, model);
    };
    ApplyOutcome outcome =
        apply_assignment(assignment, mut, engines, now, service_time);
    trace.stale_drops += outcome.stale.size();

    for (const AssignmentTriple& t : outcome.applied) {
      Request& r = *mut[t.request_index];
      RequestRecord& rec = trace.requests[static_cast<std::size_t>(r.id)];
      if (rec.first_dispatch < 0) {
        rec.first_dispatch = now;
        budget.observe_queue_delay(now - r.arrival);
      }
      Event e;
      e.time = now + service.sample(seed, r.id, t.agent, t.model);
      e.type = EventType::kStageComplete;
      e.request = r.id;
      e.agent = t.agent;
      e.engine = t.model;  // pools are in tier order
      events.push(e);
    }
  }

  void flush_samples(double upto) {
    while (next_sample <= upto) {
      OccupancySample s;
      s.time = next_sample;
      s.occupancy.reserve(engines.size());
      for (const EngineState& e : engines) s.occupancy.push_back(e.occupancy());
      s.in_system = arrived - completed_count;
      trace.samples.push_back(std::move(s));
      next_sample += scenario.sample_interval;
    }
  }

  RunTrace run() {
    while (!events.empty()) {
      Event e = events.pop();
      if (mode == RunMode::kHorizon && e.time > horizon) break;
      flush_samples(e.time);
      last_time = e.time;
      switch (e.type) {
        case EventType::kStageComplete:
          on_stage_complete(e.time, e.request, e.agent, e.engine);
          break;
        case EventType::kPredictionComplete:
          on_prediction_complete(e.time, e.request);
          break;
        case EventType::kArrival:
          on_arrival(e.time, e.request);
          break;
        case EventType::kRoundTrigger:
          on_round(e.time);
          break;
      }
    }
    trace.end_time = mode == RunMode::kHorizon ? horizon : last_time;
    flush_samples(trace.end_time);
    trace.completed = completed_count;
    double span = mode == RunMode::kHorizon
                      ? horizon
                      : (arrivals.empty() ? 0.0 : arrivals.back());
    trace.realized_rate =
        span > 0 ? static_cast<double>(arrivals.size()) / span : 0.0;
    return std::move(trace);
  }
};

}  // namespace

void RunTrace::write_jsonl(std::ostream& out) const {
  using nlohmann::json;
  json meta{{"type", "meta"},
            {"scenario", scenario_name},
            {"policy", policy},
            {"mode", mode == RunMode::kDrain ? "drain" : "horizon"},
            {"rate", rate},
            {"seed", seed},
            {"beam_width", beam_width},
            {"horizon", horizon},
            {"end_time", end_time},
            {"realized_rate", realized_rate},
            {"offered", offered},
            {"completed", completed},
            {"fairness_violations", fairness_violations},
            {"stale_drops", stale_drops}};
  out << meta.dump() << "\n";
  for (const RequestRecord& r : requests) {
    json line{{"type", "request"},
              {"id", r.id},
              {"arrival", r.arrival},
              {"prediction_start", r.prediction_start},
              {"prediction_duration", r.prediction_duration},
              {"router_evals", r.router_evals},
              {"truncated", r.prediction_truncated},
              {"viable_count", r.viable_count},
              {"first_dispatch", r.first_dispatch},
              {"completion", r.completion},
              {"executed", r.executed},
              {"accurate", r.accurate},
              {"static_cost", r.static_cost}};
    out << line.dump() << "\n";
  }
  for (const RoundRecord& r : rounds) {
    json line{{"type", "round"},
              {"time", r.time},
              {"queue_len", r.queue_len},
              {"pairs", r.pairs},
              {"assigned", r.assigned},
              {"skips", r.skips},
              {"states_explored", r.states_explored},
              {"utilization", r.utilization},
              {"flexibility", r.flexibility},
              {"fairness_ok", r.fairness_ok}};
    out << line.dump() << "\n";
  }
  for (const OccupancySample& s : samples) {
    json line{{"type", "sample"},
              {"time", s.time},
              {"occupancy", s.occupancy},
              {"in_system", s.in_system}};
    out << line.dump() << "\n";
  }
}

RunTrace run_simulation(const Scenario& scenario, const RunOptions& options) {
  Sim sim(scenario, options);
  return sim.run();
}

}  // namespace aragog
