from collections import Counter

import pytest

from iowt_offload import defaults
from iowt_offload.agent import Action, epsilon, greedy_policy
from iowt_offload.link import LinkModel
from iowt_offload.model import ConfigError, CostWeights, normalizers_from_heaviest
from iowt_offload.sim import (
    SimConfig,
    StreamSpec,
    replay_cost,
    run_config,
    run_episode,
    run_many,
    sweep_beta,
)

IOT, FOUR_Q, FIVE_Q, FACE = range(4)


def per_app(i, **kw):
    return SimConfig(stream=StreamSpec("per_app", i), **kw)


def test_local_iot_episode():
    summary, trace, q = run_episode(per_app(IOT, strategy="local"), 0)
    assert q is None
    assert len(trace) == 300
    assert {o.time.total_s for o in trace} == {0.048}
    assert all(o.energy.total_j == pytest.approx(4.8e-3, rel=1e-12) for o in trace)
    assert summary.offload_percent == 0.0


def test_offload_face_episode():
    summary, trace, _ = run_episode(per_app(FACE, strategy="offload"), 0)
    assert all(o.time.total_s == pytest.approx(0.62006, rel=1e-2) for o in trace)
    assert summary.offload_percent == 100.0


@pytest.mark.parametrize("strategy", ["local", "offload", "oracle", "qlearning"])
def test_single_task_summary_equals_outcome(strategy):
    summary, (only,), _ = run_episode(SimConfig(tasks_per_run=1, strategy=strategy), 0)
    assert summary.mean_time_s == only.time.total_s
    assert summary.mean_energy_j == only.energy.total_j
    assert summary.mean_cost == only.cost
    assert summary.total_cost == only.cost


def test_q_counter_counts_tasks():
    _, _, q = run_episode(SimConfig(tasks_per_run=123), 0)
    assert q.k == 123
    assert sum(sum(v) for v in q.visits.values()) == 123


@pytest.mark.parametrize(
    "change",
    [
        {"tasks_per_run": 0},
        {"runs": 0},
        {"apps": ()},
        {"strategy": "greedy"},
        {"alpha": 2.0},
        {"stream": StreamSpec("per_app", 9)},
        {"stream": StreamSpec("weighted_random", weights=(0.5, 0.6, 0.0, 0.0))},
        {"stream": StreamSpec("bursty")},
        {"base_seed": -1},
        {"apps": (defaults.IOT_SENSORS, defaults.IOT_SENSORS)},
    ],
)
def test_bad_config_rejected_before_running(change):
    with pytest.raises(ConfigError):
        run_episode(SimConfig().replace(**change), 0)


def test_local_runs_are_identical():
    summaries = [ep.summary for ep in run_many(SimConfig(strategy="local"))]
    assert len(summaries) == 10
    assert len({(s.mean_time_s, s.mean_energy_j, s.total_cost) for s in summaries}) == 1


def test_run_many_is_reproducible_and_parallel_safe():
    cfg = SimConfig(runs=3, tasks_per_run=100, link=LinkModel("stochastic", 20.3e6, rel_sigma=0.3))
    a, b = run_many(cfg), run_many(cfg)
    c = run_many(cfg.replace(jobs=3))
    assert [ep.trace for ep in a] == [ep.trace for ep in b] == [ep.trace for ep in c]
    assert a[0].trace != a[1].trace


def test_run_result_depends_only_on_seed_and_index():
    cfg = SimConfig(runs=4, tasks_per_run=80)
    assert run_many(cfg)[3].trace == run_episode(cfg, 3).trace


def test_qlearning_converges_to_oracle_for_iot():
    episodes = run_many(per_app(IOT))
    agree = sum(greedy_policy(ep.qtable) == {ep.trace[0].state: Action.LOCAL} for ep in episodes)
    assert agree >= 9


def test_trace_replay_reproduces_costs():
    cfg = SimConfig(
        stream=StreamSpec("round_robin"),
        link=LinkModel("stochastic", 20.3e6, rel_sigma=0.25),
        weights=CostWeights(0.3, 0.7),
    )
    normalizers = normalizers_from_heaviest(cfg.apps, cfg.wearable)
    for o in run_episode(cfg, 0).trace:
        assert replay_cost(o, cfg.weights, normalizers) == pytest.approx(o.cost, rel=1e-12)


def test_round_robin_visits_each_state_equally():
    _, trace, q = run_episode(SimConfig(stream=StreamSpec("round_robin"), tasks_per_run=300), 0)
    assert set(Counter(o.app for o in trace).values()) == {75}
    assert sorted(sum(v) for v in q.visits.values()) == [75] * 4


def test_weighted_random_stream_follows_weights():
    cfg = SimConfig(stream=StreamSpec("weighted_random", weights=(0.7, 0.1, 0.1, 0.1)), tasks_per_run=2000)
    counts = Counter(o.app for o in run_episode(cfg, 0).trace)
    assert 0.65 < counts["iot_sensors"] / 2000 < 0.75


def test_task_stream_shared_across_strategies():
    cfg = SimConfig(stream=StreamSpec("weighted_random", weights=(0.25,) * 4), tasks_per_run=60)
    apps = [[o.app for o in run_episode(cfg.replace(strategy=s), 2).trace] for s in ("local", "qlearning")]
    assert apps[0] == apps[1]


def test_stochastic_rates_sampled_only_when_offloading():
    cfg = per_app(FACE, strategy="offload", link=LinkModel("stochastic", 20.3e6, rel_sigma=0.3))
    rates = [o.rate_bps for o in run_episode(cfg, 0).trace]
    assert len(set(rates)) == len(rates)
    assert min(rates) >= cfg.link.floor_rate_bps
    local = run_episode(cfg.replace(strategy="local"), 0).trace
    assert {o.rate_bps for o in local} == {None}


@pytest.mark.parametrize("app", [IOT, FOUR_Q, FIVE_Q, FACE])
@pytest.mark.parametrize("beta_e", [0.0, 0.5, 1.0])
def test_qlearning_mixes_the_pure_strategies(app, beta_e):
    w = CostWeights.energy_weight(beta_e)
    base = per_app(app, weights=w, runs=3)
    pure = [run_many(base.replace(strategy=s))[0].summary for s in ("local", "offload")]
    for ep in run_many(base):
        for field in ("mean_time_s", "mean_energy_j"):
            lo, hi = sorted(getattr(p, field) for p in pure)
            assert lo * (1 - 1e-12) <= getattr(ep.summary, field) <= hi * (1 + 1e-12)


def _overhead_case(app, beta_e):
    base = per_app(app, weights=CostWeights.energy_weight(beta_e), runs=5)
    psi_local = run_episode(base.replace(strategy="local", tasks_per_run=1), 0).summary.total_cost
    psi_off = run_episode(base.replace(strategy="offload", tasks_per_run=1), 0).summary.total_cost
    best = min(psi_local, psi_off) * base.tasks_per_run
    overhead = sum(epsilon(k) for k in range(base.tasks_per_run)) * abs(psi_off - psi_local)
    return [ep.summary.total_cost - best for ep in run_many(base)], overhead


@pytest.mark.parametrize(
    "app, beta_e",
    [(a, b) for a in (IOT, FOUR_Q, FIVE_Q, FACE) for b in (0.0, 0.5, 1.0) if (a, b) != (FOUR_Q, 0.0)],
)
def test_long_term_cost_within_exploration_overhead(app, beta_e):
    excess, overhead = _overhead_case(app, beta_e)
    assert max(excess) <= overhead


@pytest.mark.xfail(
    strict=True,
    reason="4-queens at beta_e=0: local 0.1405 vs offload 0.1427, the greedy branch offloads "
    "on stale Q-values far more often than the exploration term accounts for",
)
def test_long_term_cost_bound_near_tie():
    excess, overhead = _overhead_case(FOUR_Q, 0.0)
    assert max(excess) <= overhead


def test_sweep_ordering_and_validation():
    rows = sweep_beta(SimConfig(runs=2, tasks_per_run=50), [1.0, 0.0, 0.5])
    assert [(r.app, r.beta_e) for r in rows] == [
        (a.name, b) for a in defaults.APPS for b in (0.0, 0.5, 1.0)
    ]
    assert all(r.beta_t == 1.0 - r.beta_e for r in rows)
    with pytest.raises(ConfigError):
        sweep_beta(SimConfig(), [1.5])


def test_sweep_time_energy_tradeoff_direction():
    rows = sweep_beta(SimConfig(), [0.0, 1.0])
    by_app = {}
    for r in rows:
        by_app.setdefault(r.app, {})[r.beta_e] = r.summary
    for app, s in by_app.items():
        assert s[1.0].offload_percent < 10, app
    # only where offloading is the faster action does weighting energy cost time
    for app in ("5_queens", "face_recognition"):
        assert by_app[app][1.0].time_s.mean >= by_app[app][0.0].time_s.mean
        assert by_app[app][1.0].energy_j.mean <= by_app[app][0.0].energy_j.mean


def test_light_apps_offload_less_when_time_only():
    # offloading is slower and costlier for these, so beta_e=0 leaves only a narrow
    # cost gap and early greedy picks offload more: time goes *down* as beta_e rises
    rows = {(r.app, r.beta_e): r.summary for r in sweep_beta(SimConfig(), [0.0, 1.0])}
    for app in ("iot_sensors", "4_queens"):
        assert rows[app, 0.0].offload_percent > rows[app, 1.0].offload_percent


def test_run_config_labels_row():
    row, episodes = run_config(per_app(FIVE_Q, strategy="oracle", runs=2, tasks_per_run=5))
    assert (row.strategy, row.app, row.beta_e) == ("oracle", "5_queens", 0.5)
    assert len(episodes) == 2
