import itertools
import json
import math

import pytest

import dsirp


@pytest.fixture(scope="module")
def setup():
    inst = dsirp.generate_instance("normal", 4, "low", 3)
    hist = dsirp.sample_history(inst, 50, 1)
    ep = dsirp.sample_episode(inst, 3, 2)
    return inst, dsirp.TourCostCache(inst.gamma), hist, ep, dsirp.initial_state(inst, hist, ep)


def test_instance_round_trip(setup):
    inst = setup[0]
    assert inst.n == 4 and len(inst.gamma) == 5
    assert dsirp.Instance.from_json(inst.to_json()) == inst
    assert dsirp.generate_instance("normal", 4, "low", 3) == inst
    with pytest.raises(ValueError):
        dsirp.generate_instance("weird", 4, "low", 3)
    with pytest.raises(dsirp.SchemaError):
        dsirp.Instance.from_json("{}")


def test_held_karp_matches_permutations(setup):
    gamma = setup[0].gamma

    def cycle(order):
        path = [0, *order, 0]
        return sum(gamma[a][b] for a, b in zip(path, path[1:]))

    best = min(cycle(p) for p in itertools.permutations([1, 2, 3, 4]))
    cost, order = dsirp.held_karp([1, 2, 3, 4], gamma)
    assert cost == pytest.approx(best, rel=1e-12)
    assert dsirp.routing_cost(order, gamma) == pytest.approx(cost, rel=1e-12)
    assert setup[1].cost([1, 2, 3, 4]) == cost


def test_cpctsp_and_step(setup):
    inst, cache, _, ep, x0 = setup
    q = [c - i for c, i in zip(inst.capacity, x0.inventory)]
    sol = dsirp.solve_cpctsp([-1.0] * 4, q, inst.vehicle_capacity, cache)
    assert sol["tour"] == [] and sol["objective"] == 0.0
    demand = [row[0] for row in ep.demand]
    cost = dsirp.step_cost(inst, x0, [], demand)
    assert cost["total"] == pytest.approx(cost["holding"] + cost["stockout"] + cost["routing"])
    nxt = dsirp.transition(inst, x0, [], demand)
    assert nxt.t == 1
    assert all(0.0 <= v <= c for v, c in zip(nxt.inventory, inst.capacity))


def test_policies_and_anticipative(setup):
    inst, cache, _, ep, x0 = setup
    base = dsirp.anticipative_baseline(inst, cache, ep, x0)
    w = dsirp.init_params(inst)
    for kind in ("mean", "saa1", "saa3", "mlco"):
        r = dsirp.rollout(inst, cache, kind, ep, x0, lookahead=3, params=w)
        assert len(r["tours"]) == 3
        assert r["total"]["total"] >= base["plan_total"] * (1 - 1e-9)
    tour = dsirp.decide("mlco", inst, cache, x0, params=w)
    assert all(1 <= v <= inst.n for v in tour)
    r = dsirp.rollout_callable(inst, lambda s: [], ep, x0)
    assert len(r["costs"]) == 3
    empty = dsirp.initial_state(inst, setup[2], ep)
    empty.inventory = [0.0] * inst.n
    if sum(inst.capacity) > inst.vehicle_capacity:
        with pytest.raises(RuntimeError, match="period 0"):
            dsirp.rollout_callable(inst, lambda s: [1, 2, 3, 4], ep, empty)


def test_prize_model_and_checkpoint(setup, tmp_path):
    inst, _, _, _, x0 = setup
    assert dsirp.empirical_quantile([1.0, 2.0, 3.0, 4.0], 0.5) == 2.0
    w = dsirp.init_params(inst, [0.5], 2)
    assert len(w) == len(w.flatten())
    theta = dsirp.prize_forward(x0, inst, w, [0.5], 2)
    assert len(theta) == inst.n and all(math.isfinite(t) for t in theta)
    path = tmp_path / "ckpt.json"
    dsirp.save_checkpoint(w, str(path), [0.5], 2)
    params, levels, horizon = dsirp.load_checkpoint(str(path))
    assert params.flatten() == w.flatten() and levels == [0.5] and horizon == 2
    assert json.loads(path.read_text())["H"] == 2


def test_train_small(setup):
    inst, _, hist, _, _ = setup
    cfg = dsirp.TrainConfig()
    cfg.paradigm = "anticipative_dagger"
    cfg.epochs = 2
    cfg.horizon = 2
    cfg.lookahead = 2
    cfg.samples_per_epoch = 4
    cfg.fit_steps = 3
    cfg.n_pert = 2
    assert cfg.alpha(0) == 1.0
    val = [dsirp.sample_episode(inst, 2, 10 + j) for j in range(2)]
    a = dsirp.train(inst, hist, val, cfg)
    b = dsirp.train(inst, hist, val, cfg)
    assert a["params"].flatten() == b["params"].flatten()
    assert len(a["log"]) == 2


def test_run_experiment(tmp_path):
    cfg = {
        "patterns": ["uniform"],
        "penalties": ["low"],
        "instances_per_pattern": 1,
        "n": 3,
        "horizon": 2,
        "lookahead": 2,
        "episodes": 1,
        "policies": ["mean"],
        "out": str(tmp_path / "run"),
    }
    dsirp.run_experiment("generate", json.dumps(cfg))
    dsirp.run_experiment("evaluate", json.dumps(cfg))
    assert (tmp_path / "run" / "manifest.json").exists()
    assert list((tmp_path / "run" / "eval").rglob("eval_summary.csv"))
    with pytest.raises(ValueError):
        dsirp.run_experiment("generate", json.dumps(cfg))
    with pytest.raises(ValueError):
        dsirp.run_experiment("generate", json.dumps({"bogus": 1}))
