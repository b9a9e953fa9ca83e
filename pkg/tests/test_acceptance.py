"""Acceptance criteria 1-9, all at exact tolerance.

Run with ``pytest tests/test_acceptance.py -v``; one PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import io
import itertools
import json
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction as F

import oracles
from extgame.cli import run
from extgame.game import GameVerdict, bayes_net_game, best_response, classify_game, classify_joint_strategy
from extgame.prob import Cpt, Dag, JointDistribution, VariableSpec, conditional
from extgame.scenarios import (
    NEWCOMB_SPACE,
    NewcombParams,
    TABLE1,
    X_C,
    X_R,
    affine_payoffs,
    appendix_lemma_check,
    farey_grid,
    matching_pennies,
    merged_scenario,
    newcomb_fearful,
    newcomb_realist,
    sensor_variant,
    time_reversed_newcomb,
)
from extgame.strategies import Verdict

ALPHAS = [F(51, 100), F(3, 5), F(3, 4), F(9, 10), F(1)]
AB, B = (F(1), F(0)), (F(0), F(1))


def cli_json(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run([*argv, "--format", "json"])
    return code, json.loads(buf.getvalue())


def certificate_holds(cert):
    """Recombine the constraints by hand: y.A >= 0 componentwise and y.b < 0."""
    y = cert.farkas.multipliers
    n = len(cert.constraints[0].coefficients)
    combo = [sum(w * c.coefficients[k] for w, c in zip(y, cert.constraints)) for k in range(n)]
    rhs = sum(w * c.rhs for w, c in zip(y, cert.constraints))
    return all(v >= 0 for v in combo) and rhs < 0


def test_criterion_1_fearful(verdict_line):
    start = time.perf_counter()
    code, rep = cli_json("analyze", "fearful", "--alpha", "1")
    elapsed = time.perf_counter() - start
    ok = (
        code == 0
        and rep["maximizer_choice"] == "B"
        and rep["maximizer_parameter"] == ["0", "1"]
        and F(rep["value"]["exact"]) == 1_000_000
        and elapsed < 1
    )
    verdict_line(1, "fearful maximizer P(B)=1, value 1000000", ok, f"{elapsed:.3f}s")
    assert ok


def test_criterion_2_realist(verdict_line):
    want = {(F(1), F(0)): 1000, (F(0), F(1)): 1_001_000, (F(1, 2), F(1, 2)): 501_000}
    got = {}
    for q, value in want.items():
        br = best_response(newcomb_realist(q), "you")
        got[q] = (br.maximizers, br.value)
    ok = all(got[q] == ((AB,), v) and oracles.realist_eu(1, q) == v for q, v in want.items())
    verdict_line(2, "realist maximizer delta_AB with 1000 / 1001000 / 501000", ok)
    assert ok


def test_criterion_3_merges(verdict_line):
    start = time.perf_counter()
    problems = []
    for alpha in ALPHAS:
        p = NewcombParams(alpha)
        for which in (1, 3):
            m = merged_scenario(which, p)
            res = m.classification
            empties = [w for w in res.witnesses if w.result.verdict is Verdict.EMPTY]
            if res.verdict is not GameVerdict.OVER_PLAYED or not empties:
                problems.append(f"merged-{which} at {alpha}: {res.verdict.value}")
            for w in empties:
                if not (w.result.certificate.verify() and certificate_holds(w.result.certificate)):
                    problems.append(f"merged-{which} at {alpha}: certificate fails")
    elapsed = time.perf_counter() - start
    m2 = merged_scenario(2)
    grid = m2.game.player("you").family.grid
    w_grid = m2.game.player("W").family.grid
    for p_y, q in itertools.product(grid, w_grid):
        point = classify_joint_strategy(m2.game, {"you": p_y, "W": q}).point
        product = {(y, g): p_y[i] * q[k] for i, y in enumerate(("AB", "B")) for k, g in enumerate(("ab", "b"))}
        if point is None or dict(point.items()) != product:
            problems.append(f"merged-2 at {p_y},{q} is not the product")
    if m2.classification.verdict is not GameVerdict.PROPER or not m2.coincides_with_realist:
        problems.append("merged-2 is not Proper")
    ok = not problems and elapsed < 5
    verdict_line(3, "merged-1/3 OverPlayed with certificates, merged-2 Proper product", ok,
                 f"{elapsed:.2f}s for merges 1 and 3" + (f"; {problems[:3]}" if problems else ""))
    assert ok


def g_independent_h(joint):
    """The common P(y|g) if it is the same on every g of positive mass."""
    rows = {r for r in conditional(joint, "y", "g").rows.values() if r is not None}
    return rows.pop() if len(rows) == 1 else None


def test_criterion_4_appendix(verdict_line):
    problems = []
    for alpha in ALPHAS:
        rep = appendix_lemma_check(alpha, farey_grid(20))
        solver = set(rep.feasible_h)
        # oracle A: every Table 2 instance with z on the Farey grid, screened through conditional()
        from_z = set()
        for z in oracles.farey(20):
            cells = {
                ("AB", "ab"): alpha * z, ("B", "ab"): (1 - alpha) * (1 - z),
                ("AB", "b"): (1 - alpha) * z, ("B", "b"): alpha * (1 - z),
            }
            h = g_independent_h(JointDistribution.from_mapping(NEWCOMB_SPACE, cells))
            if h is not None:
                from_z.add(h)
        # oracle B: every product h(y) q(g) on the grid, screened against the predictor
        qs = [(1 - x, x) for x in oracles.farey(20)] + [(alpha, 1 - alpha), (1 - alpha, alpha)]
        from_h = set()
        for x, q in itertools.product(oracles.farey(20), qs):
            h = (1 - x, x)
            j = JointDistribution.from_function(NEWCOMB_SPACE, lambda o: h[o[0] == "B"] * q[o[1] == "b"])
            c = conditional(j, "g", "y")
            want = {("AB",): (alpha, 1 - alpha), ("B",): (1 - alpha, alpha)}
            if all(r is None or r == want[k] for k, r in c.rows.items()):
                from_h.add(h)
        if not (solver == from_z == from_h == {AB, B}):
            problems.append(f"alpha={alpha}: solver {solver}, z-oracle {from_z}, h-oracle {from_h}")
    ok = not problems
    verdict_line(4, "feasible g-independent h are exactly the two deltas", ok, "; ".join(problems))
    assert ok


def test_criterion_5_threshold(verdict_line):
    t = F(1001, 2000)
    eps = F(1, 10000)
    deltas = (AB, B)
    results = {}
    for alpha in (t - eps, t, t + eps):
        br = best_response(newcomb_fearful(NewcombParams(alpha), grid=deltas), "you")
        eu_ab, eu_b = oracles.fearful_eu(alpha, 0), oracles.fearful_eu(alpha, 1)
        oracle = {AB} if eu_ab > eu_b else {B} if eu_b > eu_ab else {AB, B}
        results[alpha] = (set(br.maximizers), oracle, br.tie, br.value)
    below, at, above = (results[a] for a in (t - eps, t, t + eps))
    ok = (
        below[0] == below[1] == {AB}
        and above[0] == above[1] == {B}
        and at[0] == at[1] == {AB, B}
        and at[2] is True
        and at[3] == 500_500
    )
    verdict_line(5, "fearful switches AB -> B at alpha = 1001/2000 with a tie there", ok)
    assert ok


def random_net_game(rng, index):
    k = rng.choice((2, 3))
    vs = [VariableSpec(f"v{i}", ("0", "1")) for i in range(k)]
    edges = [(f"v{i}", f"v{j}") for i, j in itertools.combinations(range(k), 2) if rng.random() < 0.5]
    dag = Dag.from_variables(vs, edges)
    owners = {n: rng.choice(("P1", "P2", "P3")) for n in dag.nodes}
    grids = {}
    for n in dag.nodes:
        parents = tuple(dag.labeling[x] for x in dag.parents(n))
        keys = list(itertools.product(*(x.domain for x in parents)))
        grids[n] = []
        for _ in range(rng.randint(1, 3)):
            row = {}
            for key in keys:
                d = rng.randint(1, 9)
                x = F(rng.randint(0, d), d)
                row[key] = (1 - x, x)
            grids[n].append(Cpt(dag.labeling[n], parents, row))
    utilities = {pid: {o: F(rng.randint(-5, 5)) for o in dag.space.outcomes()} for pid in set(owners.values())}
    return bayes_net_game(f"random-{index}", dag, owners, grids, utilities)


def test_criterion_6_bayes_net_properness(verdict_line):
    rng = random.Random(20261014)
    verdicts = [classify_game(random_net_game(rng, i)).verdict for i in range(100)]
    bad = sum(v is not GameVerdict.PROPER for v in verdicts)
    ok = bad == 0
    verdict_line(6, "100 random Bayes-net partition games are Proper", ok, f"{100 - bad}/100 Proper")
    assert ok


def test_criterion_7_matching_pennies(verdict_line):
    grid = [F(k, 8) for k in range(9)]
    game = matching_pennies(grid, grid)
    row, col = game.player("Row"), game.player("Col")
    mismatches = 0
    for (i, p_r), (k, p_c) in itertools.product(enumerate(grid), enumerate(grid)):
        point = classify_joint_strategy(game, {"Row": row.family.grid[i], "Col": col.family.grid[k]}).point
        eu_row = sum(p * row.utility[o] for o, p in point.items())
        eu_col = sum(p * col.utility[o] for o, p in point.items())
        # exhaustive enumeration of the four outcomes, heads = "1"
        coin = lambda p, x: p if x == "1" else 1 - p
        enum_row = sum(coin(p_r, a) * coin(p_c, b) for a in X_R.domain for b in X_C.domain if a == b)
        formula = p_r * p_c + (1 - p_r) * (1 - p_c)
        if not (eu_row == enum_row == formula and eu_col == 1 - formula):
            mismatches += 1
    sensor = classify_game(sensor_variant()).verdict
    ok = mismatches == 0 and sensor is GameVerdict.PROPER
    verdict_line(7, "matching pennies EU on a 9x9 grid, sensor variant Proper", ok,
                 f"{81 - mismatches}/81 cells agree, sensor {sensor.value}")
    assert ok


def test_criterion_8_time_reversal(verdict_line):
    rep = time_reversed_newcomb(NewcombParams(1))
    ok = all(rep.identical.values()) and set(rep.identical) == {"fearful", "realist", "merged-3"}
    ok = ok and rep.forward == rep.reversed and rep.annotations["forward"] != rep.annotations["reversed"]
    verdict_line(8, "forward and reversed reports field-identical", ok, str(rep.identical))
    assert ok


def test_criterion_9_utility_irrelevance(verdict_line):
    def summary(payoffs):
        out = [best_response(newcomb_fearful(NewcombParams(1, payoffs)), "you").maximizers]
        for q in ((F(1), F(0)), (F(0), F(1)), (F(1, 2), F(1, 2))):
            out.append(best_response(newcomb_realist(q, payoffs), "you").maximizers)
        for alpha in ALPHAS:
            p = NewcombParams(alpha, payoffs)
            out.extend(merged_scenario(w, p).classification.verdict for w in (1, 2, 3))
        return out

    base = summary(TABLE1)
    moves = [(F(2), F(0)), (F(1, 1000), F(5)), (F(7), F(-3000))]
    ok = all(summary(affine_payoffs(a, b)) == base for a, b in moves)
    verdict_line(9, "positive affine rescaling leaves maximizers and verdicts unchanged", ok, f"{len(moves)} rescalings")
    assert ok


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-v"]))
