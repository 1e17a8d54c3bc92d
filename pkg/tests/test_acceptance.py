"""Acceptance criteria, one test each, each with its time budget.

Every test records a PASS/FAIL line; ``conftest.py`` prints them at the end
of the run, and ``python tests/test_acceptance.py`` prints them directly.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path


sys.path.insert(0, str(Path(__file__).parent))

from guarded_proc import ccs  # noqa: E402
from guarded_proc.approx import check_unique, eval_levels, leaf_perturbations, restrict  # noqa: E402
from guarded_proc.bisim import bisim_chain, bisim_level, bisim_stable  # noqa: E402
from guarded_proc.canon_set import FinSet, fmap, member, preimage_witness  # noqa: E402
from guarded_proc.cli import load  # noqa: E402
from guarded_proc.functor_kit import (  # noqa: E402
    ConstFin,
    Id,
    Pfin,
    Prod,
    Relation,
    Sum,
    enumerate_values,
    fmap as fmap_f,
    glts_functor,
    proj0,
    proj1,
    rel_lift_bf,
    rel_lift_witness,
    witness_count,
)
from guarded_proc.hml import distinguish, modal_depth, sat  # noqa: E402
from guarded_proc.limits import Limits  # noqa: E402
from guarded_proc.random_systems import SystemShape, random_glts, random_relation  # noqa: E402
from hml_oracle import representatives  # noqa: E402

RESULTS: list[str] = []


class Criterion:
    """Times a block and records one line; raises if the check or the budget fails."""

    def __init__(self, key: str, title: str, budget: float):
        self.key, self.title, self.budget = key, title, budget
        self.detail = ""
        self.ok = True

    def fail(self, detail: str):
        self.ok = False
        self.detail = detail

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        if exc_type is not None:
            self.ok, self.detail = False, f"{exc_type.__name__}: {exc}"
        timely = elapsed < self.budget
        verdict = "PASS" if self.ok and timely else "FAIL"
        extra = "" if timely else f" over budget {self.budget:g}s"
        line = f"[{verdict}] {self.key} {self.title} ({elapsed:.2f}s{extra})"
        if self.detail:
            line += f": {self.detail}"
        RESULTS.append(line)
        print(line)
        if exc_type is None:
            assert self.ok, self.detail
            assert timely, f"took {elapsed:.2f}s, budget {self.budget}s"
        return False


def test_c01_fig1_bisimilar_pairs():
    with Criterion("C1", "worked-example pairs bisimilar at every level", 1.0) as c:
        g = load("fixture:fig1.glts").system
        R, k = bisim_stable(g)
        bound = len(g.states) ** 2 + 1
        chain = bisim_chain(g, k + 1)
        pairs = [("x0", "y0"), ("x1", "y1"), ("x0", "y2"), ("x2", "y1")]
        bad = [(x, y, n) for x, y in pairs for n in range(k + 2) if (x, y) not in chain[n]]
        bad += [(x, y, "limit") for x, y in pairs if not R(x, y)]
        if bad or k > bound:
            c.fail(f"unrelated {bad}, stabilised at {k} (bound {bound})")
        else:
            c.detail = f"stable at level {k} <= {bound}"


def test_c02_level0_only():
    with Criterion("C2", "a.(b+c) vs a.b+a.c equal exactly at level 0", 1.0) as c:
        loaded = load("fixture:hml.ccs", ["p", "q"])
        g, p, q = loaded.system, loaded.state("p"), loaded.state("q")
        levels = eval_levels(g, 5)
        eq = [levels[n][p] == levels[n][q] for n in range(6)]
        b = [bisim_level(g, n).rel(p, q) for n in range(6)]
        expected = [True] + [False] * 5
        if eq != expected or b != expected:
            c.fail(f"eval equal {eq}, B_n {b}")


def test_c03_coincidence():
    with Criterion("C3", "B_n(x,y) iff eval(x,n) == eval(y,n), 1000 systems, n<=5", 60.0) as c:
        rng = random.Random(3)
        shape = SystemShape(max_states=6, max_actions=3, max_out=3)
        checked, bad = 0, []
        for _ in range(1000):
            g = random_glts(rng, shape)
            chain = bisim_chain(g, 5)
            levels = eval_levels(g, 5)
            for n in range(6):
                for x in g.states:
                    for y in g.states:
                        checked += 1
                        if ((x, y) in chain[n]) != (levels[n][x] == levels[n][y]):
                            bad.append((x, y, n))
        if bad:
            c.fail(f"{len(bad)} counterexamples, first {bad[0]}")
        else:
            c.detail = f"{checked} pair-levels, 0 counterexamples"


def test_c04_witness_iff_back_and_forth():
    with Criterion("C4", "lifting witness exists iff back-and-forth holds, 500 instances", 60.0) as c:
        rng = random.Random(4)
        F = glts_functor(["a", "b"])
        disagreements, related = 0, 0
        for _ in range(500):
            carrier = list(range(rng.randint(1, 4)))
            R = random_relation(rng, carrier, carrier, rng.random())
            elems = [(a, x) for a in ("a", "b") for x in carrier]
            u = FinSet(rng.sample(elems, rng.randint(0, min(4, len(elems)))))
            if rng.random() < 0.5:
                v = FinSet(rng.sample(elems, rng.randint(0, min(4, len(elems)))))
            else:
                # answer each move of u through R where possible, so related cases are common
                v = FinSet((a, rng.choice([y for y in carrier if R(x, y)] or [x])) for a, x in u)
            w = rel_lift_witness(F, R, u, v)
            bf = rel_lift_bf(F, R, u, v)
            valid = w is None or (fmap_f(F, proj0, w) == u and fmap_f(F, proj1, w) == v)
            related += bf
            if (w is not None) != bf or not valid:
                disagreements += 1
        if disagreements:
            c.fail(f"{disagreements} disagreements")
        else:
            c.detail = f"0 disagreements ({related} related)"


GRAMMAR = [
    ConstFin(FinSet(["a", "b"])),
    Id(),
    Prod(ConstFin(FinSet(["a", "b"])), Id()),
    Sum(Id(), ConstFin(FinSet(["a"]))),
    Pfin(Id()),
    Pfin(Prod(ConstFin(FinSet(["a", "b"])), Id())),
    Prod(Id(), Pfin(Id())),
    Sum(Pfin(Id()), Prod(Id(), Id())),
    Pfin(Pfin(Id())),
]


def test_c05_lifting_of_equality():
    with Criterion("C5", "lifted equality is equality, grammar functors, carrier <= 3", 30.0) as c:
        limits = Limits(enumeration=1000)
        compared, bad = 0, []
        for F in GRAMMAR:
            for size in range(1, 4):
                carrier = list(range(size))
                vals = enumerate_values(F, carrier, 64, limits)
                eq = Relation.identity(carrier)
                for u in vals:
                    for v in vals:
                        compared += 1
                        if rel_lift_bf(F, eq, u, v) != (u == v):
                            bad.append((str(F), u, v))
        if bad:
            c.fail(f"{len(bad)} mismatches, first {bad[0]}")
        else:
            c.detail = f"{compared} pairs over {len(GRAMMAR)} functors"


def test_c06_witness_count():
    with Criterion("C6", "witness count for total R on {x,y} under Pfin(Id) is 7", 1.0) as c:
        R = Relation.total(["x", "y"], ["x", "y"])
        u = FinSet(["x", "y"])
        n = witness_count(Pfin(Id()), R, u, u)
        if n != 7:
            c.fail(f"got {n}")
        else:
            c.detail = "7 distinct witnesses"


def test_c07_image_membership():
    with Criterion("C7", "membership under map and preimage witnesses, 1000 cases", 10.0) as c:
        rng = random.Random(7)
        failures = 0
        for _ in range(1000):
            dom = range(rng.randint(1, 8))
            table = {a: rng.randrange(6) for a in dom}
            x = FinSet(rng.sample(list(dom), rng.randint(0, len(dom))))
            b = rng.randrange(6)
            image = fmap(table.__getitem__, x)
            if not all(member(table[a], image) for a in x):
                failures += 1
            w = preimage_witness(table.__getitem__, x, b)
            if member(b, image):
                failures += w is None or not member(w, x) or table[w] != b
            else:
                failures += w is not None
        if failures:
            c.fail(f"{failures} failures")


def test_c08_ccs_semantics():
    with Criterion("C8", "CCS rules on the handshake, restriction, guardedness, loop", 1.0) as c:
        a, a_bar = ccs.In(0), ccs.Out(0)
        p = ccs.parse("a.0 | 'a.0")
        zero_left = ccs.Par(ccs.NIL, ccs.Prefix(a_bar, ccs.NIL))
        zero_right = ccs.Par(ccs.Prefix(a, ccs.NIL), ccs.NIL)
        expected = FinSet([(a, zero_left), (a_bar, zero_right), (ccs.TAU, ccs.Par(ccs.NIL, ccs.NIL))])
        problems = []
        if ccs.act(p, 1) != expected:
            problems.append(f"handshake: {ccs.act(p, 1)}")
        hidden = ccs.parse("nu a. (a.0 | 'a.0)")
        if ccs.act(hidden) != FinSet([(ccs.TAU, ccs.Nu(ccs.Par(ccs.NIL, ccs.NIL)))]):
            problems.append(f"restriction: {ccs.act(hidden)}")
        try:
            ccs.parse("mu X. (b.0 | X)")
            problems.append("unguarded recursion accepted")
        except ccs.GuardednessError:
            pass
        g, [root] = ccs.to_glts(ccs.parse("mu X. a.X"), ["a"])
        if len(g.states) != 1 or g.out(root) != FinSet([("a", root)]):
            problems.append(f"loop compiled to {len(g.states)} states")
        if problems:
            c.fail("; ".join(problems))


def _hml_systems():
    rng = random.Random(9)
    shape = SystemShape(max_states=6, max_actions=2, max_out=3)
    return [random_glts(rng, shape) for _ in range(200)]


def test_c09a_hml_adequacy():
    with Criterion("C9a", "B_n-related states agree on every formula of depth <= n+1", 120.0) as c:
        failures, pairs, formulas = 0, 0, 0
        for g in _hml_systems():
            chain = bisim_chain(g, 3)
            for n in range(4):
                reps = representatives(g, n + 1, n)
                formulas += len(reps)
                for x, y in chain[n]:
                    pairs += 1
                    for U, phi in reps.items():
                        if sat(g, x, phi, n) != sat(g, y, phi, n) or (x in U) != (y in U):
                            failures += 1
        if failures:
            c.fail(f"{failures} failures")
        else:
            c.detail = f"{pairs} related pairs, {formulas} formula classes"


def test_c09b_distinguish_exactly_when_not_bisimilar():
    with Criterion("C9b", "distinguish finds a formula exactly when B_n fails", 120.0) as c:
        invalid, missing, spurious, separated, first = 0, 0, 0, 0, None
        for i, g in enumerate(_hml_systems()):
            chain = bisim_chain(g, 3)
            for n in range(4):
                for x in g.states:
                    for y in g.states:
                        d = distinguish(g, x, y, n)
                        related = (x, y) in chain[n]
                        if d is None:
                            if not related:
                                missing += 1
                                first = first or (i, x, y, n)
                            continue
                        spurious += related
                        separated += not related
                        ok = (
                            modal_depth(d.formula) <= n + 1
                            and sat(g, d.holds_at, d.formula, n)
                            and not sat(g, d.fails_at, d.formula, n)
                        )
                        invalid += not ok
        if invalid or missing or spurious:
            c.fail(
                f"{missing} non-bisimilar pairs with no formula (first: system {first[0]}, "
                f"{first[1]} vs {first[2]} at level {first[3]}), {invalid} invalid, {spurious} spurious"
                if first
                else f"{invalid} invalid, {spurious} spurious"
            )
        else:
            c.detail = f"{separated} non-bisimilar pair-levels, each separated by a valid formula"


def test_c10_model_coherence():
    with Criterion("C10", "restriction coherence and uniqueness by perturbation, 500 systems", 30.0) as c:
        rng = random.Random(10)
        shape = SystemShape(max_states=6, max_actions=3, max_out=3)
        failures, perturbed = 0, 0
        for _ in range(500):
            g = random_glts(rng, shape)
            levels = eval_levels(g, 5)
            alphabet = list(g.actions)
            for n in range(5):
                h = levels[n]
                failures += any(restrict(levels[n + 1][x]) != h[x] for x in g.states)
                failures += not check_unique(g, h, n)
                for x in g.states:
                    for t in leaf_perturbations(h[x], alphabet):
                        perturbed += 1
                        failures += check_unique(g, {**h, x: t}, n)
        if failures:
            c.fail(f"{failures} failures")
        else:
            c.detail = f"{perturbed} perturbations rejected"


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all(line.startswith("[PASS]") for line in RESULTS) else 1)
