"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` and read the "acceptance
criteria" section at the end of the report.
"""
import gc
import random
import time

import numpy as np

from layoutcheck.axioms import ground_axioms
from layoutcheck.checker import Status, check, check_flat, check_flat_unsound, necessary_condition
from layoutcheck.corpus import corpus
from layoutcheck.dsl import parse_dsl, parse_layout, print_dsl
from layoutcheck.engine import infer
from layoutcheck.gen import bounded_copies, random_flat, random_kb, random_repetition_tree, random_tree
from layoutcheck.model import C, Fixed, Pointer, Repetition, F, V, label_layout
from layoutcheck.oracle import naive_closure
from layoutcheck.preprocess import prune_pointers, shrink_pointers
from layoutcheck.transform import UnwindLimitError, duplicate_repetitions, reverse, unwind

OK, NO = Status.DESERIALIZABLE, Status.NON_DESERIALIZABLE


def test_verdict_regression(criterion):
    flat = [
        ("f v", NO),
        ("f v f", NO),
        ("p(2,1) f v f", OK),
        ("p(0,4) v p(3,1) v", NO),
        ("f p(2,3) f v v p(3,1)", OK),
        ("f p(2,3) f v v p(4,1)", OK),
        ("f p(2,4) f v p(5,1) v", NO),
        ("p(1,4) v p(1,1) v p(3,1)", OK),
    ]
    wrong = [f"{t}: {check(parse_layout(t)).status.value}" for t, want in flat if check(parse_layout(t)).status is not want]
    if not necessary_condition(parse_layout("p(0,4) v p(3,1) v")).satisfied:
        wrong.append("p(0,4) v p(3,1) v: necessary condition should hold")
    caveat = parse_layout("p(1,1) [ v ]")
    if check_flat_unsound(caveat).status is not OK:
        wrong.append("p(1,1) [ v ]: unsound check should accept")
    if check(caveat).status is not NO:
        wrong.append("p(1,1) [ v ]: check should reject")
    detail = f"{len(flat) + 3} expectations, mismatches: {wrong or 'none'}"
    assert criterion(1, "verdict regression", not wrong, detail), detail


def test_soundness_gate(criterion):
    rng = random.Random(101)
    violations, accepted, nested = [], 0, 0
    start = time.perf_counter()
    for k in range(1000):
        tree = random_tree(rng, 8, 2) if k % 2 else random_flat(rng, 8)
        layout = label_layout(tree)
        nested += not layout.is_flat
        if check(layout).deserializable:
            accepted += 1
            if not necessary_condition(layout).satisfied:
                violations.append(str(layout))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed <= 10.0
    detail = (
        f"1000 layouts ({nested} with repetitions), {accepted} deserializable, "
        f"{len(violations)} unbounded-but-accepted, {elapsed:.2f}s (limit 10s)"
    )
    assert criterion(2, "deserializable implies bounded", ok, detail), (detail, violations[:5])


def test_twice_matches_reverse(criterion):
    rng = random.Random(202)
    fragments, tried = [], 0
    while len(fragments) < 150:
        tried += 1
        r = random_flat(rng, 8)
        if check_flat(label_layout(r)).deserializable:
            continue
        if check_flat(label_layout(bounded_copies(r, 1))).deserializable:
            fragments.append(r)
    mismatches = []
    agree_ok = 0
    for r in fragments:
        twice = check_flat(label_layout(bounded_copies(r, 2))).status
        rev = check_flat(reverse(label_layout(r))).status
        if twice is not rev:
            mismatches.append(print_dsl(r))
        agree_ok += twice is OK
    ok = len(fragments) >= 100 and not mismatches
    detail = (
        f"{len(fragments)} fragments passing the ONCE filter (of {tried} drawn), "
        f"{len(fragments) - len(mismatches)} agree ({agree_ok} both deserializable), {len(mismatches)} disagree"
    )
    assert criterion(3, "TWICE verdict equals reverse verdict", ok, detail), (detail, mismatches[:5])


def test_engine_differential(criterion):
    rng = random.Random(303)
    bad = []
    for k in range(500):
        kb = random_kb(rng, 40, 120)
        if set(infer(kb)[0]) != naive_closure(kb):
            bad.append(f"random kb #{k}")
    entries = corpus()
    for entry in entries:
        for layout in (parse_layout(entry.text), duplicate_repetitions(parse_layout(entry.text))):
            kb = ground_axioms(layout)
            if set(infer(kb)[0]) != naive_closure(kb):
                bad.append(entry.name)
    detail = f"500 random KBs + {len(entries)} corpus layouts (plain and duplicated), {len(bad)} differences"
    assert criterion(4, "engine closure equals naive fixpoint", not bad, detail), (detail, bad[:5])


def _unwinding_pass(rng, count, **gen):
    """(violations, accepted, skipped, checked-at-n counts) over ``count`` repetition layouts."""
    violations, accepted, skipped = [], 0, []
    depth_used = {1: 0, 2: 0, 3: 0}
    for _ in range(count):
        layout = label_layout(random_repetition_tree(rng, 6, 2, **gen))
        if not check(layout).deserializable:
            continue
        accepted += 1
        for n in (3, 2, 1):
            try:
                members = unwind(layout, n)
            except UnwindLimitError:
                continue
            depth_used[n] += 1
            violations += [(str(layout), str(m)) for m in members if not check_flat(m).deserializable]
            break
        else:
            skipped.append(str(layout))
    return violations, accepted, skipped, depth_used


def test_unwinding_soundness(criterion):
    rng = random.Random(404)
    v1, acc1, skip1, used1 = _unwinding_pass(rng, 200)
    # pointer-heavy mix so that more layouts are accepted and the implication is exercised
    v2, acc2, skip2, used2 = _unwinding_pass(rng, 200, weights=(35, 10, 40, 15), parent_rate=0.4)
    ok = not v1 and not v2
    detail = (
        f"default mix: 200 layouts, {acc1} deserializable, unwound at n=3/2/1: {used1[3]}/{used1[2]}/{used1[1]}, "
        f"{len(skip1)} over the unwinding cap, {len(v1)} violations; "
        f"pointer-heavy mix: 200 layouts, {acc2} deserializable, n=3/2/1: {used2[3]}/{used2[2]}/{used2[1]}, "
        f"{len(skip2)} over the cap, {len(v2)} violations"
    )
    assert criterion(5, "accepted layouts have only deserializable unwindings", ok, detail), (detail, (v1 + v2)[:5])


def _best_time(tree, repeats):
    best = float("inf")
    for _ in range(repeats):
        gc.collect()
        gc.disable()
        try:
            start = time.perf_counter()
            check(label_layout(tree))
            best = min(best, time.perf_counter() - start)
        finally:
            gc.enable()
    return best


def _line_fit(sizes, times, weights):
    """Least-squares fit of times ~ a*n + b with per-point weights; returns (a, b, max relative residual)."""
    x, y, w = np.asarray(sizes, float), np.asarray(times, float), np.asarray(weights, float)
    a, b = np.polyfit(x, y, 1, w=w)
    residual = np.abs(a * x + b - y) / y
    return a, b, float(residual.max())


def test_linearity(criterion):
    sizes = [2**10, 2**12, 2**14, 2**16]
    check(label_layout((Pointer((1,), 1), V) + (F,) * 256))  # warm-up
    times = []
    for n in sizes:
        tree = (Pointer((1,), 1), V) + (F,) * (n - 2)
        times.append(_best_time(tree, 7 if n < 2**16 else 5))
    # np.polyfit weights multiply residuals: 1/t turns the objective into squared relative error,
    # matching the relative-residual criterion; the plain absolute-error fit is reported alongside
    a, b, rel = _line_fit(sizes, times, [1 / t for t in times])
    _, _, rel_abs = _line_fit(sizes, times, [1.0] * len(sizes))
    ok = rel < 0.20
    per_item = ", ".join(f"2^{n.bit_length() - 1}: {t / n * 1e6:.2f}us" for n, t in zip(sizes, times))
    detail = (
        f"time/item {per_item}; relative-error fit a={a * 1e6:.2f}us/item b={b * 1e3:.2f}ms, "
        f"max relative residual {rel:.1%} (limit 20%); absolute-error fit max relative residual {rel_abs:.1%}"
    )
    assert criterion(6, "check time is linear in layout size", ok, detail), detail


def test_preprocessing(criterion):
    shrunk = str(shrink_pointers(parse_layout("p(0,5) v f v f")))
    rng = random.Random(606)
    changed, bad = 0, []
    for _ in range(300):
        layout = label_layout(random_flat(rng, 8))
        want = check_flat(layout).status
        for name, fn in (("shrink", shrink_pointers), ("prune", prune_pointers)):
            out = fn(layout)
            changed += out.tree != layout.tree
            if check_flat(out).status is not want:
                bad.append(f"{name}: {layout}")
    ok = shrunk == "p(1,3) v f v f" and not bad
    detail = f"'p(0,5) v f v f' shrinks to '{shrunk}'; 300 flat layouts, {changed} rewritten, {len(bad)} verdict changes"
    assert criterion(7, "pointer shrinking and pruning", ok, detail), (detail, bad[:5])


def _with_constants(rng, items):
    out = []
    for it in items:
        if isinstance(it, Fixed) and rng.random() < 0.2:
            out.append(C)
        elif isinstance(it, Repetition):
            out.append(Repetition(_with_constants(rng, it.body)))
        else:
            out.append(it)
    return tuple(out)


def test_dsl_round_trip(criterion):
    rng = random.Random(808)
    bad = []
    for _ in range(1000):
        tree = _with_constants(rng, random_tree(rng, 10, 3, min_items=0, max_body=5))
        text = print_dsl(tree)
        if parse_dsl(text) != tree:
            bad.append(text)
    detail = f"1000 random trees (depth <= 3, with constants), {len(bad)} round-trip failures"
    assert criterion(8, "DSL print/parse round trip", not bad, detail), (detail, bad[:5])
