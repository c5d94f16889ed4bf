"""Acceptance criteria 1-8.  Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line."""
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from linkforge.geomlink import (OracleInconclusive, conway_gordon_invariant, gauss_linking_oracle,
                                linking_number, random_general_position_embedding)
from linkforge.linkalg import verify_conclusion
from linkforge.pipelines import (BipartiteTrace, PipelineTrace, SeededSupplier, SymbolicKeyRingOracle,
                                 TableSupplier, TheoremTrace, TwoComponentTrace, bipartite_orchestrate,
                                 bipartite_stage_sizes, bound_key_q, random_stitch_input, replay_bipartite,
                                 replay_stitch, replay_theorem, replay_two_component, stitch_links,
                                 synthesize_h_system, theorem_modq_orchestrate, two_component_pipeline)
from linkforge.selection import brute_force_shift_oracle, find_nonvanishing_shift
from linkforge.simplicial import (build_path, build_prism_sphere, extra_facet_count, is_D_large,
                                  sphere_problems, validate_path, vsphere_upper)

SUITE_START = time.perf_counter()


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_conway_gordon(report):
    start = time.perf_counter()
    values = [conway_gordon_invariant(random_general_position_embedding(6, s)) for s in range(100)]
    elapsed = time.perf_counter() - start
    ok = values == [1] * 100 and elapsed < 10
    report(1, ok, f"Conway-Gordon sum is 1 for {values.count(1)}/100 K6 embeddings in {elapsed:.2f}s (< 10s)")


def _random_cycle_pair(rng, N):
    k1 = rng.randint(3, N - 3)
    k2 = rng.randint(3, N - k1)
    verts = rng.sample(range(N), k1 + k2)
    return verts[:k1], verts[k1:]


def test_criterion_2_oracle_agreement(report):
    start = time.perf_counter()
    rng = random.Random(2024)
    conclusive = agree = 0
    mismatches = []
    for i in range(100):
        e = random_general_position_embedding(9, 1000 + i)
        c1, c2 = _random_cycle_pair(rng, 9)
        lk = linking_number(e, c1, c2)
        try:
            g = gauss_linking_oracle(e, c1, c2)
        except OracleInconclusive:
            continue
        conclusive += 1
        if g == lk:
            agree += 1
        else:
            mismatches.append((i, c1, c2, lk, g))
    elapsed = time.perf_counter() - start
    ok = conclusive >= 95 and agree == conclusive and elapsed < 30
    report(2, ok, f"linking_number = Gauss oracle on {agree}/{conclusive} conclusive of 100 K9 pairs "
                  f"in {elapsed:.2f}s (< 30s); mismatches {mismatches[:3]}")


def test_criterion_3_forbidden_values(report):
    start = time.perf_counter()
    rng = random.Random(3)
    failures = 0
    nonzero = [x for x in range(-5, 6) if x]
    for d in (1, 2, 3, 4):
        N = 2 ** d
        for _ in range(1000):
            f = [rng.choice(nonzero) for _ in range(d)]
            v = [tuple(rng.randint(-5, 5) for _ in range(d)) for _ in range(N + 1)]
            try:
                if find_nonvanishing_shift(f, v) not in brute_force_shift_oracle(f, v):
                    failures += 1
            except AssertionError:
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 10
    report(3, ok, f"shift search validated by brute force on 4000 instances (d = 1..4), "
                  f"{failures} failures, {elapsed:.2f}s (< 10s)")


STITCH_CONFIGS = [(1, 0, 2), (0, 1, 2), (1, 1, 2), (1, 1, 3)]


def test_criterion_4_stitching(report):
    start = time.perf_counter()
    failures = 0
    for S, T, q in STITCH_CONFIGS:
        for seed in range(1000):
            inp = random_stitch_input(S, T, q, seed=seed * 7 + S * 3 + T, zero_weight=0.3 * (seed % 2))
            _, z, _ = stitch_links(inp)
            failures += not verify_conclusion(z, q)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 60
    report(4, ok, f"stitched z is a nonzero multiple of q on 4 x 1000 minimal inputs {STITCH_CONFIGS}, "
                  f"{failures} failures, {elapsed:.2f}s (< 60s)")


def _two_component_instance(seed):
    rng = random.Random(seed)
    q = rng.randint(1, 5)
    keys = [rng.randint(1, 9) for _ in range(q)]
    kind = seed % 3
    if kind == 0:
        supplier = SeededSupplier(seed, 1, -9, 9)
    elif kind == 1:
        supplier = TableSupplier({}, 1)
    else:
        supplier = TableSupplier({p: [(rng.choice([0, q, -q, 1]),) for _ in range(q)] for p in range(1, q)}, 1)
    return keys, q, supplier


def test_criterion_5_two_component(report):
    start = time.perf_counter()
    failures = 0
    outcomes = {}
    for seed in range(1000):
        keys, q, supplier = _two_component_instance(seed)
        _, lk, trace = two_component_pipeline(keys, q, supplier)
        failures += not verify_conclusion([lk], q)
        outcomes[trace.outcome] = outcomes.get(trace.outcome, 0) + 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 10
    report(5, ok, f"two-component output is a nonzero multiple of q on 1000 instances (q <= 5), "
                  f"outcomes {dict(sorted(outcomes.items()))}, {failures} failures, {elapsed:.2f}s (< 10s)")


def test_criterion_6_simplicial_counts(report):
    start = time.perf_counter()
    problems = []
    for n in (1, 2, 3):
        for ell in range(1, 13):
            p = build_path(n, ell)
            c = p.complex
            if c.num_vertices() != ell + n or len(c.boundary_ridges()) != ell * (n - 1) + 2:
                problems.append(("counts", n, ell))
            if not validate_path(p):
                problems.append(("path", n, ell))
            t = len(c.boundary_ridges())
            s = build_prism_sphere(p)
            if sphere_problems(s.complex) or extra_facet_count(s) != n * t or s.num_vertices() != 2 * (ell + n):
                problems.append(("prism", n, ell))
            for m in (n * t + 1, 20):
                big = build_prism_sphere(p, m)
                if sphere_problems(big.complex) or extra_facet_count(big) < m \
                        or big.num_vertices() != vsphere_upper(p, m):
                    problems.append(("enlarged", n, ell, m))
            if ell <= 4 and is_D_large(s, c) is None:
                problems.append(("large", n, ell))
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 10
    report(6, ok, f"paths n <= 3, l <= 12 have l+n vertices and l(n-1)+2 boundary ridges; prism spheres valid "
                  f"with nt extra facets; problems {problems[:3]}; {elapsed:.2f}s (< 10s)")


def test_criterion_7_bounds(report):
    got = (bound_key_q(1, 1), bound_key_q(2, 1), bound_key_q(1, 2), tuple(bipartite_stage_sizes(2)))
    want = (24, 96, 36, (1024, 16, 2))
    report(7, got == want, f"key(1,1), key(2,1), key(1,2), stage sizes r=2: {got} (expected {want})")


def _replay_checks():
    bad = []
    for S, T, q in STITCH_CONFIGS:
        for seed in range(100):
            inp = random_stitch_input(S, T, q, seed=seed)
            chain, z, trace = stitch_links(inp)
            again = replay_stitch(inp, PipelineTrace.from_json(trace.to_json()))
            if again != (chain, z) or stitch_links(inp)[2].dumps() != trace.dumps():
                bad.append(("stitch", S, T, q, seed))
    for seed in range(300):
        keys, q, supplier = _two_component_instance(seed)
        chain, lk, trace = two_component_pipeline(keys, q, supplier)
        if replay_two_component(keys, q, supplier, TwoComponentTrace.from_json(trace.to_json())) != (chain, lk):
            bad.append(("two-component", seed))
    for r in (1, 2, 3):
        sys_, trace = bipartite_orchestrate(r, SymbolicKeyRingOracle())
        if replay_bipartite(BipartiteTrace.from_json(trace.to_json())).entries != sys_.entries:
            bad.append(("bipartite", r))

    def provider(u, v, ell, q):
        return synthesize_h_system(u, v, ell, q, seed=11)

    def suppliers(u, dim):
        return SeededSupplier(u, dim)

    for q in (1, 2):
        hs, trace = theorem_modq_orchestrate(2, 1, 1, q, provider, suppliers)
        again = replay_theorem(provider(*trace.schedule[0], q), TheoremTrace.from_json(trace.to_json()), suppliers)
        if again.system != hs.system:
            bad.append(("theorem", q))
    return bad


def test_criterion_8_determinism(report):
    start = time.perf_counter()
    bad = _replay_checks()
    replay_time = time.perf_counter() - start
    # time the rest of the suite in a fresh interpreter
    tests_dir = Path(__file__).parent
    others = sorted(str(p) for p in tests_dir.glob("test_*.py") if p.name != Path(__file__).name)
    env = dict(os.environ, PYTHONHASHSEED="0")
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *others],
                          capture_output=True, text=True, env=env, cwd=tests_dir.parent)
    rest = time.perf_counter() - t0
    suite = (time.perf_counter() - SUITE_START) + rest
    ok = not bad and proc.returncode == 0 and suite < 300
    tail = proc.stdout.strip().splitlines()[-1:] if proc.stdout else []
    report(8, ok, f"all traces replay bit-exactly ({len(bad)} mismatches, {replay_time:.2f}s); "
                  f"full suite {suite:.1f}s (< 300s); other modules: {tail}")
