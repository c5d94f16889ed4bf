import pytest
from hypothesis import given, settings, strategies as st

from linkforge.linkalg import chain_vector, verify_conclusion
from linkforge.selection import SelectionNotFound
from linkforge.pipelines.stitch import (PipelineTrace, ReplayError, StitchInput, choose_nonvanishing_base,
                                        minimal_sizes, random_stitch_input, replay_matches, replay_stitch,
                                        select_sign_uniform_sublink, select_three_valued_sublink,
                                        stitch_consecutive, stitch_link_system, stitch_links)
from linkforge.pipelines.suppliers import ConstantSupplier, SeededSupplier, TableSupplier, supplier_from_json


def test_minimal_sizes():
    assert minimal_sizes(1, 0, 1) == (2, 3, 2)
    assert minimal_sizes(1, 1, 2) == (8, 48, 16)


def test_sign_uniform_examples():
    rows, signs = select_sign_uniform_sublink([(3,), (-2,), (5,), (-1,)], 2)
    assert rows == [0, 2] and signs == [1]
    rows, signs = select_sign_uniform_sublink([(-1,), (-2,)], 2)
    assert rows == [0, 1] and signs == [-1]
    rows, signs = select_sign_uniform_sublink([(1, 1), (1, -1), (-1, 1), (-1, -1)], 1)
    assert len(rows) == 1


def test_three_valued_examples():
    assert select_three_valued_sublink([(0,), (0,), (1,)], 1) == [0, 1]
    assert select_three_valued_sublink([(0, 0)] * 3, 3) == [0, 1, 2]
    rows = select_three_valued_sublink([(1,), (-1,), (0,)] * 2, 2)
    assert len(rows) == 2 and len({(-1 if r % 3 == 1 else r % 3) for r in rows}) == 1


def test_nonvanishing_base_examples():
    assert choose_nonvanishing_base((1, 2), [(5, 5), (1, 1)]) == 0
    assert choose_nonvanishing_base((0,), [(2,)]) == 1
    assert choose_nonvanishing_base((1,), [(-1,)]) == 0


def test_stitch_consecutive_examples():
    step = stitch_consecutive((2,), [(1,)] * 4, 2)
    assert step.segment_range == (1, 2) and step.z == (4,)
    assert stitch_consecutive((1,), [(0,)] * 2, 1).z == (1,)
    step = stitch_consecutive((1,), [(-1,), (-1,)], 1)
    assert step.segment_range == (1, 2) and step.z == (-1,)


def test_small_pipeline_example():
    inp = StitchInput(1, 0, 1, ((1,), (1,)), ((), ()), ((0,), (0,), (0,)), ((), (), ()), 2,
                      ConstantSupplier([0]))
    chain, z, trace = stitch_links(inp)
    assert dict(chain) == {"J1": 1} and z == (1,)
    assert replay_matches(inp, trace)


def test_pipeline_all_ones():
    A, B, lam = minimal_sizes(0, 1, 2)
    inp = StitchInput(0, 1, 2, ((),) * A, ((1,),) * A, ((),) * B, ((1,),) * B, lam, ConstantSupplier([1]))
    _, z, _ = stitch_links(inp)
    assert verify_conclusion(z, 2)


def test_invalid_inputs():
    A, B, lam = minimal_sizes(1, 0, 2)
    good = dict(S=1, T=0, q=2, JX=((1,),) * A, JY=((),) * A, LX=((0,),) * B, LY=((),) * B, lam=lam,
                supplier=ConstantSupplier([0]))
    StitchInput(**good).validate()
    for key, value in (("JX", ((0,),) * A), ("lam", lam - 1), ("JX", ((1,),) * (A - 1)),
                       ("supplier", ConstantSupplier([0, 0]))):
        bad = dict(good, **{key: value})
        if key == "JX" and len(value) != A:
            bad["JY"] = ((),) * len(value)
        with pytest.raises(ValueError):
            stitch_links(StitchInput(**bad))


def test_replay_detects_tampering():
    inp = random_stitch_input(1, 1, 2, seed=4)
    _, _, trace = stitch_links(inp)
    for field, value in (("x_signs", [-s for s in trace.x_signs]), ("beta", trace.beta[::-1]),
                         ("components", trace.components + ["J1"])):
        obj = trace.to_json()
        obj[field] = value
        with pytest.raises(ReplayError):
            replay_stitch(inp, PipelineTrace.from_json(obj))


def test_input_json_round_trip():
    inp = random_stitch_input(1, 1, 2, seed=9)
    back = StitchInput.from_json(inp.to_json())
    assert back == inp
    assert stitch_links(back)[1] == stitch_links(inp)[1]


def test_supplier_json():
    for s in (SeededSupplier(3, 2), TableSupplier({1: [(1, 2)]}, 2), ConstantSupplier([4, 5])):
        back = supplier_from_json(s.to_json())
        assert back.segments(1, 1) == s.segments(1, 1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(1, 0, 2), (0, 1, 2), (1, 1, 2), (1, 1, 3), (2, 0, 2), (0, 2, 2)]),
       st.integers(0, 10 ** 6), st.sampled_from([0.0, 0.5]))
def test_stitch_property(cfg, seed, zero_weight):
    S, T, q = cfg
    inp = random_stitch_input(S, T, q, seed, zero_weight=zero_weight)
    chain, z, trace = stitch_links(inp)
    assert verify_conclusion(z, q)
    assert replay_matches(inp, trace)
    sys = stitch_link_system(inp, chain)
    targets = [f"X{s + 1}" for s in range(S)] + [f"Y{t + 1}" for t in range(T)]
    assert chain_vector(sys, chain, targets) == z


def test_selection_quota_unreachable():
    with pytest.raises(SelectionNotFound):
        select_sign_uniform_sublink([(1,), (-1,)], 2)
    with pytest.raises(SelectionNotFound):
        select_three_valued_sublink([(1,), (-1,), (0,)], 2)
    with pytest.raises(ValueError):
        select_sign_uniform_sublink([(0,)], 1)
