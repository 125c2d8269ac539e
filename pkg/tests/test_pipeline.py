import json
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cached_build
from cymotive.curves import builtin_curve
from cymotive.motives import HodgeDiamond, LefschetzSum
from cymotive.pipeline import (
    CertificateEntry,
    ConstructionSpec,
    PipelineError,
    StepPreconditionError,
    atom,
    build,
    ch_z2_step,
    ch_z3_step,
    euler_characteristic,
    kodaira_zero_h11,
    minimal_surface,
    schreieder_step,
    star_certificate,
)

E2 = builtin_curve("hyperelliptic_involution", g=1)
E3 = builtin_curve("mu_curve", g=1)


def test_atom_elliptic_involution():
    V = atom(E2)
    assert V.dim == 1
    (fc,) = V.fixed_table[1]
    assert (fc.dim, fc.component_count, fc.normal_weights) == (0, 4, (1,))
    assert fc.motive_per_component() == LefschetzSum.of({0: 1})
    assert V.motive.lefschetz == LefschetzSum.of({0: 1, 1: 1})


def test_atom_mu_curves():
    comps = atom(E3).fixed_table[1]
    assert sorted((fc.normal_weights, fc.component_count) for fc in comps) == [((1,), 3)]
    C9 = builtin_curve("mu_curve", g=4)
    assert sum(fc.component_count for fc in atom(C9).fixed_table[3]) == 3


def test_kummer_step():
    V = cached_build(construction="ch-z2", n=2)
    assert V.hodge_diamond()[1, 1] == 20 and V.hodge_diamond()[2, 0] == 1
    (fc,) = V.fixed_table[1]
    assert fc.dim == 1 and fc.normal_weights == (1,)
    assert fc.motive == LefschetzSum.of({0: 8, 1: 8})
    kinds = [e.kind for e in V.certificate]
    assert "blow_up" in kinds and "quotient" in kinds and "blow_down" not in kinds


def test_kummer_threefold_has_three_deformations():
    V = cached_build(construction="ch-z2", n=3)
    assert V.hodge_diamond()[2, 1] == 3


def test_order_three_surface_and_threefold():
    V = cached_build(construction="ch-z3", n=2)
    assert V.hodge_diamond()[1, 1] == 20
    assert "blow_down" in [e.kind for e in V.certificate]
    W = cached_build(construction="ch-z3", n=3)
    assert [W.hodge_diamond()[p, 3 - p] for p in range(4)] == [1, 0, 0, 1]
    # fixed locus: a divisor and a codimension-2 part
    assert {fc.codim for fc in W.fixed_table[1]} == {1, 2}


def test_euler_characteristics():
    assert euler_characteristic(cached_build(construction="ch-z2", n=2)) == 24
    assert euler_characteristic(cached_build(construction="ch-z3", n=2)) == 24


def test_involution_step_rejects_non_divisorial_fixed_locus():
    V = cached_build(construction="ch-z2", n=2)
    bad = replace(V, fixed_table={1: (replace(V.fixed_table[1][0], normal_weights=(1, 1), dim=0),)})
    with pytest.raises(StepPreconditionError, match="codim 2"):
        ch_z2_step(bad, atom(E2))


def test_moduli_must_match():
    with pytest.raises(StepPreconditionError):
        ch_z2_step(atom(E2), atom(E3))
    with pytest.raises(StepPreconditionError):
        ch_z3_step(atom(E2), atom(E2))
    with pytest.raises(StepPreconditionError):
        schreieder_step(atom(E3), atom(E3), c=2)


def test_schreieder_requires_a_greater_than_b():
    with pytest.raises(ValueError, match="a > b"):
        ConstructionSpec("schreieder", 2, c=2, a=1, b=1)


def test_schreieder_examples():
    V = cached_build(construction="schreieder", n=3, c=1, a=2, b=1)
    assert V.hodge_diamond()[2, 1] == 1 and V.hodge_diamond()[3, 0] == 0
    W = cached_build(construction="schreieder", n=3, c=2, a=2, b=1)
    assert W.hodge_diamond()[2, 1] == 4


def test_schreieder_surface_minimal_model_is_k3():
    spec = ConstructionSpec("schreieder", 2, c=1, a=2, b=0)
    explicit = build(spec)
    assert explicit.hodge_diamond()[1, 1] == 29
    M = minimal_surface(spec)
    assert M.hodge_diamond()[1, 1] == 20 == kodaira_zero_h11(M)
    with pytest.raises(PipelineError):
        minimal_surface(ConstructionSpec("schreieder", 2, c=2, a=2, b=0))


def test_supersingular_mode_only_for_ch():
    with pytest.raises(ValueError):
        ConstructionSpec("schreieder", 2, c=1, a=2, b=0, mode="supersingular")


def test_spec_validation():
    with pytest.raises(ValueError):
        ConstructionSpec("ch-z2", 2, genera=(1,))
    with pytest.raises(ValueError):
        ConstructionSpec("ch-z3", 2, genera=(1, 1))
    with pytest.raises(ValueError):
        ConstructionSpec("schreieder", 3, c=1, a=2, b=0)
    with pytest.raises(ValueError):
        ConstructionSpec("nope", 2)


def test_certificate_reports():
    V = cached_build(construction="ch-z3", n=2)
    rep = star_certificate(V)
    assert rep.valid and rep.lines[-1] == "VALID"
    assert json.loads(json.dumps(rep.to_json()))["verdict"] == "VALID"


def test_failed_check_invalidates_certificate():
    V = cached_build(construction="ch-z2", n=2)
    broken = CertificateEntry("blow_up", (("center is group-stable", False),), "blow-up")
    rep = star_certificate(replace(V, certificate=V.certificate + (broken,)))
    assert not rep.valid and rep.lines[-1] == "INVALID"


def test_json_serialization_round_trip():
    V = cached_build(construction="ch-z3", n=3)
    data = json.loads(json.dumps(V.to_json()))
    rows = data["diamond"]
    d = HodgeDiamond.from_mapping(len(rows) - 1, {(p, q): v for p, row in enumerate(rows) for q, v in enumerate(row)})
    assert d == V.hodge_diamond()


genera_lists = st.lists(st.integers(1, 3), min_size=2, max_size=3)


@settings(max_examples=15)
@given(genera_lists, st.randoms(use_true_random=False))
def test_order_of_curves_does_not_matter(genera, rnd):
    shuffled = list(genera)
    rnd.shuffle(shuffled)
    a = build(ConstructionSpec("ch-z2", len(genera), genera=tuple(genera)))
    b = build(ConstructionSpec("ch-z2", len(genera), genera=tuple(shuffled)))
    assert a.hodge_diamond() == b.hodge_diamond()
    assert a.motive.lefschetz == b.motive.lefschetz


@settings(max_examples=15)
@given(genera_lists)
def test_involution_builds_are_consistent(genera):
    V = build(ConstructionSpec("ch-z2", len(genera), genera=tuple(genera)))
    d = V.hodge_diamond()
    assert d.is_symmetric() and d.has_serre_duality()
    assert star_certificate(V).valid
    prod = 1
    for g in genera:
        prod *= g
    assert d[len(genera), 0] == prod
