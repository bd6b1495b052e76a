import pytest

from coxtile.coxeter import (
    CoxeterSystem,
    DisplacementVerdict,
    displacement_exponent,
    enumerate_ball,
    load_system,
    naive_ball,
    oracle_canonical,
    radial_segment,
    reflection_cocycle,
)
from coxtile.errors import OutOfBallError, SizeLimitError, ValidationError
from coxtile.lattice import ZLattice


def test_load_system_dihedral():
    sys3 = load_system({"generators": ["s", "t"], "matrix": [[1, 3], [3, 1]]})
    ball = enumerate_ball(sys3, 6)
    assert len(ball) == 6  # dihedral group of order 6


def test_load_system_pentagon():
    pent = CoxeterSystem.right_angled_polygon(5)
    assert pent.is_right_angled
    assert pent.m(0, 1) == 2 and pent.m(0, 2) == 0 and pent.m(4, 0) == 2


def test_load_system_validation_errors():
    with pytest.raises(ValidationError, match=r"m\[0\]\[1\]"):
        load_system({"generators": ["s", "t"], "matrix": [[1, 3], [2, 1]]})
    with pytest.raises(ValidationError, match="diagonal"):
        load_system({"generators": ["s", "t"], "matrix": [[2, 3], [3, 1]]})
    with pytest.raises(ValidationError, match=r"m\[0\]\[1\]"):
        load_system({"generators": ["s", "t"], "matrix": [[1, 1], [1, 1]]})


def test_normal_form_dihedral_braid():
    sys3 = CoxeterSystem.dihedral(3)
    assert sys3.normal_form((0, 1, 0)) == (0, 1, 0)
    assert sys3.normal_form((1, 0, 1)) == (0, 1, 0)
    assert sys3.normal_form((0, 0)) == ()


def test_normal_form_right_angled_commutation():
    ra = CoxeterSystem(("s", "t"), ((1, 2), (2, 1)))
    assert ra.normal_form((1, 0)) == (0, 1)
    assert ra.normal_form((0, 0)) == ()


def test_normal_form_idempotent_and_matches_oracle():
    pent = CoxeterSystem.right_angled_polygon(5)
    words = [
        (0, 1, 2, 3, 4),
        (0, 2, 0, 2),
        (1, 0, 1, 3, 1, 1),
        (4, 0, 4, 2, 2, 0),
        (3, 2, 1, 0, 1, 2, 3),
    ]
    for w in words:
        nf = pent.normal_form(w)
        assert pent.normal_form(nf) == nf
        assert nf == oracle_canonical(pent, w)
    sys5 = CoxeterSystem.dihedral(5)
    for w in [(0, 1, 0, 1, 0, 1), (1, 0, 1, 0, 1), (0, 1, 1, 0)]:
        assert sys5.normal_form(w) == oracle_canonical(sys5, w)


def test_ball_infinite_dihedral_growth():
    ball = enumerate_ball(CoxeterSystem.infinite_dihedral(), 10)
    assert [len([i for i, n in enumerate(ball.norms) if n <= r]) for r in range(11)] == [
        2 * r + 1 for r in range(11)
    ]
    assert ball.sphere_sizes == [1] + [2] * 10


def test_ball_dihedral_stabilizes():
    ball = enumerate_ball(CoxeterSystem.dihedral(3), 5)
    assert len(ball) == 6
    assert ball.sphere_sizes == [1, 2, 2, 1, 0, 0]


def test_ball_pentagon_sphere_sizes():
    ball = enumerate_ball(CoxeterSystem.right_angled_polygon(5), 2)
    assert ball.sphere_sizes == [1, 5, 15]


def test_ball_matches_naive_oracle_small():
    for system, radius in [
        (CoxeterSystem.dihedral(3), 4),
        (CoxeterSystem.dihedral(4), 5),
        (CoxeterSystem.dihedral(5), 6),
        (CoxeterSystem.infinite_dihedral(), 8),
        (CoxeterSystem.right_angled_polygon(5), 4),
    ]:
        ball = enumerate_ball(system, radius)
        sizes, words = naive_ball(system, radius)
        assert ball.sphere_sizes == sizes
        assert set(ball.words) == words


def test_ball_prefix_closed_and_unit_steps():
    ball = enumerate_ball(CoxeterSystem.right_angled_polygon(5), 4)
    for w in ball.words:
        for i in range(len(w)):
            assert w[:i] in ball.index
    for (eid, s), jid in ball.edges.items():
        assert abs(ball.norms[eid] - ball.norms[jid]) == 1


def test_ball_cap():
    with pytest.raises(SizeLimitError) as err:
        enumerate_ball(CoxeterSystem.right_angled_polygon(5), 6, cap=50)
    assert err.value.partial_count == 50


def test_radial_segment():
    ball = enumerate_ball(CoxeterSystem.right_angled_polygon(5), 4)
    assert radial_segment(ball, ()) == [()]
    g = (0, 2, 1, 3)
    seg = radial_segment(ball, g)
    nf = ball.system.normal_form(g)
    assert len(seg) == len(nf) + 1
    norms = [ball.system.norm(x) for x in seg]
    assert norms == list(range(len(nf) + 1))
    with pytest.raises(OutOfBallError):
        radial_segment(ball, (0, 2, 0, 2, 0, 2, 0, 2, 0, 2))


def test_reflection_cocycle_basics():
    inf = CoxeterSystem.infinite_dihedral()
    entries, reduced = reflection_cocycle(inf, (0,))
    assert entries == [(0,)] and reduced
    entries, reduced = reflection_cocycle(inf, (0, 1))
    assert entries == [(0,), (0, 1, 0)] and reduced
    entries, reduced = reflection_cocycle(inf, (0, 0, 1))
    assert entries == [(1,)] and not reduced


def test_reflection_cocycle_distinct_on_reduced_words():
    pent = CoxeterSystem.right_angled_polygon(5)
    ball = enumerate_ball(pent, 6)
    for w in ball.words:
        entries, reduced = reflection_cocycle(pent, w)
        assert reduced
        assert len(set(entries)) == len(entries) == len(w)


def test_reflection_cocycle_reversal():
    pent = CoxeterSystem.right_angled_polygon(5)
    w = (0, 2, 4, 1, 3)
    entries, _ = reflection_cocycle(pent, w)
    rev_entries, _ = reflection_cocycle(pent, tuple(reversed(w)))
    # reversing conjugates the reversed cocycle by the whole word
    winv = pent.inv(w)
    expect = [pent.mul(pent.mul(winv, r), w) for r in reversed(entries)]
    assert rev_entries == expect


def test_displacement_z2_counterexample():
    lat = ZLattice(2)
    for r in (3, 5, 8):
        # (r, r) has L1 norm 2r, so the enumeration must go out that far
        ball = lat.ball(2 * r)
        verdict = displacement_exponent(ball, (1, -1), n_max=r)
        assert verdict.exponent is None
        assert (r, r) in verdict.witnesses
        # the diagonal family: |(n,n) - k(1,-1)| stays 2n for every k <= n
        for k in range(r + 1):
            assert lat.norm((r + k, r - k)) == 2 * r


def test_displacement_infinite_dihedral():
    ball = enumerate_ball(CoxeterSystem.infinite_dihedral(), 6)
    verdict = displacement_exponent(ball, (0, 1), n_max=4)
    assert verdict.exponent is not None and verdict.exponent <= 2
    assert verdict.order_of_a is None


def test_displacement_odd_norm_identity_element():
    ball = enumerate_ball(CoxeterSystem.right_angled_polygon(5), 2)
    verdict = displacement_exponent(ball, (0,), members=[()], n_max=3)
    assert verdict.exponent == 1
    assert verdict.order_of_a == 2


def test_displacement_rejects_identity():
    ball = enumerate_ball(CoxeterSystem.infinite_dihedral(), 3)
    with pytest.raises(ValidationError):
        displacement_exponent(ball, (), n_max=2)


def test_norm_subadditive_and_unit_steps():
    pent = CoxeterSystem.right_angled_polygon(5)
    ball = enumerate_ball(pent, 3)
    words = ball.words
    for u in words[:20]:
        for v in words[:20]:
            assert pent.norm(pent.mul(u, v)) <= pent.norm(u) + pent.norm(v)
        for s in range(5):
            assert abs(pent.norm(pent.mul(u, (s,))) - pent.norm(u)) == 1


def test_mul_agrees_with_oracle_on_samples():
    pent = CoxeterSystem.right_angled_polygon(5)
    ball = enumerate_ball(pent, 3)
    sample = ball.words[::7]
    for u in sample:
        for v in sample:
            assert pent.mul(u, v) == oracle_canonical(pent, u + v)



def test_full_multiplication_table_dihedral():
    # independent model: s, t are reflections, st is the rotation r; every
    # element is r^a or r^a s and products follow dihedral arithmetic
    for m in (3, 4, 5):
        system = CoxeterSystem.dihedral(m)
        ball = enumerate_ball(system, 2 * m)

        def to_model(word):
            # explicit D_m arithmetic: x = r^rot f^flip, composing letters on
            # the right; s = f and t = r f, so x*s adds a flip while x*t
            # turns by +-1 depending on the current flip
            rot, flip = 0, 0
            for letter in word:
                if letter == 0:
                    flip = 1 - flip
                else:
                    rot = (rot - 1) % m if flip else (rot + 1) % m
                    flip = 1 - flip
            return rot, flip

        model = {}
        for w in ball.words:
            key = to_model(w)
            assert key not in model, f"model collision for {w}"
            model[key] = w
        assert len(model) == 2 * m
        for u in ball.words:
            for v in ball.words:
                assert ball.mul(u, v) == model[to_model(u + v)]


def test_hyperboloid_drift_after_twelve_multiplications():
    # reduced 12-letter word in the hexagon group, evaluated like place_tiles
    from coxtile.hyperbolic import build_polygon, lorentz_dot, lorentz_renormalize, reflection_matrices
    import numpy as np

    poly = build_polygon(3)
    mats = reflection_matrices(poly)
    word = (0, 2, 4, 0, 2, 4, 0, 2, 4, 0, 2, 4)
    M = np.eye(3)
    for i, s in enumerate(word, start=1):
        M = M @ mats[s]
        if i % 6 == 0:
            M = lorentz_renormalize(M)
    # the word walks ~16 hyperbolic units out, so coordinates reach ~1e8 and
    # the quadratic form cancels catastrophically in absolute terms; the
    # meaningful statement is the scale-relative residual
    for v in (M @ poly.vertices.T).T:
        assert abs(lorentz_dot(v, v) + 1) < 1e-8 * max(1.0, v[2] ** 2)
        assert v[2] > 0
    J = np.diag([1.0, 1.0, -1.0])
    scale = float(np.max(np.abs(M))) ** 2
    assert np.max(np.abs(M.T @ J @ M - J)) < 1e-8 * scale


def test_ball_cap_env_override(monkeypatch):
    monkeypatch.setenv("COXTILE_BALL_CAP", "30")
    with pytest.raises(SizeLimitError):
        enumerate_ball(CoxeterSystem.right_angled_polygon(5), 4)
    monkeypatch.delenv("COXTILE_BALL_CAP")
    assert len(enumerate_ball(CoxeterSystem.right_angled_polygon(5), 4)) == 166
