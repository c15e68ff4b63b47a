import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alq.errors import UsageError
from alq.ffgeom import (ExtensionField, count_projective_points,
                        find_irreducible, load_model)

FIELDS = [ExtensionField(p, n) for p, n in ((2, 1), (2, 3), (3, 2), (5, 2), (7, 1), (13, 1))]


@st.composite
def field_and_elements(draw, k=3):
    f = draw(st.sampled_from(FIELDS))
    els = [tuple(draw(st.integers(0, f.p - 1)) for _ in range(f.n))
           for _ in range(k)]
    return f, els


@settings(max_examples=300)
@given(field_and_elements())
def test_field_axioms(fe):
    f, (a, b, c) = fe
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == f.zero
    assert f.mul(a, f.one) == a
    if a != f.zero:
        assert f.mul(a, f.inv(a)) == f.one
        # Frobenius: a^(p^n) = a
        assert f.pow(a, f.order) == a


def test_multiplicative_group_order():
    f = ExtensionField(3, 3)
    nonzero = [e for e in f.elements() if e != f.zero]
    assert len(nonzero) == f.order - 1
    for a in nonzero[:10]:
        assert f.pow(a, f.order - 1) == f.one


def test_find_irreducible_degrees():
    for p in (2, 3, 5):
        for n in (1, 2, 3, 4):
            mod = find_irreducible(p, n)
            assert len(mod) == n + 1 and mod[-1] == 1


def test_projective_space_counts(tmp_path):
    # the plane conic x*z = y^2 is a smooth rational curve: q + 1 points
    model_file = tmp_path / "conic.model"
    model_file.write_text("vars: x y z\npoly: x*z - y^2\n")
    model = load_model(model_file)
    for p, n in ((2, 1), (3, 1), (5, 1), (3, 2), (7, 1)):
        q = p**n
        assert count_projective_points(model, ExtensionField(p, n)) == q + 1


def test_projective_line_in_plane(tmp_path):
    model_file = tmp_path / "line.model"
    model_file.write_text("vars: x y z\npoly: x + 2*y - z\n")
    model = load_model(model_file)
    for p in (2, 3, 5, 7, 11):
        assert count_projective_points(model, ExtensionField(p, 1)) == p + 1


def test_model_parser_rejects_bad_input(tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text("vars: x y\npoly: x^2 + y\n")  # not homogeneous
    with pytest.raises(UsageError):
        load_model(bad)
    bad.write_text("poly: x^2\n")  # vars must come first
    with pytest.raises(UsageError):
        load_model(bad)


def test_shipped_model_metadata():
    from alq.config import Config
    model = load_model(Config().models_dir / "x0star_378.model")
    assert model.level == 378 and model.genus == 5
    assert model.nvars == 5 and len(model.polynomials) == 3
    # a Petri model of a genus-5 curve: three quadrics in P^4
    for poly in model.polynomials:
        assert {sum(m) for _, m in poly} == {2}
