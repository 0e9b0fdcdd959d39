import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperflux import fourier_compact, gaussian, pair
from hyperflux.expr import ExprError, build_hyperfunction, compile_scalar, normalize, references


def test_caret_is_power_with_power_precedence():
    f = compile_scalar("exp(-w^2)", ("w",))
    assert f(np.array([1.0]))[0] == pytest.approx(np.exp(-1.0))
    assert normalize("-w^2") == "-w ** 2"


@given(st.sampled_from(["dirac(0)", "2*dirac(1, 1j) - shift(embed(t^2, 0, 1), 0.5)", "heaviside(0, 'left')",
                        "Pd(dirac(0), 0, 1)", "mul(embed(cos(t), -1, 1), 1, 0, 1)", "dconv(dirac(0), dirac(1))",
                        "dirac(0, [[1, 2], [3, 4]])"]))
def test_normalize_is_idempotent(src):
    n = normalize(src)
    assert normalize(n) == n


def test_builtins_build_expected_objects():
    h = build_hyperfunction("2*dirac(0.5) + embed(1, 0, 1)")
    expect = 2 * np.exp(-0.25) + 0.746824132812427
    assert abs(pair(h, gaussian()) - expect) < 1e-10
    m = build_hyperfunction("dirac(0, [[1, 2], [3, 4]])")
    assert m.space.shape == (2, 2)
    z = np.array([1.0 + 0.5j])
    d = build_hyperfunction("Pd(dirac(0), 0, 1)")
    assert np.allclose(fourier_compact(d)(z), z)


def test_named_references():
    a = build_hyperfunction("dirac(1)", name="a")
    b = build_hyperfunction("shift(a, 1) - a", {"a": a})
    assert abs(pair(b, gaussian()) - (np.exp(-4) - np.exp(-1))) < 1e-10
    assert references("shift(a, 1) + embed(t, 0, 1)") == {"a"}


@pytest.mark.parametrize("src, fragment", [
    ("dirac(", "syntax error"),
    ("frob(1)", "unknown builtin"),
    ("dirac(0) + 1", "cannot add a number"),
    ("embed(1/t, 0, 1)", "singular"),
    ("embed(t, 1, 0)", "a <= b"),
    ("dirac(1j)", "real number"),
    ("dirac(0, 1, 2)", "takes 1-2 arguments"),
    ("embed(os(t), 0, 1)", "unknown function"),
    ("x", "undefined object"),
    ("heaviside(0, 'up')", "'right' or 'left'"),
])
def test_diagnostics(src, fragment):
    with pytest.raises(ExprError, match=fragment):
        build_hyperfunction(src)


def test_diagnostics_carry_columns():
    with pytest.raises(ExprError) as info:
        build_hyperfunction("dirac(0) + frob(2)")
    assert info.value.col == 11
