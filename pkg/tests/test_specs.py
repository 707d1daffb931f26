import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailscore.distributions import (
    GEV,
    GPD,
    Empirical,
    Exponential,
    Mixture,
    Normal,
    Pareto,
    PointMass,
    Uniform,
)
from tailscore.errors import InvalidParameterError, SpecParseError
from tailscore.scoring import CRPS, WCRPS, Pinball, SquaredError
from tailscore.specs import (
    format_distribution,
    format_function,
    format_rule,
    parse_distribution,
    parse_function,
    parse_rule,
    read_sample,
)


@pytest.mark.parametrize("text,expected", [
    ("pareto(alpha=2,scale=1)", Pareto(2, 1)),
    ("pareto(2)", Pareto(2, 1)),
    ("  gpd( gamma = 0.25 , sigma=2 ) ", GPD(0.25, 2.0)),
    ("gev(gamma=-0.1,mu=1,sigma=3)", GEV(-0.1, 1.0, 3.0)),
    ("exp(rate=2)", Exponential(2)),
    ("unif(a=0,b=1e1)", Uniform(0, 10)),
    ("norm(mu=-1.5)", Normal(-1.5, 1)),
    ("point(c=3)", PointMass(3.0)),
    ("mix(0.3:exp(rate=1), 0.7:norm(mu=0,sigma=1))",
     Mixture(((0.3, Exponential(1)), (0.7, Normal(0, 1))))),
    ("mix(1:point(c=0),1:point(c=1))", Mixture(((0.5, PointMass(0.0)), (0.5, PointMass(1.0))))),
])
def test_parse_distribution(text, expected):
    assert parse_distribution(text) == expected


@pytest.mark.parametrize("text,pos,fragment", [
    ("pareto(alpha=2,scale=1", 22, "expected ','"),
    ("paretto(alpha=2)", 0, "unknown distribution 'paretto'"),
    ("pareto(alpha=x)", 13, "expected a number, found 'x'"),
    ("pareto(beta=2)", 7, "unknown parameter 'beta'"),
    ("pareto(alpha=-2)", 0, "invalid pareto"),
    ("exp(rate=1) junk", 12, "unexpected trailing input 'junk'"),
    ("pareto(scale=2)", 0, "missing parameter(s) 'alpha'"),
    ("mix(0.5:exp(rate=1), -1:exp(rate=2))", 21, "mixture weight"),
    ("exp(rate=1,rate=2)", None, "given twice"),
    ("exp", 3, "expected '('"),
    ("", 0, "expected a name, found end of input"),
])
def test_parse_errors_name_token_and_position(text, pos, fragment):
    with pytest.raises(SpecParseError) as info:
        parse_distribution(text)
    assert fragment in str(info.value)
    if pos is not None:
        assert info.value.position == pos
        assert f"position {pos}" in str(info.value)


def test_rules_and_functions():
    assert parse_rule("crps") == CRPS()
    assert parse_rule("wcrps(q=1.5)") == WCRPS(1.5)
    assert parse_function("se(k=2)") == SquaredError(2)
    assert parse_function("pinball(alpha=0.9)") == Pinball(0.9)
    for bad in ("se(k=1.5)", "se(k=7)", "mae", "pinball(alpha=1)"):
        with pytest.raises(SpecParseError):
            parse_function(bad)
    with pytest.raises(SpecParseError):
        parse_rule("wcrps(q=inf)")
    assert format_rule(WCRPS(0.25)) == "wcrps(q=0.25)" and format_rule(CRPS()) == "crps"
    assert format_function(SquaredError(3)) == "se(k=3)"
    assert format_function(Pinball(0.1)) == "pinball(alpha=0.1)"


def test_empirical_files(tmp_path):
    good = tmp_path / "sample.txt"
    good.write_text("1.5\n\n-2\n3e-1\n")
    E = parse_distribution(f"emp(file={good})")
    assert E == Empirical((1.5, -2.0, 0.3), source=str(good))
    assert parse_distribution(format_distribution(E)) == E
    assert parse_distribution("emp(file=sample.txt)", base_dir=tmp_path).sample == E.sample

    bad = tmp_path / "bad.txt"
    bad.write_text("1\n2\nthree\n")
    with pytest.raises(SpecParseError, match="line 3"):
        parse_distribution(f"emp(file={bad})")
    with pytest.raises(SpecParseError, match="cannot read"):
        parse_distribution(f"emp(file={tmp_path / 'missing.txt'})")
    empty = tmp_path / "empty.txt"
    empty.write_text("\n")
    with pytest.raises(SpecParseError, match="no values"):
        parse_distribution(f"emp(file={empty})")
    nan = tmp_path / "nan.txt"
    nan.write_text("nan\n")
    with pytest.raises(InvalidParameterError, match="line 1 is not finite"):
        read_sample(nan)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
positive = st.floats(1e-3, 1e3, allow_nan=False, allow_infinity=False)
leaf = st.one_of(
    st.builds(Pareto, positive, positive),
    st.builds(GPD, st.floats(-2, 2), positive, finite),
    st.builds(GEV, st.floats(-2, 2), finite, positive),
    st.builds(Exponential, positive),
    st.builds(lambda a, w: Uniform(a, a + w), finite, positive),
    st.builds(Normal, finite, positive),
    st.builds(PointMass, finite),
)
spec = st.recursive(
    leaf,
    lambda inner: st.builds(
        lambda parts: Mixture(tuple(parts)),
        st.lists(st.tuples(st.floats(0.01, 1.0), inner), min_size=1, max_size=3).map(
            lambda parts: [(w / sum(p[0] for p in parts), d) for w, d in parts])),
    max_leaves=6,
)


@settings(max_examples=200, deadline=None)
@given(spec)
def test_round_trip(F):
    text = format_distribution(F)
    G = parse_distribution(text)
    assert G == F
    assert format_distribution(G) == text


def test_formatting_is_shortest_repr():
    assert format_distribution(Pareto(2, 1)) == "pareto(alpha=2,scale=1)"
    assert format_distribution(Normal(0.1, 1)) == "norm(mu=0.1,sigma=1)"
    assert format_distribution(Exponential(1 / 3)) == "exp(rate=0.3333333333333333)"
    assert not math.isnan(parse_distribution(format_distribution(Exponential(1 / 3))).rate)
