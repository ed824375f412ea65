import pytest
from hypothesis import given, strategies as st

from freepiston.config import (REQUIRED_KEYS, ConfigError, format_config, load_config,
                               parse_config)

PAPER_TEXT = """p1_left_pa = 225000
p1_right_pa = 120000
q_in_joule = 18
x_s_m = 0.0225
bore_left_m = 0.05
friction_n = 0
polytropic_n = 1.33
x_m_m = 0.05
mass_kg = 1
"""


def test_parse_paper_physics():
    cfg = parse_config(PAPER_TEXT)
    e = cfg.engine
    assert (e.p1_left, e.p1_right, e.q_in, e.x_s, e.bore_left, e.friction, e.n_poly) == \
        (225000.0, 120000.0, 18.0, 0.0225, 0.05, 0.0, 1.33)
    assert (e.x_m, e.mass) == (0.05, 1.0)
    assert not cfg.lambda_given
    assert cfg.integrator.rel_tol == 1e-9
    assert cfg.search.max_iter == 200


def test_shipped_paper_config():
    cfg = load_config("configs/paper.cfg")
    assert cfg.engine.p1_left == 225000.0
    assert cfg.search.step_init == 0.5


def test_comments_and_exponents():
    cfg = parse_config(PAPER_TEXT + "# a comment\nrel_tol = 1E-10  # trailing\nlambda = .8\n")
    assert cfg.integrator.rel_tol == 1e-10
    assert cfg.engine.lam == 0.8 and cfg.lambda_given


def test_x_m_not_above_x_s():
    text = PAPER_TEXT.replace("x_s_m = 0.0225", "x_s_m = 0.06")
    with pytest.raises(ConfigError, match="x_m_m") as info:
        parse_config(text)
    assert "x_s_m" in str(info.value)
    assert "x_m > x_s" in str(info.value)


def test_empty_file_lists_required_keys():
    with pytest.raises(ConfigError) as info:
        parse_config("")
    for key in REQUIRED_KEYS:
        assert key in str(info.value)


@pytest.mark.parametrize("line, fragment", [
    ("bogus = 1", "unknown key 'bogus'"),
    ("rel_tol = 1e-9e", "rel_tol: malformed number"),
    ("rel_tol = nan", "rel_tol: malformed number"),
    ("max_iter = 2.5", "max_iter: malformed integer"),
    ("just words", "expected 'key = value'"),
    ("p1_left_pa = 1", "duplicate key 'p1_left_pa'"),
])
def test_errors_carry_line_number(line, fragment):
    with pytest.raises(ConfigError, match=fragment) as info:
        parse_config(PAPER_TEXT + line + "\n")
    assert info.value.line == 10


def test_invariant_errors_name_key():
    with pytest.raises(ConfigError, match="guard_eps_m"):
        parse_config(PAPER_TEXT + "guard_eps_m = 0.02\n")
    with pytest.raises(ConfigError, match="lambda_min"):
        parse_config(PAPER_TEXT + "lambda_min = 2\n")


def test_round_trip_paper():
    cfg = load_config("configs/paper.cfg")
    text = format_config(cfg)
    assert parse_config(text) == cfg
    assert format_config(parse_config(text)) == text


@given(st.floats(0.01, 0.5), st.floats(0.1, 0.9), st.floats(1e4, 1e6), st.integers(0, 500),
       st.one_of(st.none(), st.floats(0.1, 5.0)), st.floats(1e-12, 1e-3))
def test_round_trip_property(x_m, frac, p1, max_iter, lam, rtol):
    text = PAPER_TEXT.replace("x_m_m = 0.05", f"x_m_m = {x_m!r}") \
        .replace("x_s_m = 0.0225", f"x_s_m = {frac * x_m!r}") \
        .replace("p1_left_pa = 225000", f"p1_left_pa = {p1!r}")
    text += f"max_iter = {max_iter}\nrel_tol = {rtol!r}\nguard_eps_m = {1e-3 * x_m * (1 - frac)!r}\n"
    if lam is not None:
        text += f"lambda = {lam!r}\n"
    cfg = parse_config(text)
    out = format_config(cfg)
    assert parse_config(out) == cfg
    assert format_config(parse_config(out)) == out
