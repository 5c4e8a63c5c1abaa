"""Smoke tests for the python module: each exposed operation runs end to end."""

import pytest

import minicore


JGO = """
let top_1g =
  let t_2 = foo_10g bar_11g in
  letrec j_3!j3 = \\n_4 x_5 y_6 ->
    case n_4 as c_7 of {
      0 -> t_2 x_5 ;
      DEFAULT -> j_3!j3 n_4 x_5 y_6
    }
  in j_3!j3 bar_11g bar_11g bar_11g ;
"""

SHADOW_BUG = (
    "let top_1g = let t_2 = 0 in "
    "letrec j_3!j2 = \\xB_4:TBool xI_4:TInt -> "
    "case xI_4:TInt as s_5 of { 0 -> t_2 xI_4:TInt ; DEFAULT -> j_3!j2 1 xI_4:TInt } "
    "in j_3!j2 1 2 ;"
)


def test_parse_and_format_round_trip():
    p = minicore.parse_program(JGO)
    text = minicore.format_program(p)
    assert minicore.parse_program(text) == p
    assert str(p) == text
    assert len(p) == 1


def test_parse_error_is_a_value_error():
    with pytest.raises(ValueError):
        minicore.parse_program("let f_1g = ( ;")


def test_lint_clean_and_dirty():
    assert minicore.well_scoped(minicore.parse_program(JGO))
    assert minicore.join_points_valid(minicore.parse_program(JGO))
    assert minicore.lint(minicore.parse_program(JGO), join_points=True) == []

    bad = minicore.parse_program("let f_1g = y_7 ;")
    violations = minicore.lint(bad)
    assert violations
    assert violations[0][1] == "WellScopedVar/None"


def test_exitify_fixed_floats_the_exit_path():
    p = minicore.parse_program(JGO)
    out = minicore.exitify(p)
    assert "exit_101!j1" in str(out)
    assert minicore.well_scoped(out)
    assert minicore.join_points_valid(out)


def test_exitify_legacy_reproduces_the_bug():
    p = minicore.parse_program(SHADOW_BUG)
    fixed = minicore.exitify(p)
    legacy = minicore.exitify(p, legacy_bug=True)
    assert minicore.well_scoped(fixed)
    assert not minicore.well_scoped(legacy)
    rules = {rule for _, rule, _ in minicore.lint(legacy)}
    assert "WellScopedVar/AlmostEqual" in rules


def test_exitify_rejects_malformed_join_groups():
    p = minicore.parse_program("let f_1g = letrec j_2!j2 = \\v_3 -> v_3 in 1 ;")
    with pytest.raises(RuntimeError):
        minicore.exitify(p)


def test_free_vars_and_sizes():
    p = minicore.parse_program("let f_1g = x_2 (\\y_3 -> y_3 z_4) ;")
    assert minicore.free_vars(p) == [["x_2", "z_4"]]
    ((binder, size),) = minicore.sizes(p)
    assert binder == "f_1g"
    assert size == 4


def test_gen_is_deterministic_and_invariant_clean():
    a = minicore.gen_program(seed=9, size=40, shadow=0.5, join_density=0.8)
    b = minicore.gen_program(seed=9, size=40, shadow=0.5, join_density=0.8)
    assert a == b
    assert minicore.well_scoped(a)
    assert minicore.join_points_valid(a)


def test_subst_program():
    p = minicore.parse_program("let f_1g = x_1 z_3 ;")
    out, warnings = minicore.subst_program(p, "inscope { y_2, z_3 } map { x_1 => y_2 ; }")
    assert warnings == []
    assert str(out) == "let f_1g = y_2 z_3 ;\n"

    _, warnings = minicore.subst_program(
        minicore.parse_program("let f_1g = w_9 ;"),
        "inscope { y_2 } map { x_1 => y_2 ; }",
    )
    assert warnings == ["w_9"]
