"""Script-language invariants beyond the golden table: determinism,
isolation, totality under budget, and the print/parse fixpoint."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guidekit.clock import VirtualClock
from guidekit.script import (
    BudgetExceeded,
    Env,
    ScriptRuntimeError,
    ScriptSyntaxError,
    evaluate,
    format_script,
    free_identifiers,
    parse_script,
)
from guidekit.script.nodes import ast_equal
from guidekit.values import deep_copy, deep_equal


def test_syntax_error_position_and_hint():
    with pytest.raises(ScriptSyntaxError) as exc:
        parse_script("return (", [])
    err = exc.value
    assert (err.line, err.col) == (1, 9)
    assert err.token == "<end of input>"
    assert "expression" in err.expected


def test_syntax_error_multiline_position():
    with pytest.raises(ScriptSyntaxError) as exc:
        parse_script("x = 1\ny = (2 +\n", [])
    assert exc.value.line == 3


def test_runtime_error_carries_location():
    script = parse_script("x = 1\nreturn state.nope", [])
    with pytest.raises(ScriptRuntimeError) as exc:
        evaluate(script, Env({"state": {}}))
    assert exc.value.line == 2


def test_duplicate_declared_args_rejected():
    with pytest.raises(ValueError):
        parse_script("return a", ["a", "a"])


def test_missing_declared_arg_binding():
    script = parse_script("return a", ["a"])
    with pytest.raises(ScriptRuntimeError):
        evaluate(script, Env({}))


def test_determinism_same_env_same_outcome():
    src = """
    seen = []
    for k in state.table do
        seen = append(seen, k + str(state.table[k]))
    end
    state.log = seen
    return seen
    """
    script = parse_script(src, [])
    results, states = [], []
    for _ in range(2):
        bindings = {"state": {"table": {"b": 2.0, "a": 1.0, "c": 3.0}}}
        env = Env(bindings, clock=VirtualClock(7.0))
        results.append(evaluate(script, env))
        states.append(bindings["state"])
    assert deep_equal(results[0], results[1])
    assert deep_equal(states[0], states[1])


def test_isolation_only_state_and_self_mutate():
    script = parse_script(
        "state.a = 1 self.b = 2 x = suggestion x = append(args_list, 9)",
        ["args_list"],
    )
    bindings = {
        "state": {},
        "self": {},
        "suggestion": {"id": "s1"},
        "args_list": [1.0],
    }
    before = deep_copy(bindings)
    evaluate(script, Env(bindings))
    assert deep_equal(bindings["suggestion"], before["suggestion"])
    assert deep_equal(bindings["args_list"], before["args_list"])
    assert bindings["state"] == {"a": 1.0}
    assert bindings["self"] == {"b": 2.0}


def test_aliasing_cannot_leak_writes_to_other_bindings():
    # a local alias of a non-writable binding points at a private copy
    script = parse_script(
        "alias = suggestion alias.title = 'hacked' return alias.title", []
    )
    bindings = {"suggestion": {"title": "original"}}
    result = evaluate(script, Env(bindings))
    assert result == "hacked"  # the script saw its own copy change
    assert bindings["suggestion"]["title"] == "original"


def test_aliasing_of_self_still_mutates():
    script = parse_script("alias = self alias.count = 2", [])
    bindings = {"self": {"count": 1.0}}
    evaluate(script, Env(bindings))
    assert bindings["self"]["count"] == 2.0


def test_read_only_state_rejects_writes_but_allows_reads():
    script = parse_script("state.a = state.a + 1", [])
    env = Env({"state": {"a": 1.0}}, read_only=frozenset({"state"}))
    with pytest.raises(ScriptRuntimeError, match="read-only"):
        evaluate(script, env)
    reader = parse_script("return state.a", [])
    assert evaluate(reader, env) == 1.0


def test_result_is_detached_from_env():
    script = parse_script("return state.xs", [])
    bindings = {"state": {"xs": [1.0]}}
    result = evaluate(script, Env(bindings))
    result.append(2.0)
    assert bindings["state"]["xs"] == [1.0]


def test_budget_totality_exact_boundary():
    # Three statements run; a budget of two stops before the third.
    script = parse_script("a = 1 b = 2 c = 3", [])
    evaluate(script, Env({}, step_budget=3))
    with pytest.raises(BudgetExceeded):
        evaluate(script, Env({}, step_budget=2))


def test_free_identifiers_examples():
    assert free_identifiers(parse_script("return state.month", [])) == ["state"]
    assert free_identifiers(
        parse_script("self.count = args_n + 1", ["args_n"])
    ) == ["args_n", "self"]
    assert free_identifiers(parse_script("return unknown_var", [])) == ["unknown_var"]


def test_free_identifiers_locals_and_builtins_excluded():
    src = "t = 0 for x in state.xs do t = t + len(x) end return t"
    assert free_identifiers(parse_script(src, [])) == ["state"]


def test_free_identifiers_unknown_call_included():
    assert free_identifiers(parse_script("return shuffle(xs)", [])) == ["shuffle", "xs"]


def test_read_before_local_bind_is_free():
    assert free_identifiers(parse_script("x = x + 1", [])) == ["x"]


FIXPOINT_SOURCES = [
    "return 1 + 2 * 3 - 4 / 5 % 6",
    "return -(a + b) * -c",
    'return {title: "t", "odd key": [1, null, true], nested: {x: if a then 1 else 2}}',
    "if a > 1 and b < 2 or not c then x = 1 else for i in items do x = x + i end end",
    "state.y[0].z = tail(xs, 2) return state",
    'return contains("abc", "b") == has({a: 1}, "a")',
    "return if if a then b else c then d else e",
    "for k in {b: 1, a: 2} do out = append(out, k) end",
]


@pytest.mark.parametrize("src", FIXPOINT_SOURCES)
def test_print_parse_fixpoint(src):
    script = parse_script(src, [])
    printed = format_script(script)
    assert ast_equal(parse_script(printed, []), script)


# Random expression ASTs exercise printer/parser agreement far beyond the
# handwritten cases.

_names = st.sampled_from(["a", "b", "state", "xs"])
_literals = st.one_of(
    st.just("null"), st.just("true"), st.just("false"),
    st.integers(0, 999).map(str),
    st.floats(0, 1000, allow_nan=False).map(lambda f: repr(round(f, 3))),
    st.sampled_from(['"s"', '"two words"', '""']),
)


def _exprs(depth: int):
    if depth <= 0:
        return st.one_of(_literals, _names)
    sub = _exprs(depth - 1)
    return st.one_of(
        _literals,
        _names,
        st.tuples(sub, st.sampled_from("+-*/%"), sub).map(lambda t: f"{t[0]} {t[1]} {t[2]}"),
        st.tuples(sub, st.sampled_from(["==", "!=", "<", "<=", ">", ">="]), sub).map(
            lambda t: f"({t[0]}) {t[1]} ({t[2]})"
        ),
        st.tuples(sub, sub).map(lambda t: f"{t[0]} and {t[1]}"),
        st.tuples(sub, sub).map(lambda t: f"{t[0]} or {t[1]}"),
        sub.map(lambda s: f"(not {s})"),
        sub.map(lambda s: f"-({s})"),
        st.tuples(sub, sub, sub).map(lambda t: f"(if {t[0]} then {t[1]} else {t[2]})"),
        st.lists(sub, max_size=3).map(lambda xs: "[" + ", ".join(xs) + "]"),
        st.tuples(sub, sub).map(lambda t: f"min({t[0]}, {t[1]})"),
    )


@given(_exprs(3))
@settings(max_examples=300, deadline=None)
def test_print_parse_fixpoint_random_exprs(src):
    script = parse_script(f"return {src}", [])
    assert ast_equal(parse_script(format_script(script)), script)


@given(_exprs(3))
@settings(max_examples=200, deadline=None)
def test_evaluation_total_and_deterministic_random_exprs(src):
    script = parse_script(f"return {src}", [])

    def run():
        env = Env({"a": 1.0, "b": 2.0, "state": {"k": 1.0}, "xs": [1.0, 2.0]},
                  step_budget=10_000)
        try:
            return ("ok", evaluate(script, env))
        except ScriptRuntimeError as err:
            return ("err", err.message)
        except BudgetExceeded:
            return ("budget", None)

    first, second = run(), run()
    assert first[0] == second[0]
    if first[0] == "ok":
        assert deep_equal(first[1], second[1])
    else:
        assert first[1] == second[1]
