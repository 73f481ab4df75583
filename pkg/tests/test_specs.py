"""Bundle loading and validation against real and synthetic spec directories."""

import pytest

from guidekit.script import ScriptSyntaxError
from guidekit.specs import FormatError, load_bundle, validate_bundle

from conftest import minimal_action, minimal_strategy, write_bundle


def test_load_demo_bundle_no_meta(bundles_dir):
    bundle = load_bundle(bundles_dir / "behavior_patterns")
    assert [s.effective_id for s in bundle.strategies] == ["line_chart", "zoom_in"]
    assert set(bundle.actions) == {"suggest_line_chart", "suggest_zoom"}
    assert bundle.meta is None  # default pass-through orchestration
    assert validate_bundle(bundle).ok


def test_extra_fields_survive_load(bundles_dir):
    bundle = load_bundle(bundles_dir / "relevance_gate")
    strategy = bundle.strategies[0]
    assert strategy.extra_fields["relevance_threshold"] == 0.3
    action = bundle.actions["remove_duplicates"]
    assert action.extra_fields["reject_penalty"] == 0.3


def test_load_is_pure(bundles_dir):
    a = load_bundle(bundles_dir / "city_similarity")
    b = load_bundle(bundles_dir / "city_similarity")
    assert a.state == b.state
    assert a.strategies == b.strategies
    assert a.all_actions == b.all_actions
    assert a.meta == b.meta
    assert a.config == b.config


def test_missing_required_action_key(tmp_path):
    root = write_bundle(
        tmp_path,
        strategies={"s": minimal_strategy("s", "a")},
        actions={"a": "action_id: a\nis_applicable:\n  type: function\n  load: |\n    return true\n"},
    )
    with pytest.raises(FormatError, match="generate_suggestion_content"):
        load_bundle(root)
    with pytest.raises(FormatError, match="actions/a.yaml"):
        load_bundle(root)


def test_missing_state_file(tmp_path):
    (tmp_path / "strategies").mkdir()
    (tmp_path / "actions").mkdir()
    with pytest.raises(IOError, match="state.yaml"):
        load_bundle(tmp_path)


def test_embedded_syntax_error_names_file_and_callback(tmp_path):
    bad = minimal_action("a").replace("return true", "return (")
    root = write_bundle(tmp_path, strategies={"s": minimal_strategy("s", "a")},
                        actions={"a": bad})
    with pytest.raises(ScriptSyntaxError) as exc:
        load_bundle(root)
    assert "actions/a.yaml" in str(exc.value)
    assert "is_applicable" in str(exc.value)


def test_yaml_12_booleans_and_dates_stay_strings(tmp_path):
    root = write_bundle(
        tmp_path,
        state="flag: no\nwhen: 2022-03-01\nreally: true\n",
        strategies={}, actions={},
    )
    bundle = load_bundle(root)
    assert bundle.state.fields["flag"] == "no"
    assert bundle.state.fields["when"] == "2022-03-01"
    assert bundle.state.fields["really"] is True


def test_data_source_shape_recognized(tmp_path):
    root = write_bundle(
        tmp_path,
        state="data:\n  source: rows.csv\n  load: csv\nplain:\n  source_note: hi\n",
        strategies={}, actions={},
    )
    bundle = load_bundle(root)
    assert len(bundle.state.data_sources) == 1
    src = bundle.state.data_sources[0]
    assert (src.target_field, src.source, src.load) == ("data", "rows.csv", "csv")
    assert bundle.state.fields["plain"] == {"source_note": "hi"}


def test_bad_data_source_kind(tmp_path):
    root = write_bundle(tmp_path, state="data:\n  source: x\n  load: parquet\n",
                        strategies={}, actions={})
    with pytest.raises(FormatError, match="csv or url"):
        load_bundle(root)


def test_engine_overrides(tmp_path):
    root = write_bundle(tmp_path, strategies={}, actions={},
                        engine="guidance_interval: 0.5\ndedup: off\nstep_budget: 5000\n")
    bundle = load_bundle(root)
    assert bundle.config.guidance_interval_s == 0.5
    assert bundle.config.dedup == "off"
    assert bundle.config.step_budget == 5000


def test_engine_unknown_key(tmp_path):
    root = write_bundle(tmp_path, strategies={}, actions={}, engine="tick: 1\n")
    with pytest.raises(FormatError, match="unknown engine option"):
        load_bundle(root)


def test_engine_invalid_interval_ordering(tmp_path):
    root = write_bundle(tmp_path, strategies={}, actions={},
                        engine="guidance_interval: 60\ninference_interval: 30\n")
    with pytest.raises(FormatError, match="must not exceed"):
        load_bundle(root)


def test_meta_requires_candidates_arg(tmp_path):
    meta = "filter_suggestions:\n  type: function\n  args: [items]\n  load: |\n    return items\n"
    root = write_bundle(tmp_path, strategies={}, actions={}, meta=meta)
    with pytest.raises(FormatError, match="candidates"):
        load_bundle(root)


# ---- validation findings ----------------------------------------------------


def test_duplicate_action_id(tmp_path):
    root = write_bundle(
        tmp_path,
        strategies={"s": minimal_strategy("s", "a1")},
        actions={"a1": minimal_action("next_month"), "a2": minimal_action("next_month")},
    )
    report = validate_bundle(load_bundle(root))
    assert not report.ok
    assert any("duplicate action_id 'next_month'" in f.message for f in report.errors)


def test_invalid_degree_lists_allowed_values(tmp_path):
    root = write_bundle(
        tmp_path,
        strategies={"s": minimal_strategy("s", "a", degree="commanding")},
        actions={"a": minimal_action("a")},
    )
    report = validate_bundle(load_bundle(root))
    finding = next(f for f in report.errors if "degree" in f.message)
    for allowed in ("orienting", "directing", "prescribing"):
        assert allowed in finding.message


def test_unknown_root_identifier_flagged(tmp_path):
    action = minimal_action("a").replace("return true", "return sate.month")
    root = write_bundle(tmp_path, strategies={"s": minimal_strategy("s", "a")},
                        actions={"a": action})
    report = validate_bundle(load_bundle(root))
    assert any("unknown root identifier 'sate'" in f.message for f in report.errors)


def test_dangling_action_ref(tmp_path):
    root = write_bundle(tmp_path, strategies={"s": minimal_strategy("s", "missing")},
                        actions={"a": minimal_action("a")})
    report = validate_bundle(load_bundle(root))
    assert any("dangling action reference" in f.message for f in report.errors)


def test_strategy_with_action_list_rejected(tmp_path):
    strategy = minimal_strategy("s", "a").replace(
        "action: actions/a.yaml", "action: [actions/a.yaml, actions/b.yaml]"
    )
    root = write_bundle(tmp_path, strategies={"s": strategy},
                        actions={"a": minimal_action("a")})
    report = validate_bundle(load_bundle(root))
    assert any("exactly one action" in f.message for f in report.errors)


def test_unused_action_warning(tmp_path):
    root = write_bundle(tmp_path, strategies={"s": minimal_strategy("s", "a")},
                        actions={"a": minimal_action("a"), "b": minimal_action("b")})
    report = validate_bundle(load_bundle(root))
    assert report.ok
    assert any("not referenced" in f.message for f in report.warnings)


def test_content_provably_not_map_warning(tmp_path):
    action = minimal_action("a").replace(
        'return {content: {n: state.x}, title: "T", description: "D"}',
        "return 42",
    )
    root = write_bundle(tmp_path, strategies={"s": minimal_strategy("s", "a")},
                        actions={"a": action})
    report = validate_bundle(load_bundle(root))
    assert report.ok  # a warning, not an error
    assert any("does not return a map" in f.message for f in report.warnings)


def test_duplicate_strategy_id(tmp_path):
    root = write_bundle(
        tmp_path,
        strategies={"s1": minimal_strategy("same", "a"),
                    "s2": minimal_strategy("same", "a")},
        actions={"a": minimal_action("a")},
    )
    report = validate_bundle(load_bundle(root))
    assert any("duplicate strategy id" in f.message for f in report.errors)


def test_all_bundled_packs_validate(bundles_dir):
    for pack in sorted(p for p in bundles_dir.iterdir() if p.is_dir()):
        report = validate_bundle(load_bundle(pack))
        assert report.ok, f"{pack.name}: {report.render()}"
        assert not report.warnings, f"{pack.name}: {report.render()}"
