import sys
from pathlib import Path

import pytest

# Test modules import shared tables (dsl_golden) from this directory.
sys.path.insert(0, str(Path(__file__).parent))

REPO = Path(__file__).parent.parent
BUNDLES = REPO / "bundles"
FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def bundles_dir() -> Path:
    return BUNDLES


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def write_bundle(root: Path, state: str = "x: 1.0\n", strategies: dict | None = None,
                 actions: dict | None = None, meta: str | None = None,
                 engine: str | None = None) -> Path:
    """Lay out a bundle directory from YAML snippets."""
    (root / "strategies").mkdir(parents=True, exist_ok=True)
    (root / "actions").mkdir(parents=True, exist_ok=True)
    (root / "state.yaml").write_text(state)
    for name, text in (strategies or {}).items():
        (root / "strategies" / f"{name}.yaml").write_text(text)
    for name, text in (actions or {}).items():
        (root / "actions" / f"{name}.yaml").write_text(text)
    if meta is not None:
        (root / "meta.yaml").write_text(meta)
    if engine is not None:
        (root / "engine.yaml").write_text(engine)
    return root


MINIMAL_ACTION = """\
action_id: {action_id}
is_applicable:
  type: function
  load: |
    return {applicable}
generate_suggestion_content:
  type: function
  load: |
    return {{content: {{n: state.x}}, title: "T", description: "D"}}
"""

MINIMAL_STRATEGY = """\
strategy: {name}
degree: {degree}
description: a test strategy
action: actions/{action}.yaml
determine_applicability:
  type: function
  load: |
    return {active}
"""


def minimal_action(action_id: str, applicable: str = "true") -> str:
    return MINIMAL_ACTION.format(action_id=action_id, applicable=applicable)


def minimal_strategy(name: str, action: str, degree: str = "directing",
                     active: str = "true") -> str:
    return MINIMAL_STRATEGY.format(name=name, degree=degree, action=action, active=active)
