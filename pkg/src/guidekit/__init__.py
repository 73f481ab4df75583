"""guidekit: turn declarative guidance strategy bundles into a live suggestion engine.

The pieces, bottom up: a sandboxed callback language (``guidekit.script``),
YAML bundle loading and validation (``guidekit.specs``), a revisioned
analysis-state store (``guidekit.state``), the two-loop suggestion engine
(``guidekit.engine``), and a FastAPI service plus CLI on top.
"""

__version__ = "0.1.0"
