"""The two-loop guidance runtime. Import submodules directly:

- ``guidekit.engine.config``   tuning knobs
- ``guidekit.engine.core``     the engine itself
- ``guidekit.engine.replay``   virtual-clock timeline driver
"""
