"""Shared test configuration: deterministic hypothesis profile."""

from hypothesis import settings

# Property tests run derandomized (fixed seeds) with 10^3 examples by
# default; tests whose single example is expensive override max_examples.
settings.register_profile("hyperlab", derandomize=True, deadline=None,
                          max_examples=1000)
settings.load_profile("hyperlab")
