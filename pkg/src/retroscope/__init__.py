"""Retroscope: retrospective event-study engine for movement discourse.

Filters a document corpus into movement-specific layered datasets, builds
daily volume/emotion-intensity series, and runs five permutation-based
event-study analyses around curated political events. Exposed as a library,
a CLI (``retroscope``) and an HTTP JSON service.
"""

__version__ = "0.1.0"

ENGINE_VERSION = __version__
