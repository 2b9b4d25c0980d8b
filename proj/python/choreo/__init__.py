"""Divisor choreography engine.

Tracks the intersection divisor of a real plane projective curve with a
closed family of cutting curves (pencils of lines, products of lines,
sampled line loops, perturbation loops of cubics), and reports the real
tracing class, the monodromy permutation, and the verdicts of the
structural checks. The heavy lifting lives in the compiled ``_core``
module; this wrapper converts between dicts and the JSON strings the core
speaks.
"""
import json as _json

from ._core import __version__, preset_names, verify_all

__all__ = [
    "__version__",
    "preset_config",
    "preset_names",
    "run_scenario",
    "trace_topology",
    "verify_all",
]


def _as_json(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def run_scenario(config):
    """Run one scenario config (dict or JSON string).

    Returns ``(report, exit_code)`` where ``report`` is a dict and
    ``exit_code`` follows the CLI contract: 0 ok, 2 discriminant hit,
    3 tracking failure, 4 invalid config.
    """
    from ._core import run_scenario as _run

    report, code = _run(_as_json(config))
    return _json.loads(report), code


def preset_config(name, seed=0):
    """Canonical config for a named preset, as a dict."""
    from ._core import preset_config as _preset

    return _json.loads(_preset(name, seed))


def trace_topology(curve):
    """Real-locus component summary for a curve (dict or JSON string)."""
    from ._core import trace_topology as _trace

    return _json.loads(_trace(_as_json(curve)))
