"""Randomness amplification from SV sources: bounds, attack LP and protocol simulation."""

import json as _json

from ._svamp import *  # noqa: F401,F403
from ._svamp import run_cli

def cli_json(*args):
    """Run a subcommand and parse its JSON artifact. Raises RuntimeError on a nonzero exit."""
    code, out, err = run_cli([str(a) for a in args])
    if code != 0:
        raise RuntimeError(f"svamp exited with {code}: {err.strip()}")
    return _json.loads(out)


__all__ = [name for name in dir() if not name.startswith("_")]
