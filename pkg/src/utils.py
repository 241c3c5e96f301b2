"""
Shared utility functions.

These are used across parsers, extractors, trainers and the CLI.
"""

import hashlib
import math
import os
from pathlib import Path
from typing import Dict, Iterable, Optional

from .constants import DEFAULT_SEED, SEED_ENV_VAR


def clamp(value: float, min_val: float, max_val: float) -> float:
    """
    Clamp a value to a range.

    Args:
        value: Value to clamp
        min_val: Minimum allowed value
        max_val: Maximum allowed value

    Returns:
        Value clamped to [min_val, max_val]
    """
    return max(min_val, min(max_val, value))


def round_half_up(value: float) -> int:
    """
    Round to the nearest integer, halves going up (2.5 -> 3, -0.5 -> 0).

    Python's round() uses banker's rounding, which would send 2.5 to 2.
    """
    return int(math.floor(value + 0.5))


def resolve_seed(seed: Optional[int]) -> int:
    """
    Resolve the seed for a run.

    Order: explicit value, then the GZGD_SEED environment variable,
    then the package default.
    """
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    return DEFAULT_SEED


def sha256_file(path: str | Path) -> str:
    """Hex SHA-256 of a single file."""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def sha256_path(path: str | Path) -> str:
    """
    Hex SHA-256 of a file, or of a directory tree.

    Directory hashes cover relative file names and contents in sorted order,
    so they are stable across platforms and listing orders. Manifests are
    excluded so that hashing an output directory is independent of the
    manifest written into it.
    """
    path = Path(path)
    if path.is_file():
        return sha256_file(path)

    digest = hashlib.sha256()
    for file in sorted(p for p in path.rglob('*') if p.is_file()):
        if file.name == 'manifest.json':
            continue
        digest.update(file.relative_to(path).as_posix().encode('utf-8'))
        digest.update(b'\0')
        digest.update(sha256_file(file).encode('ascii'))
    return digest.hexdigest()


def hash_paths(paths: Iterable[str | Path]) -> Dict[str, str]:
    """Map each existing path to its SHA-256; missing paths are skipped."""
    result = {}
    for p in paths:
        p = Path(p)
        if p.exists():
            result[str(p)] = sha256_path(p)
    return result
