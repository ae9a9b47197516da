"""
Content digests for reproducibility checks.
"""
import hashlib
from typing import Any

from dio.serialize import dumps


def json_digest(obj: Any) -> str:
    """sha256 of the canonical JSON text of obj."""
    return hashlib.sha256(dumps(obj).encode("utf-8")).hexdigest()
