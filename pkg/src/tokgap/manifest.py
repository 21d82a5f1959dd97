"""Run manifests: enough provenance to rerun a command bit-exactly.

Every CLI invocation that writes artifacts also writes a manifest listing
the command line, the configuration, and SHA-256 digests of all inputs
and outputs. Replaying the recorded command against inputs with matching
digests reproduces the outputs byte for byte, because all randomness is
seed-controlled. The timestamp honours ``SOURCE_DATE_EPOCH`` so that even
the manifest itself can be made reproducible.
"""

import hashlib
import json
import os
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import DataError


def file_digest(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        moment = datetime.now(tz=timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def build_manifest(command: list[str], inputs: list, outputs: list,
                   config: dict) -> dict:
    return {
        "tool": "tokgap",
        "version": __version__,
        "timestamp": _timestamp(),
        "command": list(command),
        "config": config,
        "inputs": [
            {"path": str(path), "sha256": file_digest(path)} for path in inputs
        ],
        "outputs": [
            {"path": str(path), "sha256": file_digest(path)} for path in outputs
        ],
    }


def write_manifest(manifest: dict, path) -> None:
    Path(path).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def verify_manifest(path) -> list[str]:
    """Recompute all digests in a manifest; return the mismatches."""
    try:
        manifest = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    problems = []
    for section in ("inputs", "outputs"):
        for entry in manifest.get(section, []):
            recorded = entry.get("sha256", "")
            file_path = entry.get("path", "")
            if not os.path.exists(file_path):
                problems.append(f"{section}: {file_path} is missing")
            elif file_digest(file_path) != recorded:
                problems.append(f"{section}: {file_path} digest changed")
    return problems
