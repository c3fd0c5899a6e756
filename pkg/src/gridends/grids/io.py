"""Serialization of domain specs and rasterized grids.

Domain specs travel as small JSON documents. Rasterized grids use a
self-describing binary format: a magic line, a JSON header with the lattice
geometry, then the inside mask as packed bits in row-major cell order. All
writers emit sorted keys and fixed layouts so identical inputs produce
identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from gridends.errors import BadParams
from gridends.grids.domain import DomainSpec, GridDomain

_MASK_MAGIC = b"gridends-mask-v1\n"


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, frozenset):
        return sorted(obj)
    raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def stable_json_dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, no NaN, trailing newline."""
    return (
        json.dumps(
            obj,
            sort_keys=True,
            indent=2,
            allow_nan=False,
            default=_jsonable,
        )
        + "\n"
    )


def spec_to_dict(spec: DomainSpec) -> dict[str, Any]:
    return {
        "name": spec.name,
        "params": dict(spec.params),
        "window": list(spec.window),
        "truncation": spec.truncation,
    }


def spec_from_dict(data: dict[str, Any]) -> DomainSpec:
    try:
        return DomainSpec(
            name=str(data["name"]),
            params=dict(data.get("params", {})),
            window=tuple(float(v) for v in data["window"]),  # type: ignore[arg-type]
            truncation=int(data.get("truncation", 1)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BadParams(f"malformed domain spec: {exc}") from exc


def save_spec(path: str | Path, spec: DomainSpec) -> None:
    Path(path).write_text(stable_json_dumps(spec_to_dict(spec)))


def load_spec(path: str | Path) -> DomainSpec:
    return spec_from_dict(json.loads(Path(path).read_text()))


def save_mask(path: str | Path, domain: GridDomain) -> None:
    """Write a rasterized domain as header plus packed inside bits."""
    header = {
        "clipped": sorted(domain.clipped_sides),
        "name": domain.spec.name,
        "params": dict(domain.spec.params),
        "shape": [domain.nx, domain.ny],
        "spacing": domain.spacing,
        "truncation": domain.spec.truncation,
        "window": list(domain.window),
    }
    blob = (
        _MASK_MAGIC
        + json.dumps(header, sort_keys=True, allow_nan=False).encode()
        + b"\n"
        + np.packbits(domain.inside.ravel()).tobytes()
    )
    Path(path).write_bytes(blob)


def load_mask(path: str | Path) -> GridDomain:
    """Reconstruct a rasterized domain from its packed-bit file."""
    blob = Path(path).read_bytes()
    if not blob.startswith(_MASK_MAGIC):
        raise BadParams(f"{path}: not a grid mask file")
    rest = blob[len(_MASK_MAGIC) :]
    nl = rest.index(b"\n")
    header = json.loads(rest[:nl].decode())
    nx, ny = (int(v) for v in header["shape"])
    bits = np.unpackbits(
        np.frombuffer(rest[nl + 1 :], dtype=np.uint8), count=nx * ny
    )
    spec = DomainSpec(
        name=header["name"],
        params=dict(header["params"]),
        window=tuple(float(v) for v in header["window"]),  # type: ignore[arg-type]
        truncation=int(header["truncation"]),
    )
    return GridDomain(
        spec=spec,
        spacing=float(header["spacing"]),
        window=tuple(float(v) for v in header["window"]),  # type: ignore[arg-type]
        inside=bits.astype(bool).reshape(nx, ny),
        clipped_sides=frozenset(header["clipped"]),
    )
