"""JSON fan files.

    {"lattice_rank": 2,
     "rays": [[1, 0], [0, 1], [-1, -1]],
     "max_cones": [{"rays": [0, 1]}, {"rays": [0, 2]}, {"rays": [1, 2]}],
     "galois": {"generators": [[[0, -1], [1, -1]]]}}

``galois`` is optional; generator matrices are row-major and act on N.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ParseError
from .fan import Fan, build_and_validate
from .galois import GaloisAction, close_and_verify

SHIPPED = ("p1", "p2", "p1xp1", "conic", "p2rot", "conics2", "dp6", "dp6_cubic")


@dataclass(frozen=True)
class FanFile:
    fan: Fan
    action: GaloisAction
    generators: tuple

    def to_dict(self) -> dict:
        out = self.fan.to_dict()
        if self.generators:
            out["galois"] = {"generators": [[list(r) for r in g] for g in self.generators]}
        return out


def _int_list(x, what):
    if not isinstance(x, list) or not all(isinstance(t, int) and not isinstance(t, bool) for t in x):
        raise ParseError(f"{what} must be a list of integers")
    return x


def parse_fan_dict(data) -> FanFile:
    if not isinstance(data, dict):
        raise ParseError("fan file must be a JSON object")
    try:
        rank = data["lattice_rank"]
        rays = data["rays"]
        cones = data["max_cones"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from None
    if not isinstance(rank, int) or rank < 0:
        raise ParseError("lattice_rank must be a nonnegative integer")
    if not isinstance(rays, list) or not isinstance(cones, list):
        raise ParseError("rays and max_cones must be arrays")
    rays = [_int_list(r, "ray") for r in rays]
    idx = []
    for c in cones:
        if not isinstance(c, dict) or "rays" not in c:
            raise ParseError("each maximal cone must be an object with a 'rays' array")
        idx.append(_int_list(c["rays"], "cone"))
    gens = []
    if data.get("galois") is not None:
        g = data["galois"]
        if not isinstance(g, dict) or not isinstance(g.get("generators"), list):
            raise ParseError("galois must be an object with a 'generators' array")
        for m in g["generators"]:
            if not isinstance(m, list):
                raise ParseError("generator must be a matrix")
            gens.append(tuple(tuple(_int_list(r, "matrix row")) for r in m))
    fan = build_and_validate(rank, rays, idx)
    action = close_and_verify(fan, gens)
    return FanFile(fan, action, tuple(gens))


def shipped_path(name: str) -> Path:
    return Path(str(resources.files("toriheights") / "data" / "fans" / f"{name}.json"))


def load_fan_file(path_or_name: str) -> FanFile:
    """Load a fan from a path, or from a shipped example by name."""
    p = Path(path_or_name)
    if not p.exists():
        candidate = shipped_path(p.stem if p.suffix == ".json" else path_or_name)
        if not candidate.exists():
            raise ParseError(f"no fan file {path_or_name!r}")
        p = candidate
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: {exc}") from None
    return parse_fan_dict(data)


def dump_fan_file(ff: FanFile) -> str:
    return json.dumps(ff.to_dict(), indent=2)
