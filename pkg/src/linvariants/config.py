"""Run configuration: parsing, validation and defaults.

A configuration is a JSON object::

    {
      "p": 5, "d": 1, "N": 12, "depth": 8,
      "weight": {"k": [2], "w": 2},
      "group": {"fixture": "tate_rank1.json"}      # or {"generators": [["150","0","0","1"]]}
      "tau": 0,                                     # or "all"
      "guard": 2,
      "precision_budget": null,                     # extra working digits, default from weight and depth
      "up_reps": null, "up_scale": null,
      "branch": "iwasawa",                          # or a p-adic string for log(p)
      "z0": null,
      "cmp": true,
      "output": null
    }

Fixture paths are resolved relative to the configuration file, then against
the fixtures shipped with the package.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .coeff import WeightData
from .padic import is_prime


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int
    d: int
    N: int
    depth: int
    k: tuple
    w: int
    group: dict
    tau: object = 0
    guard: int = 2
    precision_budget: int | None = None
    up_reps: list | None = None
    up_scale: str | None = None
    branch: str = "iwasawa"
    z0: str | None = None
    cmp: bool = True
    output: str | None = None
    label: str = ""
    base_dir: str = "."
    extra: dict = field(default_factory=dict)

    @property
    def weight(self) -> WeightData:
        return WeightData.from_kw(self.k, self.w)

    @property
    def budget(self) -> int:
        """Extra digits carried on top of N."""
        if self.precision_budget is not None:
            return int(self.precision_budget)
        return 8 + 2 * max(x - 2 for x in self.k) * self.depth

    @property
    def working_precision(self) -> int:
        return self.N + self.budget

    @property
    def tree_precision(self) -> int:
        """Precision of the matrix field: long words need room for their determinants."""
        return self.working_precision + 4 * self.depth + 10

    def taus(self) -> list[int]:
        if self.tau == "all":
            return list(range(self.d))
        return [int(self.tau)]

    def with_changes(self, **kw) -> "RunConfig":
        data = asdict(self)
        data.update(kw)
        return RunConfig(**data)

    def to_json(self) -> dict:
        out = asdict(self)
        out["k"] = list(self.k)
        out.pop("base_dir")
        out.pop("extra")
        out["working_precision"] = self.working_precision
        out["tree_precision"] = self.tree_precision
        return out

    def fixture_path(self) -> Path | None:
        name = self.group.get("fixture")
        if name is None:
            return None
        cand = Path(self.base_dir) / name
        if cand.exists():
            return cand
        shipped = resources.files("linvariants") / "fixtures" / Path(name).name
        if shipped.is_file():
            return Path(str(shipped))
        raise ConfigError(f"fixture not found: {name}")


def _require(obj, key):
    if key not in obj:
        raise ConfigError(f"missing config field '{key}'")
    return obj[key]


def parse_config(obj: dict, base_dir: str = ".") -> RunConfig:
    if not isinstance(obj, dict):
        raise ConfigError("configuration must be a JSON object")
    try:
        p, d, N, depth = int(_require(obj, "p")), int(obj.get("d", 1)), int(_require(obj, "N")), int(_require(obj, "depth"))
        wt = _require(obj, "weight")
        k = tuple(int(x) for x in (wt["k"] if isinstance(wt, dict) else wt[0]))
        w = int(wt["w"] if isinstance(wt, dict) else wt[1])
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    group = _require(obj, "group")
    known = {f for f in RunConfig.__dataclass_fields__} | {"weight"}
    cfg = RunConfig(
        p=p, d=d, N=N, depth=depth, k=k, w=w, group=group,
        tau=obj.get("tau", 0), guard=int(obj.get("guard", 2)),
        precision_budget=obj.get("precision_budget"),
        up_reps=obj.get("up_reps"), up_scale=obj.get("up_scale"),
        branch=str(obj.get("branch", "iwasawa")), z0=obj.get("z0"),
        cmp=bool(obj.get("cmp", True)), output=obj.get("output"),
        label=str(obj.get("label", "")), base_dir=base_dir,
        extra={x: v for x, v in obj.items() if x not in known},
    )
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    if not is_prime(cfg.p):
        raise ConfigError(f"p = {cfg.p} is not prime")
    if cfg.d < 1:
        raise ConfigError("d must be >= 1")
    if len(cfg.k) != cfg.d:
        raise ConfigError(f"weight needs {cfg.d} entries k_tau, got {len(cfg.k)}")
    try:
        cfg.weight
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.depth < 1:
        raise ConfigError("depth must be >= 1")
    if cfg.N < cfg.depth + cfg.guard:
        raise ConfigError(f"N = {cfg.N} is below depth + guard = {cfg.depth + cfg.guard}")
    if cfg.tau != "all" and not (0 <= int(cfg.tau) < cfg.d):
        raise ConfigError("tau out of range")
    if "fixture" not in cfg.group and "generators" not in cfg.group:
        raise ConfigError("group needs 'fixture' or 'generators'")


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(obj, str(path.parent))
