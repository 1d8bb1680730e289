"""Flat key = value study configuration files.

UTF-8 text, one ``key = value`` per line, ``#`` starts a comment, lists are
comma-separated. Keys match the study-config field names; per-method tuning
uses prefixed keys (scr_r, scr_c, gcr_r, gcr_c, gcr_rho, gcr_subsample,
sir_slices, save_slices).
"""

from __future__ import annotations

from .scr import ThresholdSpec
from .study import MethodConfig, StudyConfig

_STUDY_KEYS = {
    "model",
    "n",
    "sigma_grid",
    "a_grid",
    "replicates",
    "methods",
    "q",
    "norm",
    "master_seed",
    "workers",
}
_METHOD_KEYS = {
    "scr_r",
    "scr_c",
    "gcr_r",
    "gcr_c",
    "gcr_rho",
    "gcr_subsample",
    "sir_slices",
    "save_slices",
}


def parse_config_text(text: str) -> dict:
    """Parse config text into a raw {key: string} mapping."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip().lower()
        if key not in _STUDY_KEYS | _METHOD_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ValueError(f"config line {lineno}: duplicate key {key!r}")
        entries[key] = value.strip()
    return entries


def _threshold_from(entries, prefix) -> ThresholdSpec | None:
    r_key, c_key = f"{prefix}_r", f"{prefix}_c"
    if r_key in entries and c_key in entries:
        raise ValueError(f"give either {r_key} or {c_key}, not both")
    if r_key in entries:
        return ThresholdSpec.proportion(float(entries[r_key]))
    if c_key in entries:
        return ThresholdSpec.fixed_c(float(entries[c_key]))
    return None


def study_config_from_entries(entries: dict, overrides: dict | None = None) -> StudyConfig:
    """Build a StudyConfig from parsed entries plus CLI overrides."""
    entries = dict(entries)
    for key, value in (overrides or {}).items():
        if value is not None:
            entries[key] = str(value)
    missing = {"model", "n", "replicates", "methods", "q"} - entries.keys()
    if missing:
        raise ValueError(f"config is missing keys: {', '.join(sorted(missing))}")
    if "sigma_grid" in entries and "a_grid" in entries:
        raise ValueError("give either sigma_grid or a_grid, not both")
    grid_text = entries.get("sigma_grid", entries.get("a_grid"))
    if grid_text is None:
        raise ValueError("config is missing keys: sigma_grid")
    grid = tuple(float(v) for v in grid_text.split(","))

    methods = []
    for tag in entries["methods"].split(","):
        name = tag.strip().upper()
        if name in ("SCR", "GCR"):
            methods.append(
                MethodConfig(
                    name,
                    threshold=_threshold_from(entries, name.lower()),
                    rho=float(entries["gcr_rho"]) if name == "GCR" and "gcr_rho" in entries else None,
                    subsample=int(entries["gcr_subsample"])
                    if name == "GCR" and "gcr_subsample" in entries
                    else None,
                )
            )
        elif name in ("SIR", "SAVE"):
            key = f"{name.lower()}_slices"
            methods.append(
                MethodConfig(
                    name,
                    n_slices=int(entries[key]) if key in entries else None,
                )
            )
        else:
            methods.append(MethodConfig(name))

    return StudyConfig(
        model=entries["model"],
        n=int(entries["n"]),
        sigma_grid=grid,
        replicates=int(entries["replicates"]),
        methods=tuple(methods),
        q=int(entries["q"]),
        norm=entries.get("norm", "frobenius"),
        master_seed=int(entries.get("master_seed", 0)),
        workers=int(entries.get("workers", 1)),
    )


def load_study_config(path, overrides: dict | None = None) -> StudyConfig:
    with open(path, encoding="utf-8") as handle:
        return study_config_from_entries(parse_config_text(handle.read()), overrides)
