"""File-backed workspace: assessments, cycles, models, score history.

Layout under the workspace root:

    models/<model_id>@<version>.json
    assessments/<id>/v<N>.json        response-set versions, append-only
    cycles/<cycle_id>.json
    scores/<assessment_id>/<n>.json   score history (optional)
    index.json                        cache; rebuildable by directory scan

All writes are atomic (temp file + rename in the same directory), so an
interrupted write never corrupts the previous version. Saves use
optimistic versioning: a save carries the base version it was derived
from and conflicts if a newer version exists.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import jsonio
from .errors import NotFound, StorageError, VersionConflict
from .model import MaturityModel, load_model, model_to_dict
from .planner import MeasurementCycle
from .scoring import ResponseSet, ScoreReport

ENV_HOME = "STAGEGATE_HOME"
_VERSION_RE = re.compile(r"^v(\d+)\.json$")


def default_root() -> Path:
    env = os.environ.get(ENV_HOME)
    return Path(env) if env else Path.home() / ".stagegate"


@dataclass
class Workspace:
    root: Path

    @property
    def assessments_dir(self) -> Path:
        return self.root / "assessments"

    @property
    def cycles_dir(self) -> Path:
        return self.root / "cycles"

    @property
    def models_dir(self) -> Path:
        return self.root / "models"

    @property
    def scores_dir(self) -> Path:
        return self.root / "scores"

    @property
    def index_path(self) -> Path:
        return self.root / "index.json"


def init_workspace(root: str | Path) -> Workspace:
    ws = Workspace(root=Path(root))
    for d in (ws.root, ws.assessments_dir, ws.cycles_dir, ws.models_dir, ws.scores_dir):
        d.mkdir(parents=True, exist_ok=True)
    if not ws.index_path.exists():
        _atomic_write_json(ws.index_path, {})
    return ws


def open_workspace(root: str | Path | None = None) -> Workspace:
    root = Path(root) if root else default_root()
    if not (root / "assessments").is_dir():
        raise NotFound(f"no workspace at {root} (run init first)")
    return Workspace(root=root)


def _atomic_write_json(path: Path, payload) -> None:
    """Write via temp file + rename so readers never see partial content."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _read_json(path: Path):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise NotFound(f"no such record: {path}")
    except (OSError, json.JSONDecodeError) as e:
        raise StorageError(f"cannot read {path}: {e}")


# --- models ----------------------------------------------------------------

def save_model(ws: Workspace, model: MaturityModel) -> Path:
    path = ws.models_dir / f"{model.model_id}@{model.version}.json"
    _atomic_write_json(path, model_to_dict(model))
    return path


def load_workspace_model(ws: Workspace, model_id: str, version: str) -> MaturityModel:
    path = ws.models_dir / f"{model_id}@{version}.json"
    if not path.exists():
        raise NotFound(f"model {model_id}@{version} not in workspace")
    return load_model(path)


# --- assessments -----------------------------------------------------------

def latest_version(ws: Workspace, assessment_id: str) -> int:
    """Highest stored version, 0 if the assessment has no versions yet."""
    d = ws.assessments_dir / assessment_id
    if not d.is_dir():
        raise NotFound(f"no such assessment: {assessment_id}")
    versions = [int(m.group(1)) for p in d.iterdir()
                if (m := _VERSION_RE.match(p.name))]
    return max(versions, default=0)


def save_assessment(ws: Workspace, responses: ResponseSet,
                    base_version: int | None = None) -> int:
    """Persist a new version; conflicts if base_version is stale.

    base_version None means "first save" and conflicts if any version exists.
    """
    d = ws.assessments_dir / responses.assessment_id
    d.mkdir(parents=True, exist_ok=True)
    current = latest_version(ws, responses.assessment_id)
    base = base_version if base_version is not None else 0
    if base != current:
        raise VersionConflict(
            f"assessment {responses.assessment_id}: base version {base} "
            f"is stale (latest is {current})")
    new_version = current + 1
    _atomic_write_json(d / f"v{new_version}.json", jsonio.responses_to_dict(responses))
    _index_update(ws, responses, new_version)
    return new_version


def load_assessment(ws: Workspace, assessment_id: str,
                    version: int | None = None) -> ResponseSet:
    d = ws.assessments_dir / assessment_id
    if not d.is_dir():
        raise NotFound(f"no such assessment: {assessment_id}")
    v = version if version is not None else latest_version(ws, assessment_id)
    path = d / f"v{v}.json"
    if not path.exists():
        raise NotFound(f"assessment {assessment_id} has no version {v}")
    return jsonio.responses_from_dict(_read_json(path))


def list_assessments(ws: Workspace) -> dict:
    return _read_json(ws.index_path) if ws.index_path.exists() else {}


# --- cycles ----------------------------------------------------------------

def save_cycle(ws: Workspace, cycle: MeasurementCycle) -> None:
    _atomic_write_json(ws.cycles_dir / f"{cycle.cycle_id}.json",
                       jsonio.cycle_to_dict(cycle))
    index = list_assessments(ws)
    meta = index.get(cycle.assessment_id)
    if meta is not None:
        cycles = meta.setdefault("cycles", [])
        if cycle.cycle_id not in cycles:
            cycles.append(cycle.cycle_id)
        _atomic_write_json(ws.index_path, index)


def load_cycle(ws: Workspace, cycle_id: str) -> MeasurementCycle:
    path = ws.cycles_dir / f"{cycle_id}.json"
    if not path.exists():
        raise NotFound(f"no such cycle: {cycle_id}")
    return jsonio.cycle_from_dict(_read_json(path))


def active_cycle(ws: Workspace, assessment_id: str) -> MeasurementCycle | None:
    meta = list_assessments(ws).get(assessment_id)
    if not meta or not meta.get("cycles"):
        return None
    return load_cycle(ws, meta["cycles"][-1])


# --- score history ---------------------------------------------------------

def append_score(ws: Workspace, report: ScoreReport) -> Path:
    d = ws.scores_dir / report.assessment_id
    d.mkdir(parents=True, exist_ok=True)
    n = len(list(d.glob("*.json"))) + 1
    path = d / f"{n:04d}.json"
    _atomic_write_json(path, jsonio.score_to_dict(report))
    return path


# --- index -----------------------------------------------------------------

def _index_update(ws: Workspace, responses: ResponseSet, version: int) -> None:
    index = list_assessments(ws)
    meta = index.setdefault(responses.assessment_id, {
        "institution": responses.institution,
        "model_id": responses.model_id,
        "model_version": responses.model_version,
        "created_at": _created_at(ws, responses.assessment_id),
        "cycles": [],
    })
    meta["institution"] = responses.institution
    meta["latest_version"] = version
    _atomic_write_json(ws.index_path, index)


def _created_at(ws: Workspace, assessment_id: str) -> str:
    # derived from the first version file's mtime so a rebuilt index agrees
    return _file_created(ws.assessments_dir / assessment_id / "v1.json")


def rebuild_index(ws: Workspace) -> dict:
    """Recreate index.json from the directory tree; the scan is the truth."""
    index: dict = {}
    if ws.assessments_dir.is_dir():
        for d in sorted(ws.assessments_dir.iterdir()):
            if not d.is_dir():
                continue
            versions = sorted(int(m.group(1)) for p in d.iterdir()
                              if (m := _VERSION_RE.match(p.name)))
            if not versions:
                continue
            latest = jsonio.responses_from_dict(_read_json(d / f"v{versions[-1]}.json"))
            index[d.name] = {
                "institution": latest.institution,
                "model_id": latest.model_id,
                "model_version": latest.model_version,
                "created_at": _file_created(d / f"v{versions[0]}.json"),
                "latest_version": versions[-1],
                "cycles": [],
            }
    if ws.cycles_dir.is_dir():
        cycles = []
        for p in sorted(ws.cycles_dir.glob("*.json")):
            data = _read_json(p)
            # first-write order recovered from file mtime (ns resolution)
            cycles.append((p.stat().st_mtime_ns, data["assessment_id"],
                           data["cycle_id"]))
        for _, assessment_id, cycle_id in sorted(cycles):
            if assessment_id in index:
                index[assessment_id]["cycles"].append(cycle_id)
    _atomic_write_json(ws.index_path, index)
    return index


def _file_created(path: Path) -> str:
    from datetime import datetime, timezone
    ts = path.stat().st_mtime
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat(timespec="seconds")


__all__ = [
    "ENV_HOME", "Workspace", "default_root", "init_workspace", "open_workspace",
    "save_model", "load_workspace_model",
    "save_assessment", "load_assessment", "latest_version", "list_assessments",
    "save_cycle", "load_cycle", "active_cycle", "append_score", "rebuild_index",
]
