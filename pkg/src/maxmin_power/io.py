"""
JSON documents for instances, solutions and effective channels.

Instance document (all quantities linear scale, powers in mW)::

    {"K": 2, "N": 2, "p_max": 1.0,
     "A": [[1, 0], [0, 1]],        # K rows, N columns
     "b": [1, 1],
     "C": [[0, 1], [1, 0]],        # K rows, K columns
     "sigma": [1, 1]}

``A`` and ``C`` may also be given as flat row-major lists. A solution
document repeats the instance and adds ``t_star``, ``p_star``,
``active_n`` (0-based), ``rho_all``, ``certificate`` and ``certified``.
Oracle reports add ``method`` instead of the certificate fields.
"""

import json
from pathlib import Path

import numpy as np

from .problem import ProblemInstance

__all__ = [
    "DocumentError",
    "INSTANCE_FIELDS",
    "SOLUTION_FIELDS",
    "instance_to_dict",
    "instance_from_dict",
    "solution_to_dict",
    "oracle_to_dict",
    "effective_channel_to_dict",
    "load_document",
    "load_instance",
    "save_document",
]

INSTANCE_FIELDS = ("K", "N", "p_max", "A", "b", "C", "sigma")
SOLUTION_FIELDS = ("t_star", "p_star", "active_n", "rho_all")


class DocumentError(ValueError):
    pass


def _matrix(doc, name, rows, cols):
    raw = np.asarray(doc[name], dtype=float)
    if raw.ndim == 1 and raw.size == rows * cols:
        raw = raw.reshape(rows, cols)
    if raw.shape != (rows, cols):
        raise DocumentError(f"field '{name}' has shape {raw.shape}, expected ({rows}, {cols})")
    return raw


def _vector(doc, name, size):
    raw = np.asarray(doc[name], dtype=float)
    if raw.shape != (size,):
        raise DocumentError(f"field '{name}' has shape {raw.shape}, expected ({size},)")
    return raw


def instance_to_dict(inst):
    return {
        "K": int(inst.K),
        "N": int(inst.N),
        "p_max": float(inst.p_max),
        "A": inst.A.tolist(),
        "b": inst.b.tolist(),
        "C": inst.C.tolist(),
        "sigma": inst.sigma.tolist(),
    }


def instance_from_dict(doc):
    missing = [f for f in INSTANCE_FIELDS if f not in doc]
    if missing:
        raise DocumentError(f"missing field(s): {', '.join(missing)}")
    try:
        K, N = int(doc["K"]), int(doc["N"])
        return ProblemInstance(
            A=_matrix(doc, "A", K, N),
            b=_vector(doc, "b", K),
            C=_matrix(doc, "C", K, K),
            sigma=_vector(doc, "sigma", K),
            p_max=float(doc["p_max"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(f"malformed instance: {exc}") from exc


def solution_to_dict(inst, sol):
    doc = instance_to_dict(inst)
    doc.update(
        t_star=float(sol.t_star),
        p_star=sol.p_star.tolist(),
        active_n=int(sol.active_n),
        rho_all=sol.rho_all.tolist(),
        certificate=sol.certificate.tolist(),
        certified=[bool(c) for c in sol.certified],
    )
    return doc


def oracle_to_dict(inst, rep):
    doc = instance_to_dict(inst)
    doc.update(
        method=rep.method,
        t_star=float(rep.t_star),
        p_star=np.asarray(rep.p_star).tolist(),
        iterations=int(rep.iterations),
        converged=bool(rep.converged),
    )
    return doc


def effective_channel_to_dict(eff, inst):
    """Effective-channel export: a loadable instance plus ``G``, ``d``, ``n_samples``, ``regime``."""
    doc = instance_to_dict(inst)
    doc.update(
        G=eff.G.tolist(),
        d=eff.d.tolist(),
        n_samples=int(eff.n_samples),
        regime=eff.regime,
    )
    return doc


def load_document(path):
    """Parse a JSON file, reporting syntax errors with line and column."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise DocumentError(f"{path}: top level must be an object")
    return doc


def load_instance(path):
    doc = load_document(path)
    try:
        return instance_from_dict(doc)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def save_document(doc, path):
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
