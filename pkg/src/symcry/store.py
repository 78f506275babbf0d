"""On-disk cache of weight spaces, keyed by a content hash of the Cartan datum."""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

from ._boson import GradedPiece

log = logging.getLogger(__name__)

__all__ = ["dumps", "cache_key", "cache_dir", "load_pieces", "save_pieces", "write_text"]


def dumps(obj):
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def cache_key(datum):
    blob = json.dumps(datum.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def cache_dir(root, datum):
    return Path(root) / "cache" / cache_key(datum)


def _piece_name(grade):
    return "sw_" + "_".join(map(str, grade)) + ".json"


def write_text(path, text):
    """Write only when the content changes, so reruns leave files untouched."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.exists() and path.read_text() == text:
        return False
    path.write_text(text)
    return True


def load_pieces(model, root):
    """Preload every cached weight space into ``model``; returns how many were read."""
    d = cache_dir(root, model.datum)
    if not d.is_dir():
        return 0
    count = 0
    for f in sorted(d.glob("sw_*.json")):
        piece = GradedPiece.from_json(json.loads(f.read_text()), model.letters)
        model._pieces.setdefault(piece.grade, piece)
        count += 1
    log.info("loaded %d cached weight spaces from %s", count, d)
    return count


def save_pieces(model, root, depth):
    d = cache_dir(root, model.datum)
    write_text(d / "datum.json", dumps(model.datum.to_json()))
    written = 0
    for sw in model.all_symweights(depth):
        written += write_text(d / _piece_name(sw), dumps(model.piece(sw).to_json()))
    return d, written
