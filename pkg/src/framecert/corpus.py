"""Bundled frame corpus (JSON files shipped inside the package)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .frames import FrameSpec, frame_from_json


def corpus_names() -> list[str]:
    root = resources.files(__package__).joinpath("corpus")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def corpus_text(name: str) -> str:
    path = resources.files(__package__).joinpath("corpus").joinpath(f"{name}.json")
    if not path.is_file():
        raise KeyError(f"no corpus frame named {name!r}")
    return path.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _load(name: str) -> tuple[FrameSpec, dict]:
    data = json.loads(corpus_text(name))
    meta = {k: v for k, v in data.items() if k != "vectors"}
    return frame_from_json(data), meta


def load_frame(name: str) -> FrameSpec:
    return _load(name)[0]


def load_meta(name: str) -> dict:
    return dict(_load(name)[1])


def load_corpus() -> dict[str, tuple[FrameSpec, dict]]:
    """``name -> (frame, metadata)`` for every bundled frame."""
    return {n: (_load(n)[0], dict(_load(n)[1])) for n in corpus_names()}
