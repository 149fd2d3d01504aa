"""Access to the bundled corpus of named crystallographic inputs."""

from __future__ import annotations

import json
from importlib import resources


def corpus_names():
    root = resources.files(__package__) / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_corpus(name):
    root = resources.files(__package__) / "corpus"
    path = root / f"{name}.json"
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise KeyError(f"no corpus entry named {name!r}") from None
    return json.loads(text)
