#!/usr/bin/env python3
"""Regenerate the bundled .pw corpus from the example builders.

The Python builders in fioa.examples are the source of truth; the text
files under src/fioa/corpus/ are their canonical serializations.  A test
compares the two, so run this after changing any example.
"""
from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fioa import examples  # noqa: E402


def main() -> int:
    corpus = pathlib.Path(__file__).resolve().parents[1] / "src" / "fioa" / "corpus"
    corpus.mkdir(parents=True, exist_ok=True)
    for name in examples.names():
        path = corpus / f"{name}.pw"
        path.write_text(examples.text(name), encoding="utf-8")
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
