"""Pair files and the bundled corpus.

A pair file holds two programs separated by a line that is exactly
``|||``.  Leading ``(* expect: VERDICT; bound: N *)`` comments record the
expected verdict and the bound at which the checker reaches it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

CORPUS_DIR = Path(__file__).with_name("corpus")
SEPARATOR = "|||"

_META = re.compile(r"\(\*\s*expect:\s*(\w+)\s*;\s*bound:\s*(\d+)\s*\*\)")


class PairFormatError(ValueError):
    pass


def split_pair(text: str) -> tuple:
    lines = text.splitlines()
    cut = [i for i, ln in enumerate(lines) if ln.strip() == SEPARATOR]
    if len(cut) != 1:
        raise PairFormatError(f"expected exactly one '{SEPARATOR}' line, found {len(cut)}")
    i = cut[0]
    return "\n".join(lines[:i]), "\n".join(lines[i + 1:])


@dataclass(frozen=True)
class CorpusPair:
    name: str
    left: str
    right: str
    expect: Optional[str]
    bound: Optional[int]

    @property
    def text(self) -> str:
        return f"{self.left}\n{SEPARATOR}\n{self.right}\n"


def read_pair(path: Path) -> CorpusPair:
    text = Path(path).read_text(encoding="utf-8")
    left, right = split_pair(text)
    m = _META.search(text)
    return CorpusPair(Path(path).stem, left, right,
                      m.group(1) if m else None, int(m.group(2)) if m else None)


def corpus() -> list:
    return [read_pair(p) for p in sorted(CORPUS_DIR.glob("*.pcf"))]


def resolve(arg: str) -> Path:
    """A pair file path, or the name of a bundled pair (``ex1``, ``ex1.pcf``)."""
    p = Path(arg)
    if p.is_file():
        return p
    bundled = CORPUS_DIR / (Path(arg).stem + ".pcf")
    if bundled.is_file():
        return bundled
    raise FileNotFoundError(arg)
