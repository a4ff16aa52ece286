"""Family file I/O.

A family file is one JSON object with exact keys q, n, k, subspaces, where
subspaces is a list of basis matrices (lists of coordinate rows). Bases
need not be reduced; they are canonicalized on load. Two listed bases that
canonicalize to the same subspace are an error, not a silent dedup.
"""

from __future__ import annotations

import json
from typing import IO

from .errors import DuplicateSubspace, FamilyFileError
from .families import Family
from .gfq import make_field
from .grassmann import subspace_from_vectors

_KEYS = ("q", "n", "k", "subspaces")


def parse_family(text: str) -> Family:
    """Parse family-file JSON text into a canonical Family."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FamilyFileError("family file must be a JSON object")
    missing = [key for key in _KEYS if key not in data]
    if missing:
        raise FamilyFileError(f"missing keys: {', '.join(missing)}")
    q, n, k = data["q"], data["n"], data["k"]
    if not all(isinstance(v, int) for v in (q, n, k)):
        raise FamilyFileError("q, n and k must be integers")
    subspaces = data["subspaces"]
    if not isinstance(subspaces, list):
        raise FamilyFileError("subspaces must be a list of basis matrices")
    try:
        field = make_field(q)
    except ValueError as exc:
        raise FamilyFileError(str(exc)) from exc
    members = []
    for pos, basis in enumerate(subspaces):
        if not isinstance(basis, list) or not basis:
            raise FamilyFileError(f"subspace #{pos} is not a nonempty row list")
        for row in basis:
            if (
                not isinstance(row, list)
                or len(row) != n
                or not all(isinstance(e, int) and 0 <= e < q for e in row)
            ):
                raise FamilyFileError(
                    f"subspace #{pos} has a bad row (need {n} integers below {q})"
                )
        sub = subspace_from_vectors(field, n, basis)
        if sub.k != k:
            raise FamilyFileError(
                f"subspace #{pos} spans dimension {sub.k}, file says k={k}"
            )
        members.append(sub)
    if len({s.key for s in members}) != len(members):
        raise DuplicateSubspace("family file lists the same subspace more than once")
    return Family(field, n, k, members)


def load_family(stream: IO[str]) -> Family:
    return parse_family(stream.read())


def format_family(fam: Family) -> str:
    """Serialize with canonical rref bases, byte-stable for equal families."""
    payload = {
        "q": fam.field.q,
        "n": fam.n,
        "k": fam.k,
        "subspaces": [
            [list(row) for row in s.basis.to_rows()] for s in fam.members
        ],
    }
    return json.dumps(payload, separators=(",", ":"))
