"""Text serialization for uniform multihypergraphs (the ".hg" format).

Layout: a header line `k n m` (uniformity, ground-set size, number of
distinct edges), then m edge lines.  An edge line is an ascending
space-separated vertex list in 1..n, optionally suffixed `* c` for a
multiplicity c >= 2.  Blank lines and lines starting with `#` are skipped.
"""

from __future__ import annotations

from .core import CapacityError, Multihypergraph, VertexSet, ground_capacity


class FormatError(ValueError):
    """Malformed .hg input."""


def dumps(family: Multihypergraph) -> str:
    """Serialize; the ground-set size is the largest vertex label used."""
    n = family.max_vertex()
    lines = [f"{family.k} {n} {family.num_distinct}"]
    for edge, mult in family.edges:
        body = " ".join(str(v) for v in edge)
        if mult > 1:
            body += f" * {mult}"
        lines.append(body)
    return "\n".join(lines) + "\n"


def loads(text: str) -> Multihypergraph:
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise FormatError("empty input")
    header = lines[0].split()
    if len(header) != 3:
        raise FormatError(f"header must be 'k n m', got {lines[0]!r}")
    try:
        k, n, m = (int(x) for x in header)
    except ValueError as exc:
        raise FormatError(f"non-integer header field in {lines[0]!r}") from exc
    if k < 1:
        raise FormatError(f"uniformity must be positive, got {k}")
    if n < 0:
        raise FormatError(f"ground-set size must be nonnegative, got {n}")
    if n > ground_capacity():
        raise CapacityError(
            f"declared ground-set size {n} exceeds the bound {ground_capacity()}"
        )
    if m < 0:
        raise FormatError(f"edge count must be nonnegative, got {m}")
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} edge lines, found {len(lines) - 1}")

    edges: list[tuple[VertexSet, int]] = []
    seen: set[int] = set()
    for line in lines[1:]:
        mult = 1
        body = line
        if "*" in line:
            left, _, right = line.partition("*")
            body = left.strip()
            try:
                mult = int(right.strip())
            except ValueError as exc:
                raise FormatError(f"bad multiplicity suffix in {line!r}") from exc
            if mult < 2:
                raise FormatError(
                    f"multiplicity suffix must be >= 2 in {line!r}; "
                    "omit it for simple edges"
                )
        try:
            verts = [int(x) for x in body.split()]
        except ValueError as exc:
            raise FormatError(f"non-integer vertex in {line!r}") from exc
        if len(verts) != k:
            raise FormatError(f"edge {line!r} has {len(verts)} vertices, expected {k}")
        if any(v < 1 or v > n for v in verts):
            raise FormatError(f"vertex out of range 1..{n} in {line!r}")
        if any(verts[i] >= verts[i + 1] for i in range(len(verts) - 1)):
            raise FormatError(f"edge {line!r} is not strictly ascending")
        edge = VertexSet(verts)
        if edge.mask in seen:
            raise FormatError(f"duplicate edge {line!r}")
        seen.add(edge.mask)
        edges.append((edge, mult))
    return Multihypergraph(k, edges)


def save(family: Multihypergraph, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(family))


def load(path: str) -> Multihypergraph:
    with open(path, "r", encoding="ascii") as fh:
        return loads(fh.read())
