"""Text formats for the CLI.

Pmf files hold one measure per line, `offset; m0 m1 m2 ...` with masses as
`p/q` rationals (or integers).  Cube-function files hold one value per line
in index order, rationals or decimal floats.  Cost tables hold `x y value`
lines.  Coupling dumps are `x y p/q` lines in lexicographic order.
Parsing and emission round-trip exactly on canonical forms.
"""

from __future__ import annotations

from fractions import Fraction

from .coupling import Coupling
from .errors import NotNormalized, ParseError
from .fourfunctions import CubeFn
from .measures import Pmf, pmf
from .transport import CostFn


def parse_rational(token: str, line: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line, f"bad rational {token!r}") from None


def parse_pmf_text(text: str) -> Pmf:
    """First non-empty, non-comment line as a Pmf; errors carry line numbers."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ";" not in line:
            raise ParseError(line_no, "expected 'offset; m0 m1 ...'")
        head, _, tail = line.partition(";")
        try:
            offset = int(head.strip())
        except ValueError:
            raise ParseError(line_no, f"bad offset {head.strip()!r}") from None
        tokens = tail.split()
        if not tokens:
            raise ParseError(line_no, "no masses")
        masses = [parse_rational(t, line_no) for t in tokens]
        try:
            return pmf(offset, masses)
        except NotNormalized as exc:
            raise ParseError(line_no, f"masses do not sum to 1 (deficit {exc.deficit})") from None
        except ValueError as exc:
            raise ParseError(line_no, str(exc)) from None
    raise ParseError(0, "empty pmf file")


def parse_pmf_file(path: str) -> Pmf:
    with open(path, encoding="utf-8") as fh:
        return parse_pmf_text(fh.read())


def emit_pmf(nu: Pmf) -> str:
    return str(nu) + "\n"


def parse_cubefn_text(text: str, n: int) -> CubeFn:
    values = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "." in line or ("e" in line.lower() and "/" not in line):
            try:
                values.append(float(line))
            except ValueError:
                raise ParseError(line_no, f"bad value {line!r}") from None
        else:
            values.append(parse_rational(line, line_no))
    if len(values) != 2**n:
        raise ParseError(0, f"expected 2^{n} = {2**n} values, found {len(values)}")
    return CubeFn(n, tuple(values))


def parse_cubefn_file(path: str, n: int) -> CubeFn:
    with open(path, encoding="utf-8") as fh:
        return parse_cubefn_text(fh.read(), n)


def emit_cubefn(fn: CubeFn) -> str:
    return "\n".join(str(v) for v in fn.values) + "\n"


def parse_cost_table_text(text: str, symmetric: bool = False, name: str = "table") -> CostFn:
    table: dict[tuple[int, int], Fraction] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(line_no, "expected 'x y value'")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(line_no, "bad integer coordinate") from None
        table[(x, y)] = parse_rational(parts[2], line_no)
        if symmetric:
            table.setdefault((y, x), table[(x, y)])

    def evaluate(x: int, y: int):
        try:
            return table[(x, y)]
        except KeyError:
            raise ParseError(0, f"cost table has no entry for ({x},{y})") from None

    return CostFn(name, symmetric, evaluate)


def parse_cost_table_file(path: str, symmetric: bool = False) -> CostFn:
    with open(path, encoding="utf-8") as fh:
        return parse_cost_table_text(fh.read(), symmetric=symmetric, name=path)


def emit_coupling(c: Coupling) -> str:
    return "\n".join(f"{x} {y} {p}" for x, y, p in c.atoms) + "\n"
