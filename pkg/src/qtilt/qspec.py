"""Line-oriented text format for quivers, relation ideals and cyclic modules.

Format (``#`` starts a comment, blank lines are ignored)::

    field <p>
    quiver <n>
    arrow <label> <source> <target>
    relations
    <expr>
    ...
    module <name> cyclic e_<i> / (<expr>)

with expressions::

    expr   ::= term (('+' | '-') term)*
    term   ::= [int '*'] factor ('*' factor)*
    factor ::= label | 'e_'<int> | '(' expr ')' '^' <int>

Vertices are 1-based in files and 0-based in memory.  Words compose
left to right: in ``b*y`` the arrow ``b`` acts first, so the target of
each factor must equal the source of the next.  ``(w)^k`` expands to
k-fold repetition.  Integer coefficients are reduced mod p at parse
time, so over GF(2) the signs ``+`` and ``-`` coincide.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "SpecError",
    "Arrow",
    "Quiver",
    "Word",
    "PathExpr",
    "ModuleDecl",
    "AlgebraSpec",
    "parse_algebra_spec",
    "parse_element",
    "print_expr",
]


class SpecError(ValueError):
    """Parse or validation error, located by line and column (1-based)."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(loc + message)


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    num_vertices: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("a quiver needs at least one vertex")
        labels = {}
        for k, a in enumerate(self.arrows):
            if a.label in labels:
                raise ValueError(f"duplicate arrow label {a.label!r}")
            labels[a.label] = k
            for v in (a.source, a.target):
                if not 0 <= v < self.num_vertices:
                    raise ValueError(f"arrow {a.label!r} uses vertex {v + 1} out of range")
        object.__setattr__(self, "_label_index", labels)

    def index_of(self, label: str) -> int:
        return self._label_index[label]

    def has_label(self, label: str) -> bool:
        return label in self._label_index

    def is_connected(self) -> bool:
        if self.num_vertices == 1:
            return True
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.arrows:
            parent[find(a.source)] = find(a.target)
        roots = {find(v) for v in range(self.num_vertices)}
        return len(roots) == 1

    def reversed(self) -> "Quiver":
        return Quiver(self.num_vertices, tuple(Arrow(a.label, a.target, a.source) for a in self.arrows))


@dataclass(frozen=True)
class Word:
    """A composable path: arrow indices read left to right, or a vertex idempotent."""

    source: int
    target: int
    arrows: tuple[int, ...]

    def key(self):
        return (len(self.arrows), self.arrows)

    def __len__(self):
        return len(self.arrows)

    def reversed(self) -> "Word":
        return Word(self.target, self.source, tuple(reversed(self.arrows)))


def word_of_arrows(quiver: Quiver, arrow_indices) -> Word:
    idx = tuple(arrow_indices)
    if not idx:
        raise ValueError("empty arrow sequence needs a vertex")
    for a, b in zip(idx, idx[1:]):
        if quiver.arrows[a].target != quiver.arrows[b].source:
            raise ValueError("non-composable arrow sequence")
    return Word(quiver.arrows[idx[0]].source, quiver.arrows[idx[-1]].target, idx)


@dataclass(frozen=True)
class PathExpr:
    """Formal GF(p)-linear combination of composable words, kept canonical."""

    p: int
    terms: tuple[tuple[int, Word], ...]

    @staticmethod
    def make(p: int, raw_terms) -> "PathExpr":
        acc: dict[Word, int] = {}
        for c, w in raw_terms:
            c = int(c) % p
            if c == 0:
                continue
            acc[w] = (acc.get(w, 0) + c) % p
        terms = tuple(
            (c, w) for w, c in sorted(acc.items(), key=lambda kv: kv[0].key(), reverse=True) if c
        )
        return PathExpr(p, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def words(self):
        return [w for _, w in self.terms]

    def is_homogeneous(self) -> bool:
        st = {(w.source, w.target) for _, w in self.terms}
        return len(st) <= 1

    def source_target(self):
        if not self.terms:
            return None
        w = self.terms[0][1]
        return (w.source, w.target)


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    vertex: int
    generator: PathExpr
    generator_text: str


@dataclass(frozen=True)
class AlgebraSpec:
    p: int
    quiver: Quiver
    relations: tuple[PathExpr, ...]
    modules: tuple[ModuleDecl, ...] = ()
    source_text: str = ""


# ----------------------------------------------------------------------
# expression parsing
# ----------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()*+^/-]))")
_IDEM_RE = re.compile(r"^e_(\d+)$")


def _tokenize(text: str, line: int, col0: int = 1):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise SpecError(f"unexpected character {rest[0]!r}", line, col0 + pos)
        col = col0 + m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), col))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), col))
        else:
            tokens.append(("op", m.group(3), col))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, tokens, quiver: Quiver, p: int, line: int):
        self.tokens = tokens
        self.i = 0
        self.quiver = quiver
        self.p = p
        self.line = line

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise SpecError("unexpected end of expression", self.line)
        self.i += 1
        return tok

    def expect_op(self, op):
        tok = self.next()
        if tok[0] != "op" or tok[1] != op:
            raise SpecError(f"expected {op!r}", self.line, tok[2])
        return tok

    def parse_expr(self) -> PathExpr:
        terms = list(self.parse_term())
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                break
            self.next()
            sign = 1 if tok[1] == "+" else -1
            terms.extend((sign * c, w) for c, w in self.parse_term())
        return PathExpr.make(self.p, terms)

    def parse_term(self):
        coeff = 1
        tok = self.peek()
        if tok is not None and tok[0] == "int":
            self.next()
            coeff = tok[1]
            self.expect_op("*")
        expr = self.parse_factor()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] != "*":
                break
            self.next()
            star_col = tok[2]
            expr = self._mul(expr, self.parse_factor(), star_col)
        return [(coeff * c, w) for c, w in expr]

    def parse_factor(self):
        tok = self.next()
        if tok[0] == "name":
            m = _IDEM_RE.match(tok[1])
            if m:
                v = int(m.group(1)) - 1
                if not 0 <= v < self.quiver.num_vertices:
                    raise SpecError(f"vertex {tok[1]} out of range", self.line, tok[2])
                return [(1, Word(v, v, ()))]
            if not self.quiver.has_label(tok[1]):
                raise SpecError(f"unknown arrow label {tok[1]!r}", self.line, tok[2])
            k = self.quiver.index_of(tok[1])
            a = self.quiver.arrows[k]
            return [(1, Word(a.source, a.target, (k,)))]
        if tok[0] == "op" and tok[1] == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            caret = self.expect_op("^")
            etok = self.next()
            if etok[0] != "int" or etok[1] < 1:
                raise SpecError("exponent must be a positive integer", self.line, etok[2])
            result = inner.terms
            for _ in range(etok[1] - 1):
                result = self._mul(result, inner.terms, caret[2])
            return list(result)
        raise SpecError("expected an arrow label, e_<i> or parenthesis", self.line, tok[2])

    def _mul(self, left, right, col):
        out = []
        for c1, w1 in left:
            for c2, w2 in right:
                if w1.target != w2.source:
                    raise SpecError(
                        "non-composable word: a factor ends at vertex "
                        f"{w1.target + 1} but the next starts at vertex {w2.source + 1}",
                        self.line,
                        col,
                    )
                out.append((c1 * c2, Word(w1.source, w2.target, w1.arrows + w2.arrows)))
        return out


def parse_element(text: str, quiver: Quiver, p: int, line: int = 1) -> PathExpr:
    """Parse a single expression against a quiver, coefficients mod p."""
    tokens = _tokenize(text, line)
    if not tokens:
        raise SpecError("empty expression", line)
    parser = _ExprParser(tokens, quiver, p, line)
    expr = parser.parse_expr()
    tok = parser.peek()
    if tok is not None:
        raise SpecError(f"trailing input {tok[1]!r}", line, tok[2])
    return expr


def print_expr(expr: PathExpr, quiver: Quiver) -> str:
    """Canonical rendering; ``parse_element(print_expr(e)) == e``."""
    if expr.is_zero():
        return "0"
    parts = []
    for c, w in expr.terms:
        factors = [quiver.arrows[k].label for k in w.arrows] if w.arrows else [f"e_{w.source + 1}"]
        body = "*".join(factors)
        parts.append(body if c == 1 else f"{c}*{body}")
    return " + ".join(parts)


# ----------------------------------------------------------------------
# file parsing
# ----------------------------------------------------------------------

_MODULE_RE = re.compile(r"^module\s+(\w+)\s+cyclic\s+e_(\d+)\s*/\s*\((.*)\)\s*$")


def parse_algebra_spec(text: str) -> AlgebraSpec:
    """Parse and validate a full algebra description.

    Relations must be homogeneous: all words of one relator share source
    and target.  Errors carry the offending line and column.
    """
    p = None
    num_vertices = None
    arrows: list[Arrow] = []
    relations: list[PathExpr] = []
    modules: list[ModuleDecl] = []
    quiver: Quiver | None = None
    section = "header"

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]

        if head == "field":
            parts = line.split()
            if section != "header" or p is not None or len(parts) != 2 or not parts[1].isdigit():
                raise SpecError("expected a single 'field <p>' directive first", lineno)
            p = int(parts[1])
            if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
                raise SpecError(f"characteristic {p} is not prime", lineno)
        elif head == "quiver":
            parts = line.split()
            if section != "header" or num_vertices is not None or len(parts) != 2 or not parts[1].isdigit():
                raise SpecError("expected a single 'quiver <n>' directive", lineno)
            num_vertices = int(parts[1])
            if num_vertices < 1:
                raise SpecError("a quiver needs at least one vertex", lineno)
        elif head == "arrow":
            parts = line.split()
            if section != "header" or num_vertices is None or len(parts) != 4:
                raise SpecError("expected 'arrow <label> <source> <target>' after 'quiver'", lineno)
            label, s, t = parts[1], parts[2], parts[3]
            if not (s.isdigit() and t.isdigit()):
                raise SpecError("arrow endpoints must be vertex numbers", lineno)
            s, t = int(s) - 1, int(t) - 1
            if any(a.label == label for a in arrows):
                raise SpecError(f"duplicate arrow label {label!r}", lineno)
            if not (0 <= s < num_vertices and 0 <= t < num_vertices):
                raise SpecError(f"vertex out of range in arrow {label!r}", lineno)
            arrows.append(Arrow(label, s, t))
        elif head == "relations":
            if section != "header" or p is None or num_vertices is None:
                raise SpecError("'relations' must follow the field and quiver directives", lineno)
            quiver = Quiver(num_vertices, tuple(arrows))
            section = "relations"
        elif head == "module":
            if section not in ("relations", "modules") or quiver is None:
                raise SpecError("'module' lines must follow the relations section", lineno)
            section = "modules"
            m = _MODULE_RE.match(line)
            if m is None:
                raise SpecError("expected 'module <name> cyclic e_<i> / (<expr>)'", lineno)
            name, vstr, body = m.group(1), m.group(2), m.group(3)
            if any(d.name == name for d in modules):
                raise SpecError(f"duplicate module name {name!r}", lineno)
            v = int(vstr) - 1
            if not 0 <= v < quiver.num_vertices:
                raise SpecError(f"vertex e_{vstr} out of range", lineno)
            gen = parse_element(body, quiver, p, line=lineno)
            for w in gen.words():
                if w.source != v:
                    raise SpecError(f"generator of module {name!r} does not start at vertex {vstr}", lineno)
            modules.append(ModuleDecl(name, v, gen, body.strip()))
        else:
            if section == "relations":
                expr = parse_element(line, quiver, p, line=lineno)
                if not expr.is_homogeneous():
                    raise SpecError("relation mixes words with different source or target", lineno)
                relations.append(expr)
            else:
                raise SpecError(f"unrecognised directive {head!r}", lineno)

    if p is None:
        raise SpecError("missing 'field <p>' directive")
    if num_vertices is None:
        raise SpecError("missing 'quiver <n>' directive")
    if quiver is None:
        quiver = Quiver(num_vertices, tuple(arrows))
    return AlgebraSpec(p, quiver, tuple(relations), tuple(modules), text)
