"""Built-in definition extractor for a C-like source subset.

Recognizes top-level composite types (``struct``/``class``/``union``/
``enum``/``typedef``), top-level variables, free functions, and member
functions nested directly inside a composite. Emits name-based dependency
edges restricted to function->type/global/function, global->type and
type->type; references are resolved against a whole-variant symbol table
of definition names, so local shadowing is deliberately not modeled.

Comments are blanked before scanning and preprocessor lines are ignored,
so neither contributes to definition ranges or dependencies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diff3 import LineRange
from .metadata import (
    DefinitionIndicator,
    DefinitionKind,
    MetadataSet,
    RawDependency,
    validate_metadata,
)

_COMPOSITE_KEYWORDS = {"struct", "class", "union", "enum"}

_KEYWORDS = {
    "auto", "bool", "break", "case", "char", "class", "const", "constexpr",
    "continue", "default", "delete", "do", "double", "else", "enum", "extern",
    "false", "final", "float", "for", "friend", "goto", "if", "inline", "int",
    "long", "mutable", "namespace", "new", "noexcept", "nullptr", "operator",
    "override", "private", "protected", "public", "register", "return",
    "short", "signed", "sizeof", "static", "struct", "switch", "template",
    "this", "true", "typedef", "typename", "union", "unsigned", "using",
    "virtual", "void", "volatile", "while",
}

# (from kind, to kind) pairs the extractor may emit.
_EMITTABLE = {
    (DefinitionKind.FUNCTION, DefinitionKind.TYPE),
    (DefinitionKind.FUNCTION, DefinitionKind.GLOBAL),
    (DefinitionKind.FUNCTION, DefinitionKind.FUNCTION),
    (DefinitionKind.GLOBAL, DefinitionKind.TYPE),
    (DefinitionKind.TYPE, DefinitionKind.TYPE),
}


class ExtractionError(ValueError):
    def __init__(self, message: str, file: str, line: int):
        super().__init__(f"{file}:{line}: {message}")
        self.file = file
        self.line = line


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | number | string | punct
    value: str
    line: int


@dataclass
class _ParsedDef:
    name: str  # qualified (Parent::name for members)
    kind: DefinitionKind
    file: str
    start_line: int
    end_line: int
    parent: "_ParsedDef | None"
    token_span: tuple[int, int]  # [start, end) indices into the file's tokens
    excluded_spans: list[tuple[int, int]]


def _strip_comments(text: str, file: str) -> str:
    out = list(text)
    i = 0
    n = len(text)
    line = 1
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
        elif c == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                out[i] = " "
                i += 1
        elif c == "/" and i + 1 < n and text[i + 1] == "*":
            start = line
            out[i] = out[i + 1] = " "
            i += 2
            closed = False
            while i < n:
                if text[i] == "*" and i + 1 < n and text[i + 1] == "/":
                    out[i] = out[i + 1] = " "
                    i += 2
                    closed = True
                    break
                if text[i] == "\n":
                    line += 1
                else:
                    out[i] = " "
                i += 1
            if not closed:
                raise ExtractionError("unterminated block comment", file, start)
        elif c in "\"'":
            quote = c
            start = line
            i += 1
            while True:
                if i >= n or text[i] == "\n":
                    raise ExtractionError("unterminated string literal", file, start)
                if text[i] == "\\":
                    if i + 1 < n and text[i + 1] == "\n":
                        line += 1
                    i += 2
                    continue
                if text[i] == quote:
                    i += 1
                    break
                i += 1
        else:
            i += 1
    return "".join(out)


def _blank_preprocessor_lines(text: str) -> str:
    lines = text.split("\n")
    continued = False
    for idx, ln in enumerate(lines):
        if continued or ln.lstrip().startswith("#"):
            continued = ln.rstrip().endswith("\\")
            lines[idx] = ""
        else:
            continued = False
    return "\n".join(lines)


def _tokenize(text: str, file: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    line = 1
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
        elif c.isspace():
            i += 1
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line))
            i = j
        elif c.isdigit():
            j = i
            while j < n and (text[j].isalnum() or text[j] in "._"):
                j += 1
            tokens.append(_Token("number", text[i:j], line))
            i = j
        elif c in "\"'":
            quote = c
            start = line
            j = i + 1
            while True:
                if j >= n or text[j] == "\n":
                    raise ExtractionError("unterminated string literal", file, start)
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == quote:
                    j += 1
                    break
                j += 1
            tokens.append(_Token("string", text[i:j], line))
            i = j
        else:
            tokens.append(_Token("punct", c, line))
            i += 1
    return tokens


class _FileParser:
    """Single-file statement scanner over the token stream."""

    def __init__(self, file: str, tokens: list[_Token]):
        self.file = file
        self.toks = tokens
        self.defs: list[_ParsedDef] = []

    def tok(self, i: int) -> _Token | None:
        return self.toks[i] if 0 <= i < len(self.toks) else None

    def match_brace(self, open_idx: int) -> int:
        """Index of the '}' matching the '{' at open_idx."""
        depth = 0
        for i in range(open_idx, len(self.toks)):
            v = self.toks[i]
            if v.kind == "punct":
                if v.value == "{":
                    depth += 1
                elif v.value == "}":
                    depth -= 1
                    if depth == 0:
                        return i
        raise ExtractionError("unbalanced braces", self.file,
                              self.toks[open_idx].line)

    def match_paren(self, open_idx: int) -> int:
        depth = 0
        for i in range(open_idx, len(self.toks)):
            v = self.toks[i]
            if v.kind == "punct":
                if v.value == "(":
                    depth += 1
                elif v.value == ")":
                    depth -= 1
                    if depth == 0:
                        return i
        raise ExtractionError("unbalanced parentheses", self.file,
                              self.toks[open_idx].line)

    def skip_statement(self, i: int) -> int:
        """Advance past the ';' ending the statement at i, skipping balanced
        braces and parentheses on the way."""
        while i < len(self.toks):
            t = self.toks[i]
            if t.kind == "punct":
                if t.value == ";":
                    return i + 1
                if t.value == "{":
                    i = self.match_brace(i) + 1
                    continue
                if t.value == "(":
                    i = self.match_paren(i) + 1
                    continue
                if t.value == "}":
                    # stray close: let the caller's brace matching complain
                    return i
            i += 1
        return i

    def parse(self) -> list[_ParsedDef]:
        i = 0
        while i < len(self.toks):
            t = self.toks[i]
            if t.kind == "punct" and t.value == ";":
                i += 1
            elif t.kind == "ident" and t.value in _COMPOSITE_KEYWORDS \
                    and self._composite_ahead(i):
                i = self.parse_composite(i)
            elif t.kind == "ident" and t.value == "typedef":
                i = self.parse_typedef(i)
            elif t.kind == "ident" and t.value in ("extern", "using", "namespace"):
                i = self.skip_statement(i)
            else:
                i = self.parse_plain_statement(i, parent=None, stop_at=len(self.toks))
        return self.defs

    def _composite_ahead(self, i: int) -> bool:
        """True when tokens at i start a composite definition body."""
        nxt = self.tok(i + 1)
        if nxt is None:
            return False
        if nxt.kind == "punct" and nxt.value == "{":
            raise ExtractionError("anonymous composite type is not supported",
                                  self.file, nxt.line)
        after = self.tok(i + 2)
        return (nxt.kind == "ident"
                and after is not None
                and after.kind == "punct" and after.value == "{")

    def parse_composite(self, i: int) -> int:
        kw = self.toks[i]
        name_tok = self.toks[i + 1]
        open_idx = i + 2
        close_idx = self.match_brace(open_idx)
        end_idx = close_idx
        j = close_idx + 1
        while j < len(self.toks):
            t = self.toks[j]
            if t.kind == "punct" and t.value == ";":
                end_idx = j
                break
            if t.kind != "ident" and not (t.kind == "punct" and t.value in "*,&"):
                break
            j += 1
        comp = _ParsedDef(
            name=name_tok.value,
            kind=DefinitionKind.TYPE,
            file=self.file,
            start_line=kw.line,
            end_line=self.toks[end_idx].line,
            parent=None,
            token_span=(i, end_idx + 1),
            excluded_spans=[],
        )
        self.defs.append(comp)
        if kw.value != "enum":
            self.parse_members(open_idx + 1, close_idx, comp)
        return end_idx + 1

    def parse_members(self, i: int, body_end: int, comp: _ParsedDef) -> None:
        while i < body_end:
            t = self.toks[i]
            if t.kind == "punct" and t.value == ";":
                i += 1
                continue
            if t.kind == "ident" and t.value in ("public", "private", "protected"):
                nxt = self.tok(i + 1)
                if nxt is not None and nxt.kind == "punct" and nxt.value == ":":
                    i += 2
                    continue
            i = self.parse_plain_statement(i, parent=comp, stop_at=body_end)

    def parse_plain_statement(self, i: int, parent: _ParsedDef | None,
                              stop_at: int) -> int:
        """Parse one statement: a function definition, a variable, or noise."""
        start = i
        j = i
        saw_param_list = False
        while j < stop_at:
            t = self.toks[j]
            if t.kind == "punct" and t.value == ";":
                if parent is None and not saw_param_list:
                    self.emit_global(start, j)
                return j + 1
            if t.kind == "punct" and t.value == "(":
                prev = self.tok(j - 1)
                close = self.match_paren(j)
                k = self._find_body_or_end(close + 1, stop_at)
                if k is not None and self.toks[k].value == "{":
                    body_close = self.match_brace(k)
                    if prev is not None and prev.kind == "ident" \
                            and prev.value not in _KEYWORDS:
                        self.emit_function(start, j - 1, body_close, parent)
                    end = body_close + 1
                    nxt = self.tok(end)
                    if nxt is not None and nxt.kind == "punct" and nxt.value == ";":
                        end += 1
                    return end
                # prototype or declaration; remember so it is not a global
                saw_param_list = True
                j = close + 1
                continue
            if t.kind == "punct" and t.value == "{":
                # brace initializer or nested aggregate: skip it
                j = self.match_brace(j) + 1
                continue
            if t.kind == "punct" and t.value == "=":
                term = self.skip_statement(j)
                if parent is None:
                    self.emit_global(start, term - 1)
                return term
            j += 1
        return stop_at

    def _find_body_or_end(self, i: int, stop_at: int) -> int | None:
        """After a parameter list: index of the '{' opening a body, scanning
        past an initializer list / qualifiers; None when ';' comes first."""
        j = i
        while j < stop_at:
            t = self.toks[j]
            if t.kind == "punct":
                if t.value == "{":
                    return j
                if t.value == ";":
                    return None
                if t.value == "(":
                    j = self.match_paren(j) + 1
                    continue
                if t.value == "=":
                    return None  # `= default;` / `= 0;`
            j += 1
        return None

    def emit_function(self, start: int, name_idx: int, close_idx: int,
                      parent: _ParsedDef | None) -> None:
        name_tok = self.toks[name_idx]
        qualified = name_tok.value if parent is None \
            else f"{parent.name}::{name_tok.value}"
        span = (start, close_idx + 1)
        d = _ParsedDef(
            name=qualified,
            kind=DefinitionKind.FUNCTION,
            file=self.file,
            start_line=self.toks[start].line,
            end_line=self.toks[close_idx].line,
            parent=parent,
            token_span=span,
            excluded_spans=[],
        )
        self.defs.append(d)
        if parent is not None:
            parent.excluded_spans.append(span)

    def emit_global(self, start: int, term_idx: int) -> None:
        name: _Token | None = None
        j = start
        while j < term_idx:
            t = self.toks[j]
            if t.kind == "punct" and t.value in ("=", "["):
                break
            if t.kind == "punct" and t.value in ("(", "{"):
                break
            if t.kind == "ident" and t.value not in _KEYWORDS:
                name = t
            j += 1
        if name is None:
            return
        self.defs.append(_ParsedDef(
            name=name.value,
            kind=DefinitionKind.GLOBAL,
            file=self.file,
            start_line=self.toks[start].line,
            end_line=self.toks[term_idx].line,
            parent=None,
            token_span=(start, term_idx + 1),
            excluded_spans=[],
        ))

    def parse_typedef(self, i: int) -> int:
        start = i
        term = self.skip_statement(i)
        name: _Token | None = None
        for j in range(term - 2, start, -1):
            t = self.toks[j]
            if t.kind == "ident" and t.value not in _KEYWORDS:
                name = t
                break
            if t.kind == "punct" and t.value in (")", "]"):
                break
        if name is None:
            raise ExtractionError("unnamed typedef", self.file, self.toks[start].line)
        self.defs.append(_ParsedDef(
            name=name.value,
            kind=DefinitionKind.TYPE,
            file=self.file,
            start_line=self.toks[start].line,
            end_line=self.toks[term - 1].line,
            parent=None,
            token_span=(start, term),
            excluded_spans=[],
        ))
        return term


def extract_source(files: list[tuple[str, str]], variant: str = "A") -> MetadataSet:
    """Extract a validated MetadataSet from (path, text) sources.

    Deterministic: definitions are id'd in (file, start_line) order and
    dependencies are emitted sorted.
    """
    parsed: list[tuple[str, list[_ParsedDef], list[_Token]]] = []
    for path, text in sorted(files):
        clean = _blank_preprocessor_lines(_strip_comments(text, path))
        tokens = _tokenize(clean, path)
        parser = _FileParser(path, tokens)
        parsed.append((path, parser.parse(), tokens))

    order: list[tuple[_ParsedDef, list[_Token]]] = []
    for path, defs, tokens in parsed:
        for d in sorted(defs, key=lambda d: (d.start_line, -d.end_line)):
            order.append((d, tokens))
    ids: dict[int, int] = {id(d): idx for idx, (d, _) in enumerate(order)}

    definitions = tuple(
        DefinitionIndicator(
            def_id=idx,
            name=d.name,
            kind=d.kind,
            file=d.file,
            range=LineRange(d.start_line, d.end_line),
            parent=None if d.parent is None else ids[id(d.parent)],
        )
        for idx, (d, _) in enumerate(order)
    )

    symbols: dict[str, list[int]] = {}
    for idx, (d, _) in enumerate(order):
        bare = d.name.rsplit("::", 1)[-1]
        symbols.setdefault(bare, []).append(idx)

    deps: set[tuple[int, int]] = set()
    for idx, (d, tokens) in enumerate(order):
        span_start, span_end = d.token_span
        for ti in range(span_start, span_end):
            if any(lo <= ti < hi for lo, hi in d.excluded_spans):
                continue
            t = tokens[ti]
            if t.kind != "ident" or t.value in _KEYWORDS:
                continue
            for target in symbols.get(t.value, ()):
                if target == idx:
                    continue
                if (d.kind, definitions[target].kind) in _EMITTABLE:
                    deps.add((idx, target))

    dependencies = tuple(RawDependency(a, b) for a, b in sorted(deps))
    return validate_metadata(MetadataSet(variant, definitions, dependencies))
