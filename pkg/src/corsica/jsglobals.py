"""Static scan of a script for globals observable across origins.

A cross-origin <script> include exposes top-level function declarations
and var bindings to the embedding page: existence is testable, literal
values are readable, and a function's toString() returns its exact source
slice (comments included), which we pin with a hash.

The scanner is a lightweight tokenizer, not a full parser. It tracks
nesting so declarations inside closures and IIFEs are invisible, exactly
as they are to a probe. Files it cannot tokenize confidently yield None
and are skipped entirely; a probe would gain nothing from a script whose
syntax errors stop it from executing.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

__all__ = ["ScriptSymbol", "extract_symbols", "canonical_string_literal", "canonical_number"]

_KEYWORDS = frozenset({
    "break", "case", "catch", "class", "const", "continue", "debugger",
    "default", "delete", "do", "else", "export", "extends", "finally",
    "for", "function", "if", "import", "in", "instanceof", "let", "new",
    "return", "super", "switch", "this", "throw", "try", "typeof", "var",
    "void", "while", "with", "yield", "true", "false", "null", "undefined",
})

# after these a '/' must start a regex literal, not division
_REGEX_PRECEDERS = frozenset({
    "(", "[", "{", ",", ";", ":", "?", "=>",
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
    "==", "===", "!=", "!==", "<", ">", "<=", ">=",
    "+", "-", "*", "/", "%", "**", "++", "--",
    "!", "~", "&&", "||", "&", "|", "^", "<<", ">>", ">>>",
})
_REGEX_PRECEDING_KEYWORDS = frozenset({
    "return", "typeof", "case", "in", "of", "new", "delete", "void",
    "instanceof", "do", "else", "yield", "throw",
})

_PUNCT = [
    ">>>=", "===", "!==", "**=", "<<=", ">>=", ">>>", "=>", "==", "!=",
    "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "**", "<<", ">>", "?.", "...",
    "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/",
    "%", "&", "|", "^", "!", "~", "?", ":", "=", ".",
]

_IDENT_START = re.compile(r"[A-Za-z_$]")
_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_NUMBER_RE = re.compile(
    r"0[xX][0-9a-fA-F]+n?|0[oO][0-7]+|0[bB][01]+|"
    r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?n?"
)

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f",
            "v": "\v", "0": "\0", "'": "'", '"': '"', "`": "`", "\\": "\\",
            "\n": ""}


class _TokenizeError(Exception):
    pass


@dataclass(frozen=True)
class _Token:
    type: str  # ident | number | string | template | regex | punct
    value: str
    start: int
    end: int
    line: int


@dataclass(frozen=True)
class ScriptSymbol:
    name: str
    kind: str  # function | variable
    value: str | None = None       # canonical literal, when statically known
    source_hash: str | None = None  # sha256 of the exact declaration slice


def _tokenize(src: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(src)
    line = 1

    def prev_token() -> _Token | None:
        return tokens[-1] if tokens else None

    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if src.startswith("//", i):
            j = src.find("\n", i)
            i = n if j == -1 else j
            continue
        if src.startswith("/*", i):
            j = src.find("*/", i + 2)
            if j == -1:
                raise _TokenizeError("unterminated comment")
            line += src.count("\n", i, j)
            i = j + 2
            continue
        if ch in "'\"":
            j = i + 1
            while j < n:
                if src[j] == "\\":
                    j += 2
                    continue
                if src[j] == ch:
                    break
                if src[j] == "\n":
                    raise _TokenizeError("newline in string")
                j += 1
            if j >= n:
                raise _TokenizeError("unterminated string")
            tokens.append(_Token("string", src[i:j + 1], i, j + 1, line))
            i = j + 1
            continue
        if ch == "`":
            j = i + 1
            depth = 0
            while j < n:
                c = src[j]
                if c == "\\":
                    j += 2
                    continue
                if c == "\n":
                    line += 1
                elif depth == 0 and c == "`":
                    break
                elif c == "$" and j + 1 < n and src[j + 1] == "{":
                    depth += 1
                    j += 1
                elif depth and c == "}":
                    depth -= 1
                j += 1
            if j >= n:
                raise _TokenizeError("unterminated template")
            tokens.append(_Token("template", src[i:j + 1], i, j + 1, line))
            i = j + 1
            continue
        if ch == "/":
            prev = prev_token()
            is_regex = (
                prev is None
                or (prev.type == "punct" and prev.value in _REGEX_PRECEDERS)
                or (prev.type == "ident" and prev.value in _REGEX_PRECEDING_KEYWORDS)
            )
            if is_regex:
                j = i + 1
                in_class = False
                while j < n:
                    c = src[j]
                    if c == "\\":
                        j += 2
                        continue
                    if c == "\n":
                        raise _TokenizeError("newline in regex")
                    if c == "[":
                        in_class = True
                    elif c == "]":
                        in_class = False
                    elif c == "/" and not in_class:
                        break
                    j += 1
                if j >= n:
                    raise _TokenizeError("unterminated regex")
                j += 1
                while j < n and _IDENT_RE.match(src[j]):
                    j += 1
                tokens.append(_Token("regex", src[i:j], i, j, line))
                i = j
                continue
        if _IDENT_START.match(ch):
            m = _IDENT_RE.match(src, i)
            tokens.append(_Token("ident", m.group(0), i, m.end(), line))
            i = m.end()
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            m = _NUMBER_RE.match(src, i)
            if not m:
                raise _TokenizeError(f"bad number at {i}")
            tokens.append(_Token("number", m.group(0), i, m.end(), line))
            i = m.end()
            continue
        for p in _PUNCT:
            if src.startswith(p, i):
                tokens.append(_Token("punct", p, i, i + len(p), line))
                i += len(p)
                break
        else:
            raise _TokenizeError(f"unexpected character {ch!r} at {i}")
    return tokens


def canonical_string_literal(content: str) -> str:
    out = ["'"]
    for c in content:
        if c in ("\\", "'"):
            out.append("\\" + c)
        elif c == "\n":
            out.append("\\n")
        elif c == "\r":
            out.append("\\r")
        elif c == "\t":
            out.append("\\t")
        else:
            out.append(c)
    out.append("'")
    return "".join(out)


def _decode_string_token(raw: str) -> str | None:
    body = raw[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        i += 1
        if i >= len(body):
            return None
        e = body[i]
        if e in _ESCAPES:
            out.append(_ESCAPES[e])
            i += 1
        elif e == "x" and i + 2 < len(body) + 1:
            try:
                out.append(chr(int(body[i + 1:i + 3], 16)))
            except ValueError:
                return None
            i += 3
        elif e == "u":
            if body[i + 1:i + 2] == "{":
                end = body.find("}", i)
                if end == -1:
                    return None
                try:
                    out.append(chr(int(body[i + 2:end], 16)))
                except ValueError:
                    return None
                i = end + 1
            else:
                try:
                    out.append(chr(int(body[i + 1:i + 5], 16)))
                except ValueError:
                    return None
                i += 5
        else:
            out.append(e)
            i += 1
    return "".join(out)


def canonical_number(raw: str) -> str | None:
    if raw.endswith("n"):  # BigInt: not a plain number literal
        return None
    try:
        if re.match(r"^0[xXoObB]", raw):
            value = float(int(raw, 0))
        else:
            value = float(raw)
    except ValueError:
        return None
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _canonical_literal(tok: _Token, negated: bool = False) -> str | None:
    if tok.type == "string" and not negated:
        content = _decode_string_token(tok.value)
        return None if content is None else canonical_string_literal(content)
    if tok.type == "number":
        num = canonical_number(tok.value)
        if num is None:
            return None
        return "-" + num if negated and num != "0" else num
    if tok.type == "ident" and tok.value in ("true", "false") and not negated:
        return tok.value
    return None


class _Scanner:
    """Walks the token stream recording depth-0 declarations."""

    def __init__(self, src: str, tokens: list[_Token]) -> None:
        self.src = src
        self.tokens = tokens
        self.i = 0
        self.depth = 0  # combined (), [], {} nesting
        self.symbols: list[ScriptSymbol] = []
        self.seen: set[str] = set()

    def _bump_depth(self, tok: _Token) -> None:
        if tok.type == "punct":
            if tok.value in "([{":
                self.depth += 1
            elif tok.value in ")]}":
                self.depth -= 1

    def _at_statement_start(self) -> bool:
        if self.i == 0:
            return True
        prev = self.tokens[self.i - 1]
        if prev.type == "punct" and prev.value in (";", "}", ")"):
            # ')' only ends a statement for things like if(..) which we
            # do not recurse into; treat as ambiguous and reject
            return prev.value in (";", "}")
        if prev.type == "punct":
            return False
        if prev.type == "ident" and prev.value in _KEYWORDS and prev.value not in (
            "true", "false", "null", "undefined", "this",
        ):
            return False
        # automatic semicolon insertion: a line break after a complete
        # operand terminates the previous statement
        return prev.line < self.tokens[self.i].line

    def _skip_balanced(self, open_punct: str, close_punct: str) -> bool:
        if self.i >= len(self.tokens):
            return False
        tok = self.tokens[self.i]
        if not (tok.type == "punct" and tok.value == open_punct):
            return False
        level = 0
        while self.i < len(self.tokens):
            tok = self.tokens[self.i]
            if tok.type == "punct":
                if tok.value in "([{":
                    level += 1
                elif tok.value in ")]}":
                    level -= 1
                    if level == 0:
                        self.i += 1
                        return tok.value == close_punct
            self.i += 1
        return False

    def _record(self, symbol: ScriptSymbol) -> None:
        if symbol.name not in self.seen:
            self.seen.add(symbol.name)
            self.symbols.append(symbol)

    def _statement_ended(self, consumed_any: bool) -> bool:
        if self.i >= len(self.tokens):
            return True
        tok = self.tokens[self.i]
        if tok.type == "punct" and tok.value == ";":
            return True
        if not consumed_any:
            return False
        prev = self.tokens[self.i - 1]
        if tok.line > prev.line:
            if prev.type in ("number", "string", "template", "regex") or (
                prev.type == "ident" and prev.value not in _KEYWORDS
            ) or (prev.type == "punct" and prev.value in (")", "]", "}", "++", "--")):
                return tok.type != "punct" or tok.value in ("(", "[", "{", "!", "~", "++", "--")
        return False

    def _skip_expression(self) -> None:
        """Consume tokens until the current statement ends at depth 0."""
        consumed = False
        while self.i < len(self.tokens):
            if self.depth == 0 and self._statement_ended(consumed):
                if (self.tokens[self.i].type == "punct"
                        and self.tokens[self.i].value == ";"):
                    self.i += 1
                return
            if self.depth == 0 and consumed:
                tok = self.tokens[self.i]
                if tok.type == "punct" and tok.value == ",":
                    return
            self._bump_depth(self.tokens[self.i])
            self.i += 1
            consumed = True

    def _parse_function_decl(self) -> None:
        start_tok = self.tokens[self.i]
        self.i += 1
        if self.i >= len(self.tokens):
            raise _TokenizeError("dangling function keyword")
        name_tok = self.tokens[self.i]
        if name_tok.type != "ident":
            raise _TokenizeError("function declaration without a name")
        self.i += 1
        if not self._skip_balanced("(", ")"):
            raise _TokenizeError("unbalanced function parameters")
        if not self._skip_balanced("{", "}"):
            raise _TokenizeError("unbalanced function body")
        end_tok = self.tokens[self.i - 1]
        slice_text = self.src[start_tok.start:end_tok.end]
        digest = hashlib.sha256(slice_text.encode("utf-8")).hexdigest()
        self._record(ScriptSymbol(name_tok.value, "function", source_hash=digest))

    def _parse_var_decl(self) -> None:
        self.i += 1  # past 'var'
        while self.i < len(self.tokens):
            name_tok = self.tokens[self.i]
            if name_tok.type != "ident" or name_tok.value in _KEYWORDS:
                # destructuring or malformed: skip the whole statement
                self._skip_expression()
                return
            self.i += 1
            value: str | None = None
            if (self.i < len(self.tokens)
                    and self.tokens[self.i].type == "punct"
                    and self.tokens[self.i].value == "="):
                self.i += 1
                value = self._parse_initializer()
            self._record(ScriptSymbol(name_tok.value, "variable", value=value))
            if (self.i < len(self.tokens)
                    and self.tokens[self.i].type == "punct"
                    and self.tokens[self.i].value == ","):
                self.i += 1
                continue
            if (self.i < len(self.tokens)
                    and self.tokens[self.i].type == "punct"
                    and self.tokens[self.i].value == ";"):
                self.i += 1
            return

    def _parse_initializer(self) -> str | None:
        """Literal value when the initializer is a single plain literal."""
        if self.i >= len(self.tokens):
            return None
        tok = self.tokens[self.i]
        negated = tok.type == "punct" and tok.value == "-"
        look = self.i + 1 if negated else self.i
        if look < len(self.tokens):
            lit_tok = self.tokens[look]
            after = look + 1
            terminated = (
                after >= len(self.tokens)
                or (self.tokens[after].type == "punct"
                    and self.tokens[after].value in (";", ","))
                or self.tokens[after].line > lit_tok.line
            )
            if terminated:
                value = _canonical_literal(lit_tok, negated)
                if value is not None:
                    self.i = after
                    return value
        self._skip_expression_value()
        return None

    def _skip_expression_value(self) -> None:
        """Consume an initializer expression, stopping at depth-0 ',' or ';'."""
        consumed = False
        while self.i < len(self.tokens):
            tok = self.tokens[self.i]
            if self.depth == 0 and tok.type == "punct" and tok.value in (";", ","):
                return
            if self.depth == 0 and consumed and self._statement_ended(consumed):
                return
            self._bump_depth(tok)
            self.i += 1
            consumed = True

    def _parse_bare_assignment(self) -> None:
        name_tok = self.tokens[self.i]
        self.i += 2  # past name and '='
        value = self._parse_initializer()
        if value is not None:
            self._record(ScriptSymbol(name_tok.value, "variable", value=value))
        if (self.i < len(self.tokens)
                and self.tokens[self.i].type == "punct"
                and self.tokens[self.i].value == ";"):
            self.i += 1

    def run(self) -> list[ScriptSymbol]:
        while self.i < len(self.tokens):
            tok = self.tokens[self.i]
            if self.depth == 0 and tok.type == "ident":
                if tok.value == "function" and self._at_statement_start():
                    self._parse_function_decl()
                    continue
                if tok.value == "var" and self._at_statement_start():
                    self._parse_var_decl()
                    continue
                if (tok.value not in _KEYWORDS
                        and self._at_statement_start()
                        and self.i + 1 < len(self.tokens)
                        and self.tokens[self.i + 1].type == "punct"
                        and self.tokens[self.i + 1].value == "="):
                    self._parse_bare_assignment()
                    continue
            self._bump_depth(tok)
            self.i += 1
        if self.depth != 0:
            raise _TokenizeError("unbalanced brackets")
        return self.symbols


def extract_symbols(data: bytes) -> list[ScriptSymbol] | None:
    """Top-level symbols of a script, or None when it cannot be scanned."""
    try:
        src = data.decode("utf-8", errors="replace")
        tokens = _tokenize(src)
        return _Scanner(src, tokens).run()
    except _TokenizeError:
        return None
    except RecursionError:  # pragma: no cover
        return None
