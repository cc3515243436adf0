"""Text format for algebra definitions.

Grammar (comments run from "#" to end of line):

    file    := "algebra" IDENT "(" [ IDENT { "," IDENT } ] ")" "{" item* "}"
    item    := "family" IDENT "weight" expr ";"
             | "bracket" "[" IDENT IDENT "," IDENT IDENT "]" "=" rhs ";"
    rhs     := expr [ IDENT "(" expr ")" ]
    expr    := term { ("+" | "-") term }
    term    := factor { ("*" | "/") factor }
    factor  := INT | IDENT | "(" expr ")" | ("+" | "-") factor

In a bracket item the two identifiers after each family name the index
variables; the trailing IDENT "(" expr ")" of a rhs is the output family and
its index, which must be exactly the sum of the two index variables.  A rhs
that is just the zero polynomial declares a vanishing bracket.  Division is
legal only by a nonzero constant, so every coefficient stays polynomial.

parse() never raises: it returns a ParseResult whose spec is None when any
error-severity diagnostic was produced.  Family pairs without a rule are
filled in as zero brackets with a warning.  render() emits canonical text
and parse(render(spec)) reproduces spec exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraSpec, BracketRule, IDENT_RE, same_family_rule_is_antisymmetric
from .poly import IndexPolynomial

KEYWORDS = frozenset({"algebra", "family", "weight", "bracket"})
_PUNCT = frozenset("(){}[],;=+-*/")
_MAX_EXPR_DEPTH = 64
_MAX_ERRORS = 100


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    severity: str  # "error" | "warning"
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.severity}[{self.code}]: {self.message}"


@dataclass
class ParseResult:
    spec: AlgebraSpec | None
    diagnostics: list

    @property
    def ok(self) -> bool:
        return self.spec is not None

    def errors(self) -> list:
        return [d for d in self.diagnostics if d.severity == "error"]


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "int" | punctuation literal | "eof"
    text: str
    line: int
    col: int


class _Abort(Exception):
    pass


def _tokenize(source: str, diagnostics: list) -> list:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == "#":
            while i < n and source[i] != "\n":
                i += 1
        elif ch.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            tokens.append(_Token("int", source[start:i], line, col))
            col += i - start
        elif ch.isalpha():
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(_Token("ident", source[start:i], line, col))
            col += i - start
        elif ch in _PUNCT:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
        else:
            if len(diagnostics) < _MAX_ERRORS:
                diagnostics.append(
                    Diagnostic(line, col, "error", "bad-character", f"unexpected character {ch!r}")
                )
            i += 1
            col += 1
    tokens.append(_Token("eof", "", line, col))
    return tokens


@dataclass
class _RawBracket:
    left_tok: _Token
    right_tok: _Token
    var_left: str
    var_right: str
    coeff: IndexPolynomial
    out_tok: _Token | None


class _Parser:
    def __init__(self, source: str):
        self.diagnostics: list = []
        self.tokens = _tokenize(source, self.diagnostics)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, code: str, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        if len(self.diagnostics) >= _MAX_ERRORS:
            raise _Abort()
        self.diagnostics.append(Diagnostic(tok.line, tok.col, "error", code, message))

    def warning(self, code: str, message: str, tok: _Token):
        self.diagnostics.append(Diagnostic(tok.line, tok.col, "warning", code, message))

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.error("syntax", f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}, found end of input")
            raise _Abort()
        return self.advance()

    def expect_keyword(self, word: str) -> _Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.text != word:
            self.error("syntax", f"expected {word!r}, found {tok.text!r}" if tok.text else f"expected {word!r}, found end of input")
            raise _Abort()
        return self.advance()

    def ident(self, what: str) -> _Token:
        tok = self.expect("ident", what)
        if tok.text in KEYWORDS:
            self.error("reserved-word", f"{tok.text!r} is a reserved word", tok)
        return tok

    def sync_to_semicolon(self):
        while self.peek().kind not in (";", "}", "eof"):
            self.advance()
        if self.peek().kind == ";":
            self.advance()

    # expressions

    def parse_expr(self, allowed: frozenset, depth: int = 0) -> IndexPolynomial:
        if depth > _MAX_EXPR_DEPTH:
            self.error("nesting", "expression nesting too deep")
            raise _Abort()
        value = self.parse_term(allowed, depth)
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.parse_term(allowed, depth)
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self, allowed: frozenset, depth: int) -> IndexPolynomial:
        value = self.parse_factor(allowed, depth)
        while self.peek().kind in ("*", "/"):
            op_tok = self.advance()
            rhs = self.parse_factor(allowed, depth)
            if op_tok.kind == "*":
                value = value * rhs
            else:
                if not rhs.is_constant():
                    self.error(
                        "non-polynomial-coefficient",
                        "division is only allowed by a nonzero constant",
                        op_tok,
                    )
                elif rhs.constant_value() == 0:
                    self.error("division-by-zero", "division by zero", op_tok)
                else:
                    value = value / rhs.constant_value()
        return value

    def parse_factor(self, allowed: frozenset, depth: int) -> IndexPolynomial:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return IndexPolynomial.constant(int(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text in KEYWORDS:
                self.error("reserved-word", f"{tok.text!r} is a reserved word", tok)
                return IndexPolynomial()
            if tok.text not in allowed:
                self.error("unknown-variable", f"unknown variable {tok.text!r}", tok)
                return IndexPolynomial()
            return IndexPolynomial.variable(tok.text)
        if tok.kind == "(":
            self.advance()
            value = self.parse_expr(allowed, depth + 1)
            self.expect(")", "')'")
            return value
        if tok.kind in ("+", "-"):
            self.advance()
            value = self.parse_factor(allowed, depth + 1)
            return value if tok.kind == "+" else -value
        self.error("syntax", f"expected an expression, found {tok.text!r}" if tok.text else "expected an expression, found end of input")
        raise _Abort()

    # items

    def parse_algebra(self) -> AlgebraSpec | None:
        name_tok = None
        params: list = []
        families: list = []
        family_toks: dict = {}
        offsets: dict = {}
        brackets: list = []
        try:
            self.expect_keyword("algebra")
            name_tok = self.ident("an algebra name")
            self.expect("(", "'('")
            if self.peek().kind != ")":
                while True:
                    ptok = self.ident("a parameter name")
                    if ptok.text in params:
                        self.error("duplicate-parameter", f"duplicate parameter {ptok.text!r}", ptok)
                    else:
                        params.append(ptok.text)
                    if self.peek().kind != ",":
                        break
                    self.advance()
            self.expect(")", "')'")
            self.expect("{", "'{'")
            while self.peek().kind not in ("}", "eof"):
                tok = self.peek()
                if tok.kind == "ident" and tok.text == "family":
                    try:
                        self.parse_family(params, families, family_toks, offsets)
                    except _Abort:
                        self.sync_to_semicolon()
                elif tok.kind == "ident" and tok.text == "bracket":
                    try:
                        item = self.parse_bracket(params)
                        if item is not None:
                            brackets.append(item)
                    except _Abort:
                        self.sync_to_semicolon()
                else:
                    self.error("syntax", f"expected 'family' or 'bracket', found {tok.text!r}")
                    raise _Abort()
            self.expect("}", "'}'")
            if self.peek().kind != "eof":
                self.error("syntax", f"unexpected trailing input {self.peek().text!r}")
        except _Abort:
            return None

        if any(d.severity == "error" for d in self.diagnostics):
            return None
        return self.assemble(name_tok, params, families, family_toks, offsets, brackets)

    def parse_family(self, params, families, family_toks, offsets):
        self.expect_keyword("family")
        name_tok = self.ident("a family name")
        name = name_tok.text
        if name in families:
            self.error("duplicate-family", f"duplicate family {name!r}", name_tok)
        elif name in params:
            self.error("name-collision", f"family {name!r} collides with a parameter", name_tok)
        else:
            families.append(name)
            family_toks[name] = name_tok
        self.expect_keyword("weight")
        offsets[name] = self.parse_expr(frozenset(params))
        self.expect(";", "';'")

    def parse_bracket(self, params) -> _RawBracket | None:
        self.expect_keyword("bracket")
        self.expect("[", "'['")
        left_tok = self.ident("a family name")
        var_left_tok = self.ident("an index variable")
        self.expect(",", "','")
        right_tok = self.ident("a family name")
        var_right_tok = self.ident("an index variable")
        self.expect("]", "']'")
        self.expect("=", "'='")
        var_left, var_right = var_left_tok.text, var_right_tok.text
        if var_left == var_right:
            self.error("duplicate-index-variable", f"index variable {var_right!r} is repeated", var_right_tok)
        for vtok in (var_left_tok, var_right_tok):
            if vtok.text in params:
                self.error("index-shadows-parameter", f"index variable {vtok.text!r} collides with a parameter", vtok)
        index_vars = frozenset({var_left, var_right})
        allowed = index_vars | frozenset(params)
        coeff = self.parse_expr(allowed)
        out_tok = None
        if self.peek().kind == "ident":
            out_tok = self.ident("an output family")
            paren = self.expect("(", "'('")
            index_poly = self.parse_expr(index_vars)
            self.expect(")", "')'")
            expected = IndexPolynomial.variable(var_left) + IndexPolynomial.variable(var_right)
            if index_poly != expected:
                self.error(
                    "non-additive-output-index",
                    f"output index must be {var_left} + {var_right}",
                    paren,
                )
        elif not coeff.is_zero():
            self.error(
                "missing-output-family",
                "a nonzero bracket needs an output family",
                self.peek(),
            )
        self.expect(";", "';'")
        return _RawBracket(left_tok, right_tok, var_left, var_right, coeff, out_tok)

    def assemble(self, name_tok, params, families, family_toks, offsets, brackets) -> AlgebraSpec | None:
        positions = {fam: i for i, fam in enumerate(families)}
        rules: dict = {}
        for raw in brackets:
            named = [raw.left_tok, raw.right_tok] + ([raw.out_tok] if raw.out_tok else [])
            bad = False
            for tok in named:
                if tok.text not in positions:
                    self.error("undeclared-family", f"undeclared family {tok.text!r}", tok)
                    bad = True
            if bad:
                continue
            left, right = raw.left_tok.text, raw.right_tok.text
            if positions[left] > positions[right]:
                self.error(
                    "reversed-family-pair",
                    f"bracket [{left}, {right}] must be declared with {right!r} first "
                    "(family declaration order)",
                    raw.left_tok,
                )
                continue
            key = (left, right)
            if key in rules:
                self.error("duplicate-bracket", f"duplicate bracket rule for [{left}, {right}]", raw.left_tok)
                continue
            out_family = raw.out_tok.text if raw.out_tok and not raw.coeff.is_zero() else None
            rule = BracketRule(left, right, raw.var_left, raw.var_right, raw.coeff, out_family)
            if left == right and not rule.is_zero() and not same_family_rule_is_antisymmetric(rule):
                self.error(
                    "non-antisymmetric",
                    f"same-family bracket [{left}, {left}] needs a coefficient "
                    "antisymmetric in its index variables",
                    raw.left_tok,
                )
                continue
            rules[key] = rule
        for i, fam_a in enumerate(families):
            for fam_b in families[i:]:
                if (fam_a, fam_b) not in rules:
                    self.warning(
                        "missing-bracket-default",
                        f"no bracket rule for [{fam_a}, {fam_b}]; defaulting to zero",
                        name_tok,
                    )
        if any(d.severity == "error" for d in self.diagnostics):
            return None
        try:
            return AlgebraSpec(name_tok.text, params, families, offsets, rules)
        except ValueError as exc:  # pre-checked above; keep the no-raise contract
            self.error("invalid-spec", str(exc), name_tok)
            return None


def parse(source: str) -> ParseResult:
    if not isinstance(source, str):
        return ParseResult(
            None, [Diagnostic(1, 1, "error", "bad-input", "source must be a string")]
        )
    parser = _Parser(source)
    try:
        spec = parser.parse_algebra()
    except _Abort:
        spec = None
    if spec is not None and any(d.severity == "error" for d in parser.diagnostics):
        spec = None
    if spec is None and not any(d.severity == "error" for d in parser.diagnostics):
        parser.diagnostics.append(Diagnostic(1, 1, "error", "syntax", "no algebra definition found"))
    return ParseResult(spec, parser.diagnostics)


def parse_polynomial(text: str, variables: Sequence[str]) -> IndexPolynomial:
    """Parse a bare expression over the given variables; raises ValueError."""
    parser = _Parser(text)
    try:
        value = parser.parse_expr(frozenset(variables))
        if parser.peek().kind != "eof":
            parser.error("syntax", f"unexpected trailing input {parser.peek().text!r}")
    except _Abort:
        value = None
    errors = [d for d in parser.diagnostics if d.severity == "error"]
    if errors:
        raise ValueError(f"bad polynomial {text!r}: {errors[0]}")
    return value


def _coeff_text(poly: IndexPolynomial, var_order) -> str:
    text = poly.to_text(var_order)
    if len(poly.term_items()) > 1:
        return f"({text})"
    return text


def render(spec: AlgebraSpec) -> str:
    """Canonical source text; parse(render(spec)).spec == spec."""
    lines = [f"algebra {spec.name}({', '.join(spec.parameters)}) {{"]
    for fam in spec.families:
        lines.append(f"    family {fam} weight {spec.weight_offsets[fam].to_text(spec.parameters)};")
    for (fam_a, fam_b), rule in spec.rules.items():
        head = f"    bracket [{fam_a} {rule.var_left}, {fam_b} {rule.var_right}]"
        if rule.is_zero():
            lines.append(f"{head} = 0;")
        else:
            order = (rule.var_left, rule.var_right) + spec.parameters
            coeff = _coeff_text(rule.coeff, order)
            lines.append(f"{head} = {coeff} {rule.out_family}({rule.var_left} + {rule.var_right});")
    lines.append("}")
    return "\n".join(lines) + "\n"
