"""Mini-language for specifying functions in scenario configs.

Grammar (recursive descent, 1-based source positions):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?            # right-associative
    atom    := number | identifier | identifier '(' args ')' | '(' expr ')'

Variables are context-bound: angular expressions see x, y, z (a point on the
unit sphere), radial expressions see r, sinogram expressions see t.  Built-in
functions: exp, erf, abs, min, max, legendre(k, u), gauss(width) (a unit-peak
Gaussian of the context's domain variable), bump(a, b) (a smooth bump of the
domain variable, supported on [a, b], peak 1).  Catalog entries are bound by
name with hyphens written as underscores (gauss_r2, erf_type, exp_ell,
cauchy_ell, gamma_q(q)) and evaluate their radial closed forms.

Angular expressions are additionally checked for evenness by antipodal
comparison at 64 deterministic sample points (tolerance 1e-10).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, eval_legendre

from .errors import ArityError, ExprSyntaxError, InputInvalid, UnknownIdentifier

__all__ = [
    "ExprAst", "Num", "Var", "Unary", "BinOp", "Call",
    "parse_expr", "pretty_print", "evaluate",
    "angular_context", "radial_context", "sinogram_context",
    "check_angular_even",
]


# ----------------------------------------------------------------------------
# AST
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ExprAst:
    pos: int                                   # 1-based source position


@dataclass(frozen=True)
class Num(ExprAst):
    value: float


@dataclass(frozen=True)
class Var(ExprAst):
    name: str


@dataclass(frozen=True)
class Unary(ExprAst):
    op: str                                    # '-'
    operand: ExprAst


@dataclass(frozen=True)
class BinOp(ExprAst):
    op: str                                    # '+', '-', '*', '/', '^'
    left: ExprAst
    right: ExprAst


@dataclass(frozen=True)
class Call(ExprAst):
    func: str
    args: tuple


# ----------------------------------------------------------------------------
# Tokenizer
# ----------------------------------------------------------------------------

_OPS = set("+-*/^(),")


@dataclass(frozen=True)
class _Token:
    kind: str                                  # "num" | "ident" | "op" | "end"
    text: str
    pos: int                                   # 1-based


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        pos = i + 1
        if c in _OPS:
            tokens.append(_Token("op", c, pos))
            i += 1
        elif c.isdigit() or c == ".":
            j = i
            while j < n and (src[j].isdigit() or src[j] == "."):
                j += 1
            if j < n and src[j] in "eE" and (
                    j + 1 < n and (src[j + 1].isdigit()
                                   or (src[j + 1] in "+-" and j + 2 < n
                                       and src[j + 2].isdigit()))):
                j += 2
                while j < n and src[j].isdigit():
                    j += 1
            text = src[i:j]
            try:
                float(text)
            except ValueError:
                raise ExprSyntaxError(f"malformed number {text!r}", pos)
            tokens.append(_Token("num", text, pos))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(_Token("ident", src[i:j], pos))
            i = j
        else:
            raise ExprSyntaxError(f"unexpected character {c!r}", pos)
    tokens.append(_Token("end", "", n + 1))
    return tokens


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def _fail_pos(self, t: _Token) -> int:
        # at end of input, point at the last real token (e.g. the unclosed
        # parenthesis) rather than one past the end
        if t.kind == "end" and self.i > 0:
            return self.tokens[self.i - 1].pos
        return t.pos

    def eat(self, text: str) -> _Token:
        t = self.cur
        if t.kind != "op" or t.text != text:
            found = repr(t.text) if t.text else "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found}",
                                  self._fail_pos(t))
        self.i += 1
        return t

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.cur.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.cur.text!r}", self.cur.pos)
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.cur
            self.i += 1
            node = BinOp(op.pos, op.text, node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.unary()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.cur
            self.i += 1
            node = BinOp(op.pos, op.text, node, self.unary())
        return node

    def unary(self) -> ExprAst:
        if self.cur.kind == "op" and self.cur.text == "-":
            op = self.cur
            self.i += 1
            return Unary(op.pos, "-", self.unary())
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if self.cur.kind == "op" and self.cur.text == "^":
            op = self.cur
            self.i += 1
            return BinOp(op.pos, "^", base, self.unary())  # right-assoc
        return base

    def atom(self) -> ExprAst:
        t = self.cur
        if t.kind == "num":
            self.i += 1
            return Num(t.pos, float(t.text))
        if t.kind == "ident":
            self.i += 1
            if self.cur.kind == "op" and self.cur.text == "(":
                self.eat("(")
                args = [self.expr()]
                while self.cur.kind == "op" and self.cur.text == ",":
                    self.i += 1
                    args.append(self.expr())
                self.eat(")")
                return Call(t.pos, t.text, tuple(args))
            return Var(t.pos, t.text)
        if t.kind == "op" and t.text == "(":
            self.eat("(")
            node = self.expr()
            self.eat(")")
            return node
        found = repr(t.text) if t.text else "end of input"
        raise ExprSyntaxError(f"expected a value, found {found}",
                              self._fail_pos(t))


def parse_expr(src: str) -> ExprAst:
    """Parse source text to a deterministic AST; errors carry 1-based positions."""
    return _Parser(_tokenize(src)).parse()


# ----------------------------------------------------------------------------
# Pretty printer (round-trips: parse(pretty_print(ast)) == ast)
# ----------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _pp(node: ExprAst, parent_prec: int, right_side: bool) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return node.func + "(" + ", ".join(
            _pp(a, 0, False) for a in node.args) + ")"
    if isinstance(node, Unary):
        s = "-" + _pp(node.operand, _PREC["neg"], False)
        return f"({s})" if parent_prec > _PREC["neg"] or (
            parent_prec == _PREC["neg"] and right_side) else s
    assert isinstance(node, BinOp)
    prec = _PREC[node.op]
    if node.op == "^":                          # right-associative
        s = _pp(node.left, prec + 1, False) + " ^ " \
            + _pp(node.right, prec, False)
    else:
        s = _pp(node.left, prec, False) + f" {node.op} " \
            + _pp(node.right, prec + 1, True)
    return f"({s})" if parent_prec > prec or (
        parent_prec == prec and right_side) else s


def pretty_print(ast: ExprAst) -> str:
    return _pp(ast, 0, False)


# ----------------------------------------------------------------------------
# Evaluation contexts
# ----------------------------------------------------------------------------

def _catalog_radial(name: str):
    from .radon3d import catalog_entry

    entry = catalog_entry(name)
    profile, ang = entry.f.terms[0]
    a = float(ang.values[0])

    def ev(r):
        return profile(np.abs(np.asarray(r, dtype=float))) * a

    return ev


_CATALOG_UNDERSCORE = {"gauss_r2": "gauss-r2", "erf_type": "erf-type",
                       "exp_ell": "exp-ell", "cauchy_ell": "cauchy-ell"}


@dataclass
class EvalContext:
    variables: dict                   # name -> array
    domain_var: str                   # variable gauss/bump act on


def angular_context(x, y, z) -> EvalContext:
    return EvalContext({"x": np.asarray(x, float), "y": np.asarray(y, float),
                        "z": np.asarray(z, float)}, domain_var="z")


def radial_context(r) -> EvalContext:
    return EvalContext({"r": np.asarray(r, float)}, domain_var="r")


def sinogram_context(t) -> EvalContext:
    return EvalContext({"t": np.asarray(t, float)}, domain_var="t")


def _const_value(node: ExprAst) -> float:
    """Fold a constant sub-expression (for function parameters like degrees)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Unary):
        return -_const_value(node.operand)
    if isinstance(node, BinOp):
        a, b = _const_value(node.left), _const_value(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        return a ** b
    raise ExprSyntaxError("expected a constant expression", node.pos)


def _require_arity(node: Call, n: int) -> None:
    if len(node.args) != n:
        raise ArityError(
            f"{node.func} takes {n} argument{'s' if n != 1 else ''}, "
            f"got {len(node.args)}", node.pos)


def evaluate(ast: ExprAst, ctx: EvalContext) -> np.ndarray:
    """Vectorized evaluation over the context's sample arrays."""
    if isinstance(ast, Num):
        return np.full_like(next(iter(ctx.variables.values()), np.zeros(1)),
                            ast.value, dtype=float) \
            if ctx.variables else np.array(ast.value)
    if isinstance(ast, Var):
        if ast.name == "pi":
            some = next(iter(ctx.variables.values()))
            return np.full_like(some, math.pi, dtype=float)
        if ast.name not in ctx.variables:
            cat = _CATALOG_UNDERSCORE.get(ast.name)
            if cat is not None:
                if ctx.domain_var != "r":
                    raise InputInvalid(
                        f"catalog entry {cat!r} is a radial profile; it is "
                        "only available in radial expressions")
                return _catalog_radial(cat)(ctx.variables["r"])
            raise UnknownIdentifier(
                f"unknown variable {ast.name!r} (available: "
                f"{', '.join(sorted(ctx.variables))})", ast.pos)
        return ctx.variables[ast.name].astype(float)
    if isinstance(ast, Unary):
        return -evaluate(ast.operand, ctx)
    if isinstance(ast, BinOp):
        a = evaluate(ast.left, ctx)
        b = evaluate(ast.right, ctx)
        if ast.op == "+":
            return a + b
        if ast.op == "-":
            return a - b
        if ast.op == "*":
            return a * b
        if ast.op == "/":
            return a / b
        with np.errstate(invalid="ignore"):
            return np.power(a, b)
    assert isinstance(ast, Call)
    name = ast.func
    if name == "exp":
        _require_arity(ast, 1)
        return np.exp(evaluate(ast.args[0], ctx))
    if name == "erf":
        _require_arity(ast, 1)
        return erf(evaluate(ast.args[0], ctx))
    if name == "abs":
        _require_arity(ast, 1)
        return np.abs(evaluate(ast.args[0], ctx))
    if name == "min":
        _require_arity(ast, 2)
        return np.minimum(evaluate(ast.args[0], ctx),
                          evaluate(ast.args[1], ctx))
    if name == "max":
        _require_arity(ast, 2)
        return np.maximum(evaluate(ast.args[0], ctx),
                          evaluate(ast.args[1], ctx))
    if name == "legendre":
        _require_arity(ast, 2)
        k = _const_value(ast.args[0])
        if k != int(k) or k < 0:
            raise InputInvalid(f"legendre degree must be a non-negative "
                               f"integer, got {k}")
        return eval_legendre(int(k), evaluate(ast.args[1], ctx))
    if name == "gauss":
        _require_arity(ast, 1)
        width = _const_value(ast.args[0])
        if width <= 0:
            raise InputInvalid(f"gauss width must be positive, got {width}")
        v = ctx.variables[ctx.domain_var]
        return np.exp(-(v / width) ** 2)
    if name == "bump":
        _require_arity(ast, 2)
        a = _const_value(ast.args[0])
        b = _const_value(ast.args[1])
        if not b > a:
            raise InputInvalid(f"bump needs a < b, got [{a}, {b}]")
        v = ctx.variables[ctx.domain_var]
        u = (2.0 * v - a - b) / (b - a)
        out = np.zeros_like(v, dtype=float)
        inside = np.abs(u) < 1.0
        with np.errstate(divide="ignore", over="ignore"):
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
        return out
    if name == "gamma_q":
        _require_arity(ast, 1)
        q = _const_value(ast.args[0])
        if ctx.domain_var != "r":
            raise InputInvalid("catalog entry 'gamma-q' is a radial profile; "
                               "it is only available in radial expressions")
        return _catalog_radial(f"gamma-q({q})")(ctx.variables["r"])
    raise UnknownIdentifier(f"unknown function {name!r}", ast.pos)


def check_angular_even(ast: ExprAst, tol: float = 1e-10,
                       n_samples: int = 64) -> None:
    """Reject angular expressions without antipodal symmetry, by sampling."""
    rng = np.random.default_rng(20240317)
    v = rng.standard_normal((n_samples, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    plus = evaluate(ast, angular_context(v[:, 0], v[:, 1], v[:, 2]))
    minus = evaluate(ast, angular_context(-v[:, 0], -v[:, 1], -v[:, 2]))
    resid = float(np.max(np.abs(plus - minus)))
    if resid > tol * max(float(np.max(np.abs(plus))), 1.0):
        raise InputInvalid(
            f"angular expression is not even: antipodal residual {resid:.3e} "
            f"exceeds {tol:.0e}")
