"""Small expression language for hyperfunction definitions.

Expressions use Python syntax restricted to a whitelist; ``^`` means power.
Hyperfunction builtins::

    dirac(a[, weight])            point mass
    embed(f_of_t, a, b[, weight]) Cauchy embedding of a density in t
    heaviside(a[, side])          indicator of [a, inf) or (-inf, a]
    shift(h, s)                   translation
    dconv(h1, h2)                 contour convolution
    Pd(h, c0, c1, ...)            P(-i d/dz) h with P(x) = c0 + c1 x + ...
    mul(h, c0, c1, ...)           P(z) h

Hyperfunctions can be added, subtracted and scaled by numbers, and other
named objects may be referenced.  Density and test-function expressions use
the variable ``t`` (or ``w``), numbers (``1j`` for the imaginary unit), the
constants ``pi``, ``e`` and the functions ``exp, sin, cos, log, sqrt``.
Weights may be nested lists (vectors or matrices).
"""

from __future__ import annotations

import ast
import io
import operator
import tokenize

import numpy as np

from . import hyperfn as hf
from .opcalc import apply_P_deriv, convolve_contour, multiply_entire


class ExprError(ValueError):
    """Diagnostic for an invalid expression; ``col`` is the 0-based column."""

    def __init__(self, message, col=None):
        super().__init__(message if col is None else f"{message} (column {col + 1})")
        self.col = col


_FUNCS = {"exp": np.exp, "sin": np.sin, "cos": np.cos, "log": np.log, "sqrt": np.sqrt}
_CONSTS = {"pi": np.pi, "e": np.e}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
           ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}
HYPER_BUILTINS = {"dirac": (1, 2), "embed": (3, 4), "heaviside": (1, 2), "shift": (2, 2), "dconv": (2, 2),
                  "Pd": (2, None), "mul": (2, None)}


def _caret_to_pow(src: str) -> str:
    """Rewrite ``^`` as ``**`` so that it binds like a power (``-w^2 == -(w^2)``)."""
    try:
        toks = list(tokenize.generate_tokens(io.StringIO(src).readline))
    except (tokenize.TokenError, IndentationError):
        return src
    out = [(t.type, "**" if (t.type == tokenize.OP and t.string == "^") else t.string) for t in toks]
    return tokenize.untokenize(out).strip()


def parse_expr(src: str) -> ast.expr:
    try:
        tree = ast.parse(_caret_to_pow(src.strip()), mode="eval")
    except SyntaxError as e:
        raise ExprError(f"syntax error: {e.msg}", (e.offset or 1) - 1) from None
    return tree.body


def normalize(src: str) -> str:
    """Canonical source text (round-trips through :func:`parse_expr`)."""
    return ast.unparse(parse_expr(src))


# ---------------------------------------------------------------- scalar expressions

def compile_scalar(node, variables=("t",)):
    """Vectorized function of one variable from a scalar expression AST."""
    if isinstance(node, str):
        node = parse_expr(node)
    _check_scalar(node, variables)

    def f(x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = _eval_scalar(node, {v: x for v in variables})
        return np.broadcast_to(np.asarray(out, dtype=complex), np.shape(x))

    return f


def _check_scalar(node, variables):
    for sub in ast.walk(node):
        if isinstance(sub, ast.Call):
            if not isinstance(sub.func, ast.Name) or sub.func.id not in _FUNCS:
                name = getattr(sub.func, "id", "?")
                raise ExprError(f"unknown function {name!r} in scalar expression", sub.col_offset)
            if len(sub.args) != 1 or sub.keywords:
                raise ExprError(f"{sub.func.id} takes exactly one argument", sub.col_offset)
        elif isinstance(sub, ast.Name):
            if sub.id not in variables and sub.id not in _CONSTS and sub.id not in _FUNCS:
                raise ExprError(f"unknown name {sub.id!r}", sub.col_offset)
        elif isinstance(sub, ast.BinOp):
            if type(sub.op) not in _BINOPS:
                raise ExprError("unsupported operator", sub.col_offset)
        elif isinstance(sub, ast.UnaryOp):
            if type(sub.op) not in _UNOPS:
                raise ExprError("unsupported unary operator", sub.col_offset)
        elif isinstance(sub, ast.Constant):
            if not isinstance(sub.value, (int, float, complex)) or isinstance(sub.value, bool):
                raise ExprError("only numeric literals are allowed", sub.col_offset)
        elif not isinstance(sub, (ast.expr_context, ast.operator, ast.unaryop)):
            raise ExprError(f"unsupported syntax {type(sub).__name__}", getattr(sub, "col_offset", None))


def _eval_scalar(node, env):
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        return _CONSTS[node.id]
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval_scalar(node.left, env), _eval_scalar(node.right, env))
    if isinstance(node, ast.UnaryOp):
        return _UNOPS[type(node.op)](_eval_scalar(node.operand, env))
    if isinstance(node, ast.Call):
        return _FUNCS[node.func.id](np.asarray(_eval_scalar(node.args[0], env), dtype=complex))
    raise ExprError(f"unsupported syntax {type(node).__name__}", getattr(node, "col_offset", None))


def constant_value(node):
    """Evaluate a constant numeric expression or nested list (weights)."""
    if isinstance(node, (ast.List, ast.Tuple)):
        return np.asarray([constant_value(e) for e in node.elts], dtype=complex)
    _check_scalar(node, ())
    return complex(_eval_scalar(node, {}))


def _real(node, what):
    v = constant_value(node)
    if np.ndim(v) or abs(complex(v).imag) > 0:
        raise ExprError(f"{what} must be a real number", node.col_offset)
    return float(complex(v).real)


# ---------------------------------------------------------------- hyperfunction expressions

def build_hyperfunction(src, objects=None, name=""):
    """Evaluate a hyperfunction expression.

    Parameters
    ----------
    src : str or ast.expr
    objects : dict, optional
        Already built hyperfunctions that may be referenced by name.
    """
    node = parse_expr(src) if isinstance(src, str) else src
    h = _build(node, objects or {})
    if not isinstance(h, hf.Hyperfunction):
        raise ExprError("expression does not define a hyperfunction", getattr(node, "col_offset", 0))
    if name:
        object.__setattr__(h, "name", name)
    return h


def references(src) -> set:
    node = parse_expr(src) if isinstance(src, str) else src
    called = {id(n.func) for n in ast.walk(node) if isinstance(n, ast.Call)}
    names = {n.id for n in ast.walk(node) if isinstance(n, ast.Name) and id(n) not in called}
    return names - set(_CONSTS) - {"t", "w"}


def _is_hyper(node, objects):
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id not in _FUNCS:
        return True
    if isinstance(node, ast.Name) and node.id in objects:
        return True
    if isinstance(node, ast.BinOp):
        return _is_hyper(node.left, objects) or _is_hyper(node.right, objects)
    if isinstance(node, ast.UnaryOp):
        return _is_hyper(node.operand, objects)
    return False


def _build(node, objects):
    if isinstance(node, ast.Name):
        if node.id in objects:
            return objects[node.id]
        raise ExprError(f"undefined object {node.id!r}", node.col_offset)
    if isinstance(node, ast.UnaryOp) and _is_hyper(node.operand, objects):
        h = _build(node.operand, objects)
        return hf.scale(h, -1.0) if isinstance(node.op, ast.USub) else h
    if isinstance(node, ast.BinOp) and _is_hyper(node, objects):
        lh, rh = _is_hyper(node.left, objects), _is_hyper(node.right, objects)
        if isinstance(node.op, (ast.Add, ast.Sub)):
            if not (lh and rh):
                raise ExprError("cannot add a number to a hyperfunction", node.col_offset)
            a, b = _build(node.left, objects), _build(node.right, objects)
            return hf.add(a, b) if isinstance(node.op, ast.Add) else hf.add(a, hf.scale(b, -1.0))
        if isinstance(node.op, ast.Mult) and lh != rh:
            h = _build(node.left if lh else node.right, objects)
            return hf.scale(h, constant_value(node.right if lh else node.left))
        if isinstance(node.op, ast.Div) and lh and not rh:
            return hf.scale(_build(node.left, objects), 1.0 / constant_value(node.right))
        raise ExprError("unsupported operation on hyperfunctions", node.col_offset)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in HYPER_BUILTINS:
        return _call(node, objects)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        raise ExprError(f"unknown builtin {node.func.id!r}", node.col_offset)
    raise ExprError("expected a hyperfunction expression", getattr(node, "col_offset", None))


def _call(node, objects):
    fn = node.func.id
    lo, hi = HYPER_BUILTINS[fn]
    args = node.args
    if node.keywords:
        raise ExprError(f"{fn} does not take keyword arguments", node.col_offset)
    if len(args) < lo or (hi is not None and len(args) > hi):
        want = f"{lo}" if lo == hi else (f"{lo}-{hi}" if hi else f"at least {lo}")
        raise ExprError(f"{fn} takes {want} arguments, got {len(args)}", node.col_offset)
    if fn == "dirac":
        w = constant_value(args[1]) if len(args) > 1 else 1.0
        return hf.dirac(_real(args[0], "dirac location"), w)
    if fn == "embed":
        a, b = _real(args[1], "embed endpoint"), _real(args[2], "embed endpoint")
        if not a <= b:
            raise ExprError("embed needs a <= b", node.col_offset)
        f = compile_scalar(args[0], ("t",))
        probe = f(np.linspace(a, b, 257))
        if not np.all(np.isfinite(probe)):
            raise ExprError("density is singular on [a, b] (division by zero or log of zero)", args[0].col_offset)
        w = constant_value(args[3]) if len(args) > 3 else 1.0
        return hf.cauchy_embed(f, a, b, w)
    if fn == "heaviside":
        side = "right"
        if len(args) > 1:
            if not (isinstance(args[1], ast.Constant) and args[1].value in ("right", "left")):
                raise ExprError("heaviside side must be 'right' or 'left'", args[1].col_offset)
            side = args[1].value
        return hf.heaviside(_real(args[0], "heaviside start"), side=side)
    if fn == "shift":
        return hf.shift(_build(args[0], objects), _real(args[1], "shift"))
    if fn == "dconv":
        return convolve_contour(_build(args[0], objects), _build(args[1], objects))
    coeffs = [constant_value(a) for a in args[1:]]
    h = _build(args[0], objects)
    if fn == "Pd":
        return apply_P_deriv(h, coeffs)
    return multiply_entire(h, coeffs)
