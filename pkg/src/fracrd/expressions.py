"""Safe evaluator for initial-condition expressions.

Accepted grammar: variables ``x`` and ``y``, real constants, the operators
``+ - * / ^`` (``^`` means power; ``**`` is accepted too), unary minus, and
the functions ``sin``, ``cos``, ``exp``, ``abs`` (one argument) and ``max``
(two arguments).  Expressions are parsed to an AST, validated node by node
and evaluated with numpy over the grid coordinate mesh, so anything outside
the grammar is rejected rather than executed.
"""

from __future__ import annotations

import ast

import numpy as np


class ExpressionError(ValueError):
    """Raised when an initial-condition expression is malformed or unsafe."""


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARY = (ast.USub, ast.UAdd)
_FUNCTIONS = {
    "sin": (np.sin, 1),
    "cos": (np.cos, 1),
    "exp": (np.exp, 1),
    "abs": (np.abs, 1),
    "max": (np.maximum, 2),
}
# Typographic variants that show up when expressions are copied from documents.
_NORMALIZE = {"−": "-", "×": "*", "⋅": "*"}


def _validate(node: ast.AST, variables: set[str]) -> None:
    if isinstance(node, ast.Expression):
        _validate(node.body, variables)
    elif isinstance(node, ast.BinOp):
        if not isinstance(node.op, _ALLOWED_BINOPS):
            raise ExpressionError(
                f"operator {type(node.op).__name__} is not allowed"
            )
        _validate(node.left, variables)
        _validate(node.right, variables)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, _ALLOWED_UNARY):
            raise ExpressionError(
                f"unary operator {type(node.op).__name__} is not allowed"
            )
        _validate(node.operand, variables)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ExpressionError("only sin, cos, exp, abs and max may be called")
        _, arity = _FUNCTIONS[node.func.id]
        if len(node.args) != arity or node.keywords:
            raise ExpressionError(
                f"{node.func.id} takes exactly {arity} positional argument(s)"
            )
        for arg in node.args:
            _validate(arg, variables)
    elif isinstance(node, ast.Name):
        if node.id not in variables:
            raise ExpressionError(f"unknown variable '{node.id}'")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ExpressionError(f"constant {node.value!r} is not a real number")
    else:
        raise ExpressionError(f"syntax element {type(node).__name__} is not allowed")


def compile_expression(text: str, dim: int):
    """Compile an expression of ``x`` (and ``y`` in 2-D) to a mesh evaluator.

    Returns a callable taking the coordinate mesh arrays and producing a
    float array of the mesh shape.
    """
    if dim not in (1, 2):
        raise ExpressionError(f"dim must be 1 or 2, got {dim}")
    variables = {"x"} if dim == 1 else {"x", "y"}
    source = text
    for bad, good in _NORMALIZE.items():
        source = source.replace(bad, good)
    source = source.replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as err:
        raise ExpressionError(
            f"could not parse expression {text!r}: {err.msg} (col {err.offset})"
        ) from err
    _validate(tree, variables)
    code = compile(tree, filename="<u0-expression>", mode="eval")
    env = {name: fn for name, (fn, _) in _FUNCTIONS.items()}

    def evaluate(*mesh: np.ndarray) -> np.ndarray:
        if len(mesh) != dim:
            raise ExpressionError(f"expected {dim} mesh arrays, got {len(mesh)}")
        scope = dict(env)
        scope["x"] = mesh[0]
        if dim == 2:
            scope["y"] = mesh[1]
        with np.errstate(invalid="raise", divide="raise"):
            try:
                out = eval(code, {"__builtins__": {}}, scope)
            except FloatingPointError as err:
                raise ExpressionError(
                    f"expression {text!r} is not finite on the grid: {err}"
                ) from err
        out = np.asarray(out, dtype=float)
        if out.shape != mesh[0].shape:
            out = np.full(mesh[0].shape, float(out))
        if not np.all(np.isfinite(out)):
            raise ExpressionError(f"expression {text!r} is not finite on the grid")
        return out

    return evaluate
