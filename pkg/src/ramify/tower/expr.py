"""Parse arithmetic expressions such as ``"z^4/x + 2*x*y"`` into tower elements."""

from __future__ import annotations

import ast

from .tower import TowerElement, TowerError, TowerInstance


class ExpressionError(TowerError):
    pass


def parse_element(inst: TowerInstance, text: str) -> TowerElement:
    """Evaluate ``text`` in ``inst``.

    Names are ``x`` and the generator names; ``^`` and ``**`` are powers with
    integer exponents; integer literals map to the prime field.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    names = {"x": inst.x()}
    names.update({name: inst.gen(j) for j, name in enumerate(inst.names, 1)})
    return _eval(tree.body, inst, names, text)


def _eval(node, inst, names, text):
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, inst, names, text)
        if isinstance(node.op, ast.Pow):
            exp = _int_literal(node.right, text)
            return left ** exp
        right = _eval(node.right, inst, names, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.vanishes():
                raise ExpressionError(f"division by zero in {text!r}")
            return left / right
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _eval(node.operand, inst, names, text)
        return -value if isinstance(node.op, ast.USub) else value
    elif isinstance(node, ast.Name):
        if node.id not in names:
            raise ExpressionError(f"unknown name {node.id!r} in {text!r}")
        return names[node.id]
    elif isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return inst.const(node.value)
    raise ExpressionError(f"unsupported syntax in {text!r}")


def _int_literal(node, text) -> int:
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_literal(node.operand, text)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return node.value
    raise ExpressionError(f"exponents must be integer literals in {text!r}")
