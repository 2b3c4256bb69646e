"""Straight-line program tapes over Z_p with a reverse differentiation sweep.

A Tape records every arithmetic operation of a computation together with its
eagerly evaluated value.  After recording, reverse_sweep() walks the tape
backwards once and yields the partial derivative of a chosen output with
respect to every registered input, at the recorded point.

The sweep performs at most 4 field operations per recorded arithmetic node,
so derivative extraction stays within a constant factor of the forward cost;
both sides are instrumented (forward_ops / Gradient.sweep_ops) so the factor
is checkable rather than assumed.

Derivatives are taken of the *traced* execution: a program with data
dependent branches (e.g. pivot selection in an elimination) is differentiated
along the branch actually taken, which is the correct local derivative for
generic inputs where the branch choice is locally constant.

No simplification or subexpression sharing is performed; the tape is exactly
what the caller recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field_poly import PrimeField

INPUT = 0
CONST = 1
ADD = 2
SUB = 3
MUL = 4
DIV = 5
NEG = 6

_ARITHMETIC = frozenset({ADD, SUB, MUL, DIV, NEG})


class DivisionByZero(ZeroDivisionError):
    """Division node with a zero divisor value; caller must re-randomize."""


@dataclass
class Gradient:
    """Partials of one output w.r.t. every input node, at the traced point."""

    partials: dict[int, int]
    sweep_ops: int = 0

    def by_input(self, node: int) -> int:
        return self.partials[node]


class Tape:
    """Append-only arithmetic trace over a prime field.

    Single-writer while recording; sweeps are read-only and may run
    concurrently once recording is done.
    """

    def __init__(self, fld: PrimeField):
        self.field = fld
        self.ops: list[int] = []
        self.arg0: list[int] = []
        self.arg1: list[int] = []
        self.values: list[int] = []
        self.aux: list[int] = []      # cached inv(divisor) for DIV nodes
        self.inputs: list[int] = []
        self.forward_ops = 0

    def __len__(self) -> int:
        return len(self.ops)

    def _push(self, op: int, a: int, b: int, value: int, aux: int = 0) -> int:
        self.ops.append(op)
        self.arg0.append(a)
        self.arg1.append(b)
        self.values.append(value)
        self.aux.append(aux)
        if op in _ARITHMETIC:
            self.forward_ops += 1
        return len(self.ops) - 1

    def input(self, value: int) -> int:
        idx = self._push(INPUT, -1, -1, value % self.field.p)
        self.inputs.append(idx)
        return idx

    def const(self, value: int) -> int:
        return self._push(CONST, -1, -1, value % self.field.p)

    def add(self, a: int, b: int) -> int:
        v = (self.values[a] + self.values[b]) % self.field.p
        return self._push(ADD, a, b, v)

    def sub(self, a: int, b: int) -> int:
        v = (self.values[a] - self.values[b]) % self.field.p
        return self._push(SUB, a, b, v)

    def mul(self, a: int, b: int) -> int:
        v = (self.values[a] * self.values[b]) % self.field.p
        return self._push(MUL, a, b, v)

    def div(self, a: int, b: int) -> int:
        vb = self.values[b]
        if vb == 0:
            raise DivisionByZero("recorded division by zero")
        invb = self.field.inv(vb)
        v = (self.values[a] * invb) % self.field.p
        return self._push(DIV, a, b, v, aux=invb)

    def neg(self, a: int) -> int:
        return self._push(NEG, a, -1, (-self.values[a]) % self.field.p)

    def record(self, op: int, *args: int) -> int:
        """Generic entry point mirroring the typed methods above."""
        if op == INPUT:
            return self.input(args[0])
        if op == CONST:
            return self.const(args[0])
        if op == NEG:
            return self.neg(args[0])
        table = {ADD: self.add, SUB: self.sub, MUL: self.mul, DIV: self.div}
        return table[op](*args)

    def replay(self) -> bool:
        """Re-evaluate every node; True iff all stored values are consistent."""
        p = self.field.p
        for k, op in enumerate(self.ops):
            a, b = self.arg0[k], self.arg1[k]
            if op in (INPUT, CONST):
                got = self.values[k]
            elif op == ADD:
                got = (self.values[a] + self.values[b]) % p
            elif op == SUB:
                got = (self.values[a] - self.values[b]) % p
            elif op == MUL:
                got = (self.values[a] * self.values[b]) % p
            elif op == DIV:
                got = (self.values[a] * self.field.inv(self.values[b])) % p
            else:
                got = (-self.values[a]) % p
            if got != self.values[k]:
                return False
        return True


def reverse_sweep(tape: Tape, output: int) -> Gradient:
    """All partials of the node `output` w.r.t. the tape's inputs.

    Adjoint rules: Add -> (1, 1), Sub -> (1, -1), Mul(a, b) -> (b, a),
    Div(a, b) -> (1/b, -a/b**2), Neg -> (-1).  The divisor inverses were
    cached at record time, so the sweep contains no inversions.
    """
    if not 0 <= output < len(tape.ops):
        raise IndexError(f"output node {output} not on tape")
    p = tape.field.p
    ops, arg0, arg1 = tape.ops, tape.arg0, tape.arg1
    values, aux = tape.values, tape.aux
    adj = [0] * (output + 1)
    adj[output] = 1
    nops = 0
    for k in range(output, -1, -1):
        g = adj[k]
        if g == 0:
            continue
        op = ops[k]
        if op == ADD:
            a, b = arg0[k], arg1[k]
            adj[a] = (adj[a] + g) % p
            adj[b] = (adj[b] + g) % p
            nops += 2
        elif op == SUB:
            a, b = arg0[k], arg1[k]
            adj[a] = (adj[a] + g) % p
            adj[b] = (adj[b] - g) % p
            nops += 2
        elif op == MUL:
            a, b = arg0[k], arg1[k]
            adj[a] = (adj[a] + g * values[b]) % p
            adj[b] = (adj[b] + g * values[a]) % p
            nops += 4
        elif op == DIV:
            a, b = arg0[k], arg1[k]
            da = (g * aux[k]) % p
            adj[a] = (adj[a] + da) % p
            adj[b] = (adj[b] - da * values[k]) % p
            nops += 4
        elif op == NEG:
            a = arg0[k]
            adj[a] = (adj[a] - g) % p
            nops += 1
    partials = {i: (adj[i] if i <= output else 0) for i in tape.inputs}
    return Gradient(partials=partials, sweep_ops=nops)
