"""Named finite groups for ``table(<name>)``."""

from __future__ import annotations


def _perm_op(p, q):
    # apply p then q
    return tuple(q[i] for i in p)


def _mat_op(A, B):
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


_I2 = ((1, 0), (0, 1))

# name -> (generator names, generator objects, operation, identity)
FINITE_GROUPS = {
    "S3": (["s", "r"], [(1, 0, 2), (1, 2, 0)], _perm_op, (0, 1, 2)),
    "V4": (["s", "r"], [(1, 0, 3, 2), (2, 3, 0, 1)], _perm_op, (0, 1, 2, 3)),
    "D8": (["s", "r"], [(0, 3, 2, 1), (1, 2, 3, 0)], _perm_op, (0, 1, 2, 3)),
    "A4": (["s", "r"], [(1, 0, 3, 2), (1, 2, 0, 3)], _perm_op, (0, 1, 2, 3)),
    "S4": (["s", "r"], [(1, 0, 2, 3), (1, 2, 3, 0)], _perm_op, (0, 1, 2, 3)),
    # quaternion units as Gaussian-integer matrices
    "Q8": (["i", "j"], [((1j, 0), (0, -1j)), ((0, 1), (-1, 0))], _mat_op, _I2),
}
