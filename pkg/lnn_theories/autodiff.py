# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

from __future__ import annotations

import typing

import numpy as np
import numpy.typing as npt

Vector = npt.NDArray[np.float64]


class Dual:
    """
    A real number carrying its gradient with respect to a fixed set of parameters.

    The engine's activations are written with ``+``, ``-``, ``*``, ``/`` and the
    builtin ``min``/``max``, so running them on ``Dual`` values instead of floats
    computes bounds together with their exact (sub)gradients. Ordering compares
    values only: ``min``/``max`` pick a branch and the result carries that branch's
    gradient.
    """

    __slots__ = ("value", "grad")

    def __init__(self, value: float, grad: Vector | float = 0.0):
        self.value = float(value)
        self.grad = grad

    @classmethod
    def parameter(cls, value: float, index: int, size: int) -> Dual:
        grad = np.zeros(size)
        grad[index] = 1.0
        return cls(value, grad)

    def __repr__(self) -> str:
        return f"Dual({self.value!r})"

    def __float__(self) -> float:
        return self.value

    def __add__(self, other: Scalar) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.value + other.value, self.grad + other.grad)
        return Dual(self.value + other, self.grad)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.value - other.value, self.grad - other.grad)
        return Dual(self.value - other, self.grad)

    def __rsub__(self, other: float) -> Dual:
        return Dual(other - self.value, -self.grad)

    def __neg__(self) -> Dual:
        return Dual(-self.value, -self.grad)

    def __mul__(self, other: Scalar) -> Dual:
        if isinstance(other, Dual):
            return Dual(
                self.value * other.value,
                self.grad * other.value + other.grad * self.value,
            )
        return Dual(self.value * other, self.grad * other)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> Dual:
        if isinstance(other, Dual):
            return Dual(
                self.value / other.value,
                (self.grad * other.value - other.grad * self.value) / other.value ** 2,
            )
        return Dual(self.value / other, self.grad / other)

    def __rtruediv__(self, other: float) -> Dual:
        return Dual(other / self.value, -other * self.grad / self.value ** 2)

    def __lt__(self, other: Scalar) -> bool:
        return self.value < float(other)

    def __le__(self, other: Scalar) -> bool:
        return self.value <= float(other)

    def __gt__(self, other: Scalar) -> bool:
        return self.value > float(other)

    def __ge__(self, other: Scalar) -> bool:
        return self.value >= float(other)


#: The numeric type flowing through the activations.
Scalar = typing.Union[float, Dual]


def gradient_of(value: Scalar, size: int) -> Vector:
    if isinstance(value, Dual):
        return np.broadcast_to(np.asarray(value.grad, dtype=np.float64), (size,)).copy()
    return np.zeros(size)
