"""
Tensor with reverse-mode differentiation.

A Tensor wraps a numpy array, remembers the tensors it was computed from
and carries a closure that pushes its gradient back to them. Calling
backward() on a scalar result visits the graph in reverse topological
order.

Only tensors with requires_grad=True (parameters, or inputs under a
gradient check) and tensors computed from them receive gradient
contributions; every other node still gets a zero gradient array so
grad always has the shape of data after backward().
"""

from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

ArrayLike = Union[np.ndarray, float, int, Sequence]


def unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to `shape`."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    """
    n-dimensional array node in a computation graph.

    Attributes:
        data: forward values
        grad: gradient of the last backward() root w.r.t. data (None before)
        op: name of the operation that produced this node ('' for leaves)
        requires_grad: whether gradients flow into this node
    """

    def __init__(
        self,
        data: ArrayLike,
        children: Iterable['Tensor'] = (),
        op: str = '',
        requires_grad: bool = False,
        dtype=None,
    ):
        array = np.asarray(data, dtype=dtype)
        if not np.issubdtype(array.dtype, np.floating):
            array = array.astype(np.float64)
        self.data = array
        self.grad: Optional[np.ndarray] = None
        self._children: Tuple['Tensor', ...] = tuple(children)
        self._backward: Callable[[], None] = lambda: None
        self.op = op
        self.requires_grad = requires_grad or any(c.requires_grad for c in self._children)

    # ------------------------------------------------------------------
    # Array protocol
    # ------------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        if self.data.size != 1:
            raise ValueError(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> 'Tensor':
        return Tensor(self.data.copy())

    def __repr__(self):
        label = f", op={self.op}" if self.op else ""
        return f"Tensor(shape={self.shape}, dtype={self.dtype}{label})"

    def _lift(self, other: Union['Tensor', ArrayLike]) -> 'Tensor':
        if isinstance(other, Tensor):
            return other
        return Tensor(np.asarray(other, dtype=self.data.dtype))

    # ------------------------------------------------------------------
    # Differentiation
    # ------------------------------------------------------------------

    def _topological_order(self) -> List['Tensor']:
        order: List[Tensor] = []
        visited = set()
        stack: List[Tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for child in reversed(node._children):
                if id(child) not in visited:
                    stack.append((child, False))
        return order

    def backward(self) -> None:
        """
        Populate .grad on every node reachable from this scalar.

        Raises:
            ValueError: this tensor is not a scalar
        """
        if self.data.size != 1:
            raise ValueError(f"backward() needs a scalar loss, got shape {self.shape}")
        order = self._topological_order()
        for node in order:
            node.grad = np.zeros_like(node.data)
        self.grad = np.ones_like(self.data)
        for node in reversed(order):
            node._backward()

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        out = Tensor(self.data + other.data, (self, other), 'add')

        def _backward():
            if self.requires_grad:
                self.grad += unbroadcast(out.grad, self.shape)
            if other.requires_grad:
                other.grad += unbroadcast(out.grad, other.shape)

        out._backward = _backward
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Tensor(-self.data, (self,), 'neg')

        def _backward():
            if self.requires_grad:
                self.grad -= out.grad

        out._backward = _backward
        return out

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        out = Tensor(self.data * other.data, (self, other), 'mul')

        def _backward():
            if self.requires_grad:
                self.grad += unbroadcast(out.grad * other.data, self.shape)
            if other.requires_grad:
                other.grad += unbroadcast(out.grad * self.data, other.shape)

        out._backward = _backward
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Tensor):
            raise TypeError("division is only defined by a constant")
        return self * (1.0 / float(other))

    def __pow__(self, exponent: float):
        exponent = float(exponent)
        out = Tensor(self.data ** exponent, (self,), 'pow')

        def _backward():
            if self.requires_grad:
                self.grad += out.grad * exponent * self.data ** (exponent - 1.0)

        out._backward = _backward
        return out

    def square(self) -> 'Tensor':
        out = Tensor(self.data * self.data, (self,), 'square')

        def _backward():
            if self.requires_grad:
                self.grad += 2.0 * self.data * out.grad

        out._backward = _backward
        return out

    def __matmul__(self, other):
        other = self._lift(other)
        if self.ndim != 2 or other.ndim != 2:
            raise ValueError(f"matmul expects 2-D operands, got {self.shape} @ {other.shape}")
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"matmul shape mismatch: {self.shape} @ {other.shape}")
        out = Tensor(self.data @ other.data, (self, other), 'matmul')

        def _backward():
            if self.requires_grad:
                self.grad += out.grad @ other.data.T
            if other.requires_grad:
                other.grad += self.data.T @ out.grad

        out._backward = _backward
        return out

    # ------------------------------------------------------------------
    # Reductions and shape
    # ------------------------------------------------------------------

    def sum(self, axis=None, keepdims: bool = False) -> 'Tensor':
        out = Tensor(np.sum(self.data, axis=axis, keepdims=keepdims), (self,), 'sum')

        def _backward():
            if not self.requires_grad:
                return
            grad = out.grad
            if axis is not None and not keepdims:
                grad = np.expand_dims(grad, axis)
            self.grad += np.broadcast_to(grad, self.shape)

        out._backward = _backward
        return out

    def mean(self, axis=None, keepdims: bool = False) -> 'Tensor':
        if axis is None:
            count = self.data.size
        else:
            axes = axis if isinstance(axis, tuple) else (axis,)
            count = int(np.prod([self.shape[a] for a in axes]))
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def reshape(self, *shape) -> 'Tensor':
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        out = Tensor(self.data.reshape(shape), (self,), 'reshape')

        def _backward():
            if self.requires_grad:
                self.grad += out.grad.reshape(self.shape)

        out._backward = _backward
        return out

    def transpose(self, *axes) -> 'Tensor':
        axes = tuple(axes) if axes else tuple(reversed(range(self.ndim)))
        inverse = tuple(np.argsort(axes))
        out = Tensor(self.data.transpose(axes), (self,), 'transpose')

        def _backward():
            if self.requires_grad:
                self.grad += out.grad.transpose(inverse)

        out._backward = _backward
        return out

    def __getitem__(self, index) -> 'Tensor':
        out = Tensor(self.data[index], (self,), 'index')

        def _backward():
            if self.requires_grad:
                np.add.at(self.grad, index, out.grad)

        out._backward = _backward
        return out


def tensor(data: ArrayLike, requires_grad: bool = False, dtype=None) -> Tensor:
    """Leaf tensor constructor."""
    return Tensor(data, requires_grad=requires_grad, dtype=dtype)
