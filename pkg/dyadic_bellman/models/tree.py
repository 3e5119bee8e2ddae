"""Tree models: finite trees of cells and functions constant on their leaves."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from numpy.typing import NDArray

from dyadic_bellman.const import MEASURE_TOLERANCE
from dyadic_bellman.exceptions import (
    DyadicBellmanDomainError,
    DyadicBellmanMeasureError,
    DyadicBellmanStructureError,
)


def _frozen(values: Any, dtype: Any) -> NDArray[Any]:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TreeSpace:
    """Finite rooted tree of cells on a probability space.

    Nodes are addressed by index in topological order: the root is node 0 and
    every node comes after its parent. Only parents and measures are stored;
    children, depths and leaves are derived.
    """

    parent: NDArray[np.int64]
    measure: NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate the tree invariants.

        Raises
        ------
            DyadicBellmanStructureError: The parent array is not a rooted tree
                in topological order or a cell has a single child.
            DyadicBellmanMeasureError: Measures are not positive, the root
                measure differs from 1 or children do not partition a parent.

        """
        object.__setattr__(self, "parent", _frozen(self.parent, np.int64))
        object.__setattr__(self, "measure", _frozen(self.measure, np.float64))

        size = self.parent.shape[0]
        if size == 0 or self.measure.shape != (size,):
            msg = "Parent and measure arrays must be non-empty and of equal length."
            raise DyadicBellmanStructureError(msg, {"nodes": size})
        if self.parent[0] != -1:
            msg = "Node 0 must be the root."
            raise DyadicBellmanStructureError(msg)
        indices = np.arange(1, size)
        if np.any(self.parent[1:] < 0) or np.any(self.parent[1:] >= indices):
            msg = "Nodes must be listed in topological order."
            raise DyadicBellmanStructureError(msg)

        if not np.all(np.isfinite(self.measure)) or np.any(self.measure <= 0):
            msg = "Every node must carry a positive measure."
            raise DyadicBellmanMeasureError(msg)
        if abs(self.measure[0] - 1.0) > MEASURE_TOLERANCE:
            msg = "The root must carry measure 1."
            raise DyadicBellmanMeasureError(msg, {"root": float(self.measure[0])})

        counts = self.child_count
        if np.any(counts == 1):
            msg = "Every internal node needs at least two children."
            raise DyadicBellmanStructureError(
                msg, {"node": int(np.flatnonzero(counts == 1)[0])}
            )
        sums = np.zeros(size)
        np.add.at(sums, self.parent[1:], self.measure[1:])
        internal = counts > 0
        deviation = np.abs(sums[internal] - self.measure[internal])
        if deviation.size and deviation.max() > MEASURE_TOLERANCE:
            msg = "Children measures must sum to the parent measure."
            raise DyadicBellmanMeasureError(
                msg, {"deviation": float(deviation.max())}
            )

    @classmethod
    def from_children(
        cls, children: list[list[int]], measure: list[float] | NDArray[np.float64]
    ) -> TreeSpace:
        """Return a new TreeSpace from per-node child lists.

        Args:
        ----
            children: For every node, the indices of its children.
            measure: The measure of every node.

        Returns:
        -------
            A TreeSpace object.

        """
        parent = np.full(len(children), -1, dtype=np.int64)
        seen = np.zeros(len(children), dtype=bool)
        for node, kids in enumerate(children):
            for child in kids:
                if not 0 < child < len(children) or seen[child]:
                    msg = "Child lists must reference each non-root node once."
                    raise DyadicBellmanStructureError(msg, {"child": child})
                seen[child] = True
                parent[child] = node
        if not np.all(seen[1:]):
            msg = "Every non-root node must have a parent."
            raise DyadicBellmanStructureError(msg)
        return cls(parent=parent, measure=np.asarray(measure, dtype=np.float64))

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> TreeSpace:
        """Return a new TreeSpace instance based on the given JSON.

        Args:
        ----
            data: Object with "arity_children" and "measure" lists.

        Returns:
        -------
            A TreeSpace object.

        """
        try:
            children = [list(map(int, kids)) for kids in data["arity_children"]]
            measure = [float(value) for value in data["measure"]]
        except (KeyError, TypeError, ValueError) as exception:
            msg = "Tree JSON needs 'arity_children' and 'measure' lists."
            raise DyadicBellmanStructureError(msg) from exception
        return cls.from_children(children, measure)

    def to_json(
        self, functions: dict[str, LeafFunction] | None = None
    ) -> dict[str, Any]:
        """Serialize the tree, optionally with named leaf functions.

        Args:
        ----
            functions: Leaf functions to store under "leaf_values".

        Returns:
        -------
            A JSON-compatible dictionary.

        """
        data: dict[str, Any] = {
            "arity_children": [list(map(int, kids)) for kids in self.children],
            "measure": self.measure.tolist(),
        }
        if functions:
            for name, function in functions.items():
                function.require_tree(self)
            data["leaf_values"] = {
                name: function.values.tolist() for name, function in functions.items()
            }
        return data

    @property
    def size(self) -> int:
        """Return the number of nodes."""
        return int(self.parent.shape[0])

    @cached_property
    def child_count(self) -> NDArray[np.int64]:
        """Return the number of children of every node."""
        return np.bincount(self.parent[1:], minlength=self.size).astype(np.int64)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        """Return the children of every node, in index order."""
        result: list[list[int]] = [[] for _ in range(self.size)]
        for child in range(1, self.size):
            result[int(self.parent[child])].append(child)
        return tuple(tuple(kids) for kids in result)

    @cached_property
    def depth(self) -> NDArray[np.int64]:
        """Return the depth of every node, the root having depth 0."""
        depth = np.zeros(self.size, dtype=np.int64)
        for node in range(1, self.size):
            depth[node] = depth[self.parent[node]] + 1
        depth.setflags(write=False)
        return depth

    @cached_property
    def levels(self) -> tuple[NDArray[np.int64], ...]:
        """Return the node indices at depth 1, 2, ... in order."""
        depth = self.depth
        return tuple(
            np.flatnonzero(depth == level) for level in range(1, int(depth.max()) + 1)
        )

    @cached_property
    def is_leaf(self) -> NDArray[np.bool_]:
        """Return the leaf flag of every node."""
        return self.child_count == 0

    @cached_property
    def leaves(self) -> NDArray[np.int64]:
        """Return the node indices of the leaves, in index order."""
        return np.flatnonzero(self.is_leaf)

    @property
    def leaf_count(self) -> int:
        """Return the number of leaves."""
        return int(self.leaves.shape[0])

    @property
    def leaf_measures(self) -> NDArray[np.float64]:
        """Return the measure of every leaf."""
        return self.measure[self.leaves]

    @property
    def max_depth(self) -> int:
        """Return the depth of the deepest leaf."""
        return int(self.depth.max())

    def ancestors(self, node: int) -> list[int]:
        """Return the node and its ancestors, from the node up to the root.

        Args:
        ----
            node: A node index.

        Returns:
        -------
            The list of node indices on the path to the root.

        """
        self.require_node(node)
        path = [node]
        while path[-1] != 0:
            path.append(int(self.parent[path[-1]]))
        return path

    def require_node(self, node: int) -> None:
        """Raise unless the node belongs to the tree."""
        if not 0 <= node < self.size:
            msg = "Unknown node."
            raise DyadicBellmanStructureError(msg, {"node": node, "size": self.size})

    def same_as(self, other: TreeSpace) -> bool:
        """Return True if both objects describe the same tree."""
        return self is other or (
            np.array_equal(self.parent, other.parent)
            and np.array_equal(self.measure, other.measure)
        )


@dataclass(frozen=True, eq=False)
class LeafFunction:
    """Nonnegative function constant on the leaves of a TreeSpace."""

    tree: TreeSpace
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate count, sign and finiteness of the leaf values."""
        object.__setattr__(self, "values", _frozen(self.values, np.float64))
        if self.values.shape != (self.tree.leaf_count,):
            msg = "One value per leaf is required."
            raise DyadicBellmanStructureError(
                msg, {"values": self.values.shape, "leaves": self.tree.leaf_count}
            )
        if not np.all(np.isfinite(self.values)):
            msg = "Leaf values must be finite."
            raise DyadicBellmanDomainError(msg)
        if np.any(self.values < 0):
            msg = "Leaf values must be nonnegative."
            raise DyadicBellmanDomainError(msg, {"value": float(self.values.min())})

    @classmethod
    def constant(cls, tree: TreeSpace, value: float) -> LeafFunction:
        """Return the constant function on the tree."""
        return cls(tree, np.full(tree.leaf_count, value, dtype=np.float64))

    @classmethod
    def from_json(cls, tree: TreeSpace, data: list[float]) -> LeafFunction:
        """Return a new LeafFunction from a JSON list of leaf values."""
        try:
            values = np.asarray([float(value) for value in data])
        except (TypeError, ValueError) as exception:
            msg = "Leaf values must be a list of numbers."
            raise DyadicBellmanStructureError(msg) from exception
        return cls(tree, values)

    def require_tree(self, tree: TreeSpace) -> None:
        """Raise unless the function lives on the given tree."""
        if not self.tree.same_as(tree):
            msg = "Leaf function belongs to a different tree."
            raise DyadicBellmanStructureError(msg)

    def power(self, exponent: float) -> LeafFunction:
        """Return the leafwise power."""
        return LeafFunction(self.tree, np.power(self.values, exponent))

    def scale(self, factor: float) -> LeafFunction:
        """Return the function multiplied by a nonnegative constant."""
        return LeafFunction(self.tree, self.values * factor)

    def multiply(self, other: LeafFunction) -> LeafFunction:
        """Return the leafwise product."""
        other.require_tree(self.tree)
        return LeafFunction(self.tree, self.values * other.values)

    def divide(self, other: LeafFunction) -> LeafFunction:
        """Return the leafwise quotient.

        Raises
        ------
            DyadicBellmanDomainError: The divisor vanishes on some leaf.

        """
        other.require_tree(self.tree)
        if np.any(other.values == 0):
            msg = "Cannot divide by a function with zero values."
            raise DyadicBellmanDomainError(msg)
        return LeafFunction(self.tree, self.values / other.values)


@dataclass(frozen=True, eq=False)
class SAlphaTree:
    """Finite truncation of the tree that sheds an annulus at every cell.

    Every S-node of rank below the cutoff has three children: the annulus
    A_I of measure alpha*mu(I), followed by two S-nodes of measure
    (1 - alpha)*mu(I)/2. S-nodes at the cutoff rank are leaves.
    """

    alpha: float
    rank_cutoff: int
    tree: TreeSpace
    node_rank: NDArray[np.int64]
    annulus: NDArray[np.bool_] = field(repr=False)

    @property
    def leaf_rank(self) -> NDArray[np.int64]:
        """Return the rank tag of every leaf."""
        return self.node_rank[self.tree.leaves]

    @property
    def leaf_is_annulus(self) -> NDArray[np.bool_]:
        """Return True for annulus leaves, False for cutoff S-nodes."""
        return self.annulus[self.tree.leaves]

    @property
    def s_nodes(self) -> NDArray[np.int64]:
        """Return the indices of the S-nodes."""
        return np.flatnonzero(~self.annulus)

    def annulus_measure_by_rank(self) -> NDArray[np.float64]:
        """Return the total measure of the annuli of every rank."""
        leaves = self.tree.leaves
        mask = self.annulus[leaves]
        return np.bincount(
            self.node_rank[leaves][mask],
            weights=self.tree.measure[leaves][mask],
            minlength=self.rank_cutoff,
        )
