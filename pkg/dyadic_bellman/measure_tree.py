"""Finite trees of cells, the S-alpha construction and tree maximal operators."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .const import MAX_TREE_LEAVES, MEASURE_TOLERANCE
from .exceptions import (
    DyadicBellmanDomainError,
    DyadicBellmanInstanceTooLargeError,
    DyadicBellmanMeasureError,
    DyadicBellmanStructureError,
)
from .models import LeafFunction, SAlphaTree, TreeSpace

_LOGGER = logging.getLogger(__name__)

# Children of a non-terminal S-node: the annulus first, then two S-nodes.
_SALPHA_PATTERN = np.array([True, False, False])


def _require_leaf_budget(leaves: float) -> None:
    if leaves > MAX_TREE_LEAVES:
        msg = "The requested tree exceeds the leaf budget."
        raise DyadicBellmanInstanceTooLargeError(
            msg, {"leaves": leaves, "limit": MAX_TREE_LEAVES}
        )


def build_uniform_tree(depth: int, arity: int) -> TreeSpace:
    """Build the complete arity-regular tree of the given depth.

    Args:
    ----
        depth: Depth of the leaves, at least 1.
        arity: Number of children of every internal node, at least 2.

    Returns:
    -------
        A TreeSpace in which every node at depth d has measure arity**-d.

    Raises:
    ------
        DyadicBellmanDomainError: depth < 1 or arity < 2.
        DyadicBellmanInstanceTooLargeError: arity**depth exceeds 2**24.

    """
    if depth < 1 or arity < 2:
        msg = "depth must be at least 1 and arity at least 2."
        raise DyadicBellmanDomainError(msg, {"depth": depth, "arity": arity})
    _require_leaf_budget(float(arity) ** depth)

    parents = [np.array([-1], dtype=np.int64)]
    measures = [np.array([1.0])]
    offset = 0
    for level in range(1, depth + 1):
        width = arity ** (level - 1)
        parents.append(np.repeat(np.arange(offset, offset + width), arity))
        measures.append(np.full(width * arity, float(arity) ** -level))
        offset += width
    return TreeSpace(np.concatenate(parents), np.concatenate(measures))


def build_random_tree(
    rng: np.random.Generator,
    depth: int,
    arity_range: tuple[int, int] = (2, 3),
) -> TreeSpace:
    """Build a complete tree with random arities and random measure splits.

    Each node draws its arity uniformly from arity_range and splits its
    measure among its children with Dirichlet(2, ..., 2) proportions.

    Args:
    ----
        rng: The random generator to draw from.
        depth: Depth of the leaves.
        arity_range: Inclusive bounds of the arity.

    Returns:
    -------
        A TreeSpace object.

    """
    low, high = arity_range
    if depth < 1 or low < 2 or high < low:
        msg = "depth must be positive and arities at least 2."
        raise DyadicBellmanDomainError(
            msg, {"depth": depth, "arity_range": arity_range}
        )
    _require_leaf_budget(float(high) ** depth)

    parents = [np.array([-1], dtype=np.int64)]
    measures = [np.array([1.0])]
    level_nodes = np.array([0], dtype=np.int64)
    level_measures = np.array([1.0])
    size = 1
    for _ in range(depth):
        arities = rng.integers(low, high + 1, size=level_nodes.shape[0])
        owner = np.repeat(np.arange(level_nodes.shape[0]), arities)
        shares = rng.gamma(2.0, size=owner.shape[0])
        totals = np.zeros(level_nodes.shape[0])
        np.add.at(totals, owner, shares)
        child_measures = level_measures[owner] * shares / totals[owner]

        parents.append(level_nodes[owner])
        measures.append(child_measures)
        level_nodes = np.arange(size, size + owner.shape[0], dtype=np.int64)
        level_measures = child_measures
        size += owner.shape[0]
    return TreeSpace(np.concatenate(parents), np.concatenate(measures))


def build_salpha(alpha: float, rank_cutoff: int) -> SAlphaTree:
    """Build the S-alpha tree truncated at the given rank.

    Every S-node I of rank below the cutoff sheds the annulus A_I of measure
    alpha*mu(I) and splits the rest into two S-nodes of equal measure. The
    S-nodes of rank rank_cutoff are leaves carrying the residual measure.

    Raises
    ------
        DyadicBellmanDomainError: alpha outside (0, 1) or a cutoff below 1.
        DyadicBellmanInstanceTooLargeError: 2**rank_cutoff exceeds 2**24.

    """
    if not 0 < alpha < 1:
        msg = "alpha must lie in (0, 1)."
        raise DyadicBellmanDomainError(msg, {"alpha": alpha})
    if rank_cutoff < 1:
        msg = "rank_cutoff must be at least 1."
        raise DyadicBellmanDomainError(msg, {"rank_cutoff": rank_cutoff})
    _require_leaf_budget(2.0**rank_cutoff)

    parents = [np.array([-1], dtype=np.int64)]
    measures = [np.array([1.0])]
    ranks = [np.array([0], dtype=np.int64)]
    annulus = [np.array([False])]
    s_nodes = np.array([0], dtype=np.int64)
    size = 1
    for rank in range(rank_cutoff):
        s_measure = ((1 - alpha) / 2) ** rank
        block = 3 * s_nodes.shape[0]
        pattern = np.tile(_SALPHA_PATTERN, s_nodes.shape[0])

        parents.append(np.repeat(s_nodes, 3))
        measures.append(
            np.where(pattern, alpha * s_measure, (1 - alpha) * s_measure / 2)
        )
        ranks.append(np.where(pattern, rank, rank + 1))
        annulus.append(pattern)
        s_nodes = size + np.flatnonzero(~pattern)
        size += block

    salpha = SAlphaTree(
        alpha=alpha,
        rank_cutoff=rank_cutoff,
        tree=TreeSpace(np.concatenate(parents), np.concatenate(measures)),
        node_rank=np.concatenate(ranks),
        annulus=np.concatenate(annulus),
    )
    expected = alpha * (1 - alpha) ** np.arange(rank_cutoff)
    deviation = np.abs(salpha.annulus_measure_by_rank() - expected).max()
    if deviation > MEASURE_TOLERANCE:
        msg = "Annulus measures deviate from alpha*(1-alpha)**m."
        raise DyadicBellmanMeasureError(msg, {"deviation": float(deviation)})
    _LOGGER.debug(
        "Built S-alpha tree with alpha=%s, cutoff=%s, %s nodes",
        alpha,
        rank_cutoff,
        salpha.tree.size,
    )
    return salpha


def salpha_leaf_function(
    salpha: SAlphaTree, annulus_values: ArrayLike, residual_value: float
) -> LeafFunction:
    """Build a function on an S-alpha tree from per-rank values.

    Args:
    ----
        salpha: The S-alpha tree.
        annulus_values: The value on the annuli of rank 0 .. rank_cutoff - 1.
        residual_value: The value on the cutoff S-nodes.

    Returns:
    -------
        A LeafFunction on salpha.tree.

    """
    per_rank = np.asarray(annulus_values, dtype=np.float64)
    if per_rank.shape != (salpha.rank_cutoff,):
        msg = "One annulus value per rank below the cutoff is required."
        raise DyadicBellmanStructureError(
            msg, {"values": per_rank.shape, "ranks": salpha.rank_cutoff}
        )
    ranks = salpha.leaf_rank
    values = np.where(
        salpha.leaf_is_annulus,
        per_rank[np.minimum(ranks, salpha.rank_cutoff - 1)],
        residual_value,
    )
    return LeafFunction(salpha.tree, values)


def node_integrals(
    tree: TreeSpace, phi: LeafFunction, nu: LeafFunction
) -> NDArray[np.float64]:
    """Return the integral of phi against nu*mu over every node.

    The leaf contributions are pushed up one level at a time, deepest first.
    """
    phi.require_tree(tree)
    nu.require_tree(tree)
    integrals = np.zeros(tree.size)
    integrals[tree.leaves] = phi.values * nu.values * tree.leaf_measures
    for nodes in reversed(tree.levels):
        np.add.at(integrals, tree.parent[nodes], integrals[nodes])
    return integrals


def node_integral(
    tree: TreeSpace, node: int, phi: LeafFunction, nu: LeafFunction
) -> float:
    """Return the integral of phi against nu*mu over one node.

    Raises
    ------
        DyadicBellmanStructureError: Unknown node or mismatched trees.

    """
    tree.require_node(node)
    return float(node_integrals(tree, phi, nu)[node])


def node_averages(
    tree: TreeSpace, phi: LeafFunction, nu: LeafFunction
) -> NDArray[np.float64]:
    """Return the nu-average of phi over every node.

    Raises
    ------
        DyadicBellmanMeasureError: Some node carries zero nu-mass.

    """
    mass = node_integrals(tree, LeafFunction.constant(tree, 1.0), nu)
    if np.any(mass <= 0):
        msg = "Every node needs positive mass under the weighting measure."
        raise DyadicBellmanMeasureError(
            msg, {"node": int(np.flatnonzero(mass <= 0)[0])}
        )
    return node_integrals(tree, phi, nu) / mass


def maximal_function(
    tree: TreeSpace, phi: LeafFunction, nu: LeafFunction | None = None
) -> LeafFunction:
    """Evaluate the nu-weighted tree maximal operator at every leaf.

    The value at a leaf is the largest nu-average of phi over the nodes
    containing it, the leaf itself included. Averages are carried from the
    root down one level at a time as a running maximum.

    Args:
    ----
        tree: The tree.
        phi: The function to maximize.
        nu: The density of the weighting measure; Lebesgue mu when omitted.

    Returns:
    -------
        The maximal function as a LeafFunction.

    """
    weight = LeafFunction.constant(tree, 1.0) if nu is None else nu
    running = node_averages(tree, phi, weight)
    # The average over a leaf is phi itself.
    running[tree.leaves] = phi.values
    for nodes in tree.levels:
        running[nodes] = np.maximum(running[nodes], running[tree.parent[nodes]])
    return LeafFunction(tree, running[tree.leaves])


def integrate_leaves(
    tree: TreeSpace, phi: LeafFunction, nu: LeafFunction | None = None
) -> float:
    """Return the integral of phi against nu*mu over the whole space."""
    phi.require_tree(tree)
    values = phi.values * tree.leaf_measures
    if nu is not None:
        nu.require_tree(tree)
        values = values * nu.values
    return float(values.sum())


def load_instance(path: str | Path) -> tuple[TreeSpace, dict[str, LeafFunction]]:
    """Read a tree and its named leaf functions from a JSON file.

    Args:
    ----
        path: Location of a file in the tree JSON schema.

    Returns:
    -------
        The tree and a mapping from names to leaf functions.

    """
    try:
        data: dict[str, Any] = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exception:
        msg = "Unable to read the tree instance."
        raise DyadicBellmanStructureError(msg, {"path": str(path)}) from exception
    tree = TreeSpace.from_json(data)
    functions = {
        name: LeafFunction.from_json(tree, values)
        for name, values in data.get("leaf_values", {}).items()
    }
    return tree, functions


def dump_instance(
    tree: TreeSpace, functions: dict[str, LeafFunction] | None = None
) -> str:
    """Serialize a tree and its named leaf functions to JSON text."""
    return json.dumps(tree.to_json(functions), indent=2)
