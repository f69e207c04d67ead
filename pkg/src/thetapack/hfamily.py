"""Target families: which subgraphs count as a hit.

An ``HCollection`` is either *literal* (a finite list of connected patterns;
a hit is a subdivision of a member) or an *expansion* family: the hits are
the subgraphs containing a fixed pattern as a minor, i.e. subdivisions of the
topologically minimal expansions of that pattern.  The expansions of a theta
are never materialized; detection runs through the specialized engines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from . import detect
from .errors import GraphError
from .multigraph import MultiGraph, are_isomorphic


def theta_graph(r: int, a: int = 0, b: int = 1) -> MultiGraph:
    if r < 1:
        raise GraphError("theta_graph: r must be >= 1")
    return MultiGraph([a, b], [(a, b, r)])


def double_theta_graph(r: int, rp: int) -> MultiGraph:
    """Two thetas sharing one identified vertex: 1 -(r)- 0 -(rp)- 2."""
    if min(r, rp) < 1:
        raise GraphError("double_theta_graph: r, r' must be >= 1")
    return MultiGraph([0, 1, 2], [(0, 1, r), (0, 2, rp)])


@dataclass(frozen=True)
class HCollection:
    members: Tuple[MultiGraph, ...]
    expand: bool = False
    theta_r: Optional[int] = None
    theta_double_rs: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if not self.members:
            raise GraphError("HCollection needs at least one member")
        for g in self.members:
            if g.n() == 0 or not g.is_connected():
                raise GraphError("HCollection members must be non-empty connected graphs")

    @staticmethod
    def thetas(r: int) -> "HCollection":
        """Subgraphs containing theta_r as a minor."""
        return HCollection((theta_graph(r),), expand=True, theta_r=r)

    @staticmethod
    def double_thetas(r: int, rp: int) -> "HCollection":
        return HCollection(
            (double_theta_graph(r, rp),), expand=True, theta_double_rs=(r, rp)
        )

    @staticmethod
    def literal(*graphs: MultiGraph) -> "HCollection":
        return HCollection(tuple(g.copy() for g in graphs))

    @property
    def h(self) -> int:
        """Total edge count of the base members."""
        return sum(g.m() for g in self.members)

    def max_member_multiplicity(self) -> int:
        return max(
            max((mult for _pair, mult in g.edge_items()), default=1) for g in self.members
        )

    def describe(self) -> str:
        if self.theta_r is not None:
            return "theta(%d) minors" % self.theta_r
        if self.theta_double_rs is not None:
            return "double theta%s minors" % (self.theta_double_rs,)
        if self.expand:
            return "expansion family on %d members" % len(self.members)
        return "literal collection of %d patterns" % len(self.members)

    # -- pattern membership (for certificate verification) ----------------------

    def pattern_ok(self, pattern: MultiGraph, cap: Optional[int] = None) -> bool:
        """Is ``pattern`` a valid witness pattern for this family?

        Literal: isomorphic to a member.  Expansion: contains the base
        pattern as a minor (the witness subgraph then does too).
        """
        if not self.expand:
            return any(are_isomorphic(pattern, m) for m in self.members)
        if self.theta_r is not None:
            return detect.has_theta_minor_fast(pattern, self.theta_r, cap)
        if self.theta_double_rs is not None:
            r, rp = self.theta_double_rs
            return detect.has_double_theta_minor(pattern, r, rp, cap)
        raise GraphError("expansion family without a specialized engine")
