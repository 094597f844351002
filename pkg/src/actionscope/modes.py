"""Social-action mode taxonomy and the collapse algebra over atomic labels.

Four atomic modes span the two dichotomies actor scale (singular vs.
collective) and action manner (peace vs. force). A message may carry any
subset of the atomic modes. Collapsed modes are unions of atomic ones and
exist so that coarser classifiers can be trained on the same codings.
"""

from __future__ import annotations

import enum
from typing import AbstractSet, FrozenSet


class ActionMode(enum.Enum):
    """One of the four atomic social-action modes or a collapsed union."""

    SINGULAR_PEACE = "singular_peace"
    SINGULAR_FORCE = "singular_force"
    COLLECTIVE_PEACE = "collective_peace"
    COLLECTIVE_FORCE = "collective_force"
    COLLECTIVE = "collective"
    SINGULAR = "singular"
    FORCE = "force"
    PEACE = "peace"
    ALL = "all"

    @property
    def wire_name(self) -> str:
        return self.value

    @property
    def is_atomic(self) -> bool:
        return self in ATOMIC_MODES

    @classmethod
    def from_name(cls, name: str) -> "ActionMode":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown action mode: {name!r}") from None


ATOMIC_MODES: tuple[ActionMode, ...] = (
    ActionMode.SINGULAR_PEACE,
    ActionMode.SINGULAR_FORCE,
    ActionMode.COLLECTIVE_PEACE,
    ActionMode.COLLECTIVE_FORCE,
)

COLLAPSED_MODES: tuple[ActionMode, ...] = (
    ActionMode.COLLECTIVE,
    ActionMode.SINGULAR,
    ActionMode.FORCE,
    ActionMode.PEACE,
    ActionMode.ALL,
)

# Evaluation-table row order: atomic modes first, then the collapsed unions.
ALL_MODES: tuple[ActionMode, ...] = ATOMIC_MODES + COLLAPSED_MODES

# Each collapsed mode is the union (logical OR) of these atomic modes.
_COLLAPSE_MEMBERS: dict[ActionMode, frozenset[ActionMode]] = {
    ActionMode.COLLECTIVE: frozenset(
        {ActionMode.COLLECTIVE_PEACE, ActionMode.COLLECTIVE_FORCE}
    ),
    ActionMode.SINGULAR: frozenset(
        {ActionMode.SINGULAR_PEACE, ActionMode.SINGULAR_FORCE}
    ),
    ActionMode.FORCE: frozenset(
        {ActionMode.SINGULAR_FORCE, ActionMode.COLLECTIVE_FORCE}
    ),
    ActionMode.PEACE: frozenset(
        {ActionMode.SINGULAR_PEACE, ActionMode.COLLECTIVE_PEACE}
    ),
    ActionMode.ALL: frozenset(ATOMIC_MODES),
}


def collapse_labels(atomic: AbstractSet[ActionMode]) -> FrozenSet[ActionMode]:
    """Map a set of atomic labels to the collapsed modes it activates.

    A collapsed mode is present iff any of its atomic members is present;
    ALL is present iff the input is non-empty. Raises if the input already
    contains a collapsed mode.
    """
    for mode in atomic:
        if not mode.is_atomic:
            raise ValueError(f"collapse_labels expects atomic modes, got {mode}")
    return frozenset(
        collapsed
        for collapsed, members in _COLLAPSE_MEMBERS.items()
        if members & atomic
    )


def projects_positive(mode: ActionMode, atomic: AbstractSet[ActionMode]) -> bool:
    """Whether a coded atomic label set counts as positive for ``mode``.

    Atomic modes require direct membership; collapsed modes follow the
    collapse algebra.
    """
    if mode.is_atomic:
        return mode in atomic
    return bool(_COLLAPSE_MEMBERS[mode] & atomic)
