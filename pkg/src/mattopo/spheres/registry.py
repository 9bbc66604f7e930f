"""Sphere ownership: stable ids, deduplication, tombstones and .sph files."""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Set, Union

import numpy as np

from ..models.sphere import MedialSphere, SphereKind


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class SphereRegistry:
    """All spheres ever inserted, indexed by id.

    Ids are sequential and never reused; deleted spheres stay as tombstones so
    cells keyed by sphere id remain valid across partial updates.
    """

    def __init__(self, dup_eps: float = 0.0):
        self.dup_eps = dup_eps
        self._spheres: List[MedialSphere] = []
        self._pending: Set[int] = set()

    def __len__(self) -> int:
        return sum(1 for s in self._spheres if s.is_active)

    def __getitem__(self, sphere_id: int) -> MedialSphere:
        return self._spheres[sphere_id]

    def __iter__(self):
        return iter(self.active())

    @property
    def n_total(self) -> int:
        return len(self._spheres)

    def active(self) -> List[MedialSphere]:
        return [s for s in self._spheres if s.is_active]

    def active_ids(self) -> List[int]:
        return [s.id for s in self._spheres if s.is_active]

    def find_duplicate(self, center: np.ndarray) -> Optional[int]:
        """Id of an active sphere closer than ``dup_eps`` to ``center``."""
        active = self.active()
        if not active or self.dup_eps <= 0:
            return None
        centers = np.array([s.center for s in active])
        dist = np.linalg.norm(centers - np.asarray(center, dtype=float), axis=1)
        k = int(np.argmin(dist))
        return active[k].id if dist[k] < self.dup_eps else None

    def add(self, sphere: MedialSphere) -> Optional[MedialSphere]:
        """Insert ``sphere`` under a fresh id; None if it duplicates an active one."""
        duplicate = self.find_duplicate(sphere.center)
        if duplicate is not None:
            logger.debug(f"Skipping sphere at {sphere.center.tolist()}: duplicates sphere {duplicate}")
            return None
        sphere.id = len(self._spheres)
        sphere.is_new = True
        sphere.is_deleted = False
        self._spheres.append(sphere)
        self._pending.add(sphere.id)
        return sphere

    def add_all(self, spheres: Iterable[MedialSphere]) -> List[MedialSphere]:
        """Insert a batch in order, skipping duplicates within the batch as well."""
        added = []
        for sphere in spheres:
            result = self.add(sphere)
            if result is not None:
                added.append(result)
        return added

    def delete(self, sphere_id: int) -> None:
        self._spheres[sphere_id].is_deleted = True
        self._pending.discard(sphere_id)

    def take_new(self) -> Set[int]:
        """Ids inserted since the last call; clears their ``is_new`` flag."""
        new = set(self._pending)
        for sphere_id in new:
            self._spheres[sphere_id].is_new = False
        self._pending.clear()
        return new

    def counts_by_kind(self) -> Dict[str, int]:
        counts = {kind.value: 0 for kind in SphereKind}
        for sphere in self.active():
            counts[sphere.kind.value] += 1
        return counts


def write_sph(spheres: Iterable[MedialSphere], path: PathLike, scale: float = 1.0, offset=None) -> None:
    """One line per sphere: ``id x y z r kind``."""
    offset = np.zeros(3) if offset is None else np.asarray(offset, dtype=float)
    lines = []
    for sphere in spheres:
        x, y, z = sphere.center / scale + offset
        lines.append(f"{sphere.id} {x:.17g} {y:.17g} {z:.17g} {sphere.radius / scale:.17g} {sphere.kind.value}")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_sph(path: PathLike) -> List[MedialSphere]:
    """Parse a ``.sph`` file written by ``write_sph``."""
    spheres = []
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        if len(tokens) != 6:
            raise ValueError(f"{path}:{number}: expected 'id x y z r kind'")
        spheres.append(MedialSphere(
            id=int(tokens[0]),
            center=np.array([float(t) for t in tokens[1:4]]),
            radius=float(tokens[4]),
            kind=SphereKind(tokens[5]),
            n_tangent=3 if tokens[5] == SphereKind.TN.value else 2,
            is_new=False,
        ))
    return spheres
