"""
Transformations that keep the competition graph complete: cloning a vertex,
lifting to larger size tuples, splitting a part, peeling low-indegree vertices
and normalizing to minimum indegree 2.

Every operation asserts completeness of its output instead of trusting the
argument that guarantees it.
"""
import logging
from typing import Sequence

from core.digraph import (
    MultipartiteTournament,
    canonical_tournament,
    check_sizes,
    first_non_competing_pair,
    induced_tournament,
    iter_bits,
    mask_of,
    validate,
)
from core.errors import ConstructionError, InvalidSizesError, PreconditionError

log = logging.getLogger(__name__)

NEW_PART = None


# ─────────────────────────────────────────────────────────────────────────────
# INTERNAL HELPERS
# ─────────────────────────────────────────────────────────────────────────────

def _require_complete(t: MultipartiteTournament, operation: str) -> None:
    pair = first_non_competing_pair(t.d)
    if pair is not None:
        raise PreconditionError(
            f"{operation} needs a complete competition graph; vertices {pair[0]} and {pair[1]} share no prey")


def _assert_complete(t: MultipartiteTournament, operation: str) -> MultipartiteTournament:
    violations = validate(t)
    if violations:
        raise ConstructionError(f"{operation} produced an invalid tournament: {violations[0]}")
    pair = first_non_competing_pair(t.d)
    if pair is not None:
        raise ConstructionError(
            f"{operation} lost completeness: vertices {pair[0]} and {pair[1]} share no prey")
    return t


def _labels(t: MultipartiteTournament) -> list[int]:
    return [t.part_of(v) for v in range(t.n)]


def _attach_vertex(labels: list[int], out: list[int], label: int, model: int, model_label: int) -> int:
    """
    Append a vertex with part label `label` that preys on everything `model`
    preys on. Arcs toward vertices not in the new vertex's part copy the
    model's orientation; arcs toward the model's own part (when the model sits
    in a different part) point away from the new vertex.
    Mutates `labels`/`out` and returns the new vertex index.
    """
    v = len(labels)
    v_out = 0
    for x in range(v):
        if labels[x] == label:
            continue
        if labels[x] == model_label and model_label != label:
            v_out |= 1 << x
        elif x != model and out[model] >> x & 1:
            v_out |= 1 << x
        else:
            out[x] |= 1 << v
    labels.append(label)
    out.append(v_out)
    return v


# ─────────────────────────────────────────────────────────────────────────────
# PUBLIC API
# ─────────────────────────────────────────────────────────────────────────────

def add_clone_vertex(
    t: MultipartiteTournament,
    model: int,
    target_part: int | None = NEW_PART,
    return_map: bool = False,
):
    """
    Add one vertex v whose out-set contains N+(model), either to an existing
    part or as a new singleton part (`target_part=None`).

    The result is re-sorted; with `return_map=True` the old -> new vertex map
    is returned as well (the new vertex is the one index not in the map).
    """
    if t.n < 2:
        raise PreconditionError("add_clone_vertex needs at least two vertices")
    if not 0 <= model < t.n:
        raise PreconditionError(f"model vertex {model} out of range for {t.n} vertices")
    if target_part is not NEW_PART and not 0 <= target_part < t.k:
        raise PreconditionError(f"part {target_part} out of range for {t.k} parts")
    _require_complete(t, "add_clone_vertex")

    labels = _labels(t)
    model_label = labels[model]
    label = t.k if target_part is NEW_PART else target_part
    if label < t.k and label != model_label and t.d.out[model] & t.parts.masks[label]:
        raise PreconditionError(
            f"model {model} preys on part {label}; a vertex added there cannot inherit those arcs")

    out = list(t.d.out)
    _attach_vertex(labels, out, label, model, model_label)
    result, relabel = canonical_tournament(labels, out)
    _assert_complete(result, "add_clone_vertex")
    log.debug("cloned vertex %d into part %s: K_%s -> K_%s", model, target_part, t.sizes, result.sizes)
    old_map = relabel[:t.n]
    return (result, old_map) if return_map else result


def lift(t: MultipartiteTournament, target_sizes: Sequence[int], return_map: bool = False):
    """
    Grow `t` to an orientation of K_{target_sizes}: existing parts are grown
    largest-first by cloning one of their own vertices, then singleton parts
    are appended (cloning vertex 0) and grown the same way.
    """
    target = check_sizes(target_sizes)
    if len(target) < t.k:
        raise InvalidSizesError(f"target {target} has fewer parts than {t.sizes}")
    for i, (have, want) in enumerate(zip(t.sizes, target)):
        if want < have:
            raise InvalidSizesError(f"target {target} is below {t.sizes} in coordinate {i}")
    _require_complete(t, "lift")

    labels = _labels(t)
    out = list(t.d.out)
    for i, want in enumerate(target):
        if i < t.k:
            model = t.parts.offsets[i]
            model_label = i
        else:
            model, model_label = 0, labels[0]
        grown = t.sizes[i] if i < t.k else 0
        while grown < want:
            v = _attach_vertex(labels, out, i, model, model_label)
            if grown == 0:
                # a fresh part is grown by cloning its first vertex
                model, model_label = v, i
            grown += 1

    result, relabel = canonical_tournament(labels, out)
    if result.sizes != target:
        raise ConstructionError(f"lift produced K_{result.sizes}, wanted K_{target}")
    _assert_complete(result, "lift")
    log.debug("lifted K_%s -> K_%s", t.sizes, target)
    return (result, relabel[:t.n]) if return_map else result


def split_part(
    t: MultipartiteTournament, part: int, sub_sizes: Sequence[int], return_map: bool = False
):
    """
    Split part `part` into its first `a` and last `b` vertices. Arcs between
    the two fragments run from the lower index to the higher.
    """
    if not 0 <= part < t.k:
        raise PreconditionError(f"part {part} out of range for {t.k} parts")
    if len(sub_sizes) != 2:
        raise PreconditionError("split_part takes exactly two fragment sizes")
    a, b = sub_sizes
    if a < 1 or b < 1:
        raise PreconditionError(f"fragment sizes must be positive, got ({a},{b})")
    if a + b != t.sizes[part]:
        raise PreconditionError(f"fragments ({a},{b}) do not add up to part size {t.sizes[part]}")
    _require_complete(t, "split_part")

    members = list(t.parts.part_range(part))
    first, second = members[:a], members[a:]
    labels = _labels(t)
    for v in second:
        labels[v] = t.k
    out = list(t.d.out)
    for x in first:
        for y in second:
            lo, hi = min(x, y), max(x, y)
            out[lo] |= 1 << hi

    result, relabel = canonical_tournament(labels, out)
    _assert_complete(result, "split_part")
    log.debug("split part %d of K_%s into (%d,%d): K_%s", part, t.sizes, a, b, result.sizes)
    return (result, relabel) if return_map else result


def peel_order(t: MultipartiteTournament) -> list[int]:
    """
    Vertices removed by repeatedly deleting the lowest-indexed vertex of
    indegree at most 1, in removal order (original labels).
    """
    if t.n < 2:
        raise PreconditionError("peeling needs at least two vertices")
    _require_complete(t, "peel_low_indegree")
    alive = mask_of(range(t.n))
    removed = []
    while True:
        victim = None
        for v in iter_bits(alive):
            indegree = sum(1 for u in iter_bits(alive) if t.d.out[u] >> v & 1)
            if indegree <= 1:
                victim = v
                break
        if victim is None:
            return removed
        alive &= ~(1 << victim)
        removed.append(victim)
        survivors = [t.d.out[u] & alive for u in iter_bits(alive)]
        for x, ox in enumerate(survivors):
            for oy in survivors[x + 1:]:
                if not ox & oy:
                    raise ConstructionError(f"removing vertex {victim} broke completeness")
        log.debug("peeled vertex %d", victim)


def peel_low_indegree(t: MultipartiteTournament, return_map: bool = False):
    """
    Fixed point of deleting indegree <= 1 vertices. Empty parts disappear, so
    the result can have fewer parts. `return_map=True` also returns, for each
    new vertex, its index in `t`.
    """
    removed = peel_order(t)
    if not removed:
        return (t, list(range(t.n))) if return_map else t
    result, kept = induced_tournament(t, set(range(t.n)) - set(removed))
    _assert_complete(result, "peel_low_indegree")
    return (result, kept) if return_map else result


def normalize_min_indegree(t: MultipartiteTournament) -> MultipartiteTournament:
    """
    An orientation of the same K_{sizes} with complete competition graph in
    which every vertex has indegree at least 2.

    Peel to the fixed point, then re-insert the removed vertices in reverse
    order: a vertex whose original part still has a member copies that
    member's neighborhoods; otherwise it copies the lowest surviving vertex
    and preys on the whole of that vertex's part.
    """
    if t.k < 3:
        raise PreconditionError(
            f"normalization needs at least three parts; no {t.k}-partite tournament has a complete competition graph")
    removed = peel_order(t)
    if not removed:
        return t

    labels = _labels(t)
    present = mask_of(range(t.n)) & ~mask_of(removed)
    out = [t.d.out[v] & present if present >> v & 1 else 0 for v in range(t.n)]
    for v in reversed(removed):
        same_part = t.parts.masks[labels[v]] & present
        if same_part:
            model = (same_part & -same_part).bit_length() - 1
        else:
            model = (present & -present).bit_length() - 1
        model_part = t.parts.masks[labels[model]]
        v_out = 0
        for x in iter_bits(present & ~t.parts.masks[labels[v]]):
            if model_part >> x & 1 or out[model] >> x & 1:
                v_out |= 1 << x
            else:
                out[x] |= 1 << v
        out[v] = v_out
        present |= 1 << v
        log.debug("re-inserted vertex %d modelled on %d", v, model)

    result = MultipartiteTournament.from_out_masks(t.sizes, out)
    _assert_complete(result, "normalize_min_indegree")
    low = [v for v in range(result.n) if result.d.in_degree(v) < 2]
    if low:
        raise ConstructionError(f"normalization left vertex {low[0]} with indegree < 2")
    return result
