import logging
import numpy as np
from dataclasses import dataclass
from django.core.exceptions import ValidationError




logger = logging.getLogger(__name__)

SAMPLE_SIZE = 64




@dataclass(frozen=True)
class NervePoint:

    """ A simplex of M sitting in the copy (g_1, ..., g_p) of G^p × M. """

    copy: tuple
    simplex: tuple

    @property
    def level(self):
        return len(self.copy)




def face_copy(group, copy, i):

    """ Group part of ∂_i on G^p: drop g_1, multiply g_i·g_{i+1}, or drop g_p. """

    p = len(copy)
    if not 0 <= i <= p or p == 0:
        raise ValidationError(f"Face ∂_{i} does not exist at level {p}", code='face_index')
    if i == 0:
        return copy[1:]
    if i == p:
        return copy[:-1]
    return copy[:i - 1] + (group.mul(copy[i - 1], copy[i]),) + copy[i + 1:]


def face_map(action, p, i):

    """
    ∂_i : G^p × M → G^{p-1} × M. Only the last face moves the M-coordinate, by g_p.
    """

    if not 0 <= i <= p or p == 0:
        raise ValidationError(f"Face ∂_{i} does not exist at level {p}", code='face_index')

    def apply(point):
        copy = face_copy(action.group, point.copy, i)
        simplex = action.act(point.copy[-1], point.simplex) if i == p else point.simplex
        return NervePoint(copy, simplex)

    return apply


def degeneracy_map(action, p, i):

    """ s_i : G^p × M → G^{p+1} × M inserts the identity at position i. """

    if not 0 <= i <= p:
        raise ValidationError(f"Degeneracy s_{i} does not exist at level {p}", code='face_index')
    e = action.group.identity

    def apply(point):
        return NervePoint(point.copy[:i] + (e,) + point.copy[i:], point.simplex)

    return apply




def _sample_points(action, p, rng):
    copies = action.group.tuples(p)
    if len(copies) > SAMPLE_SIZE:
        copies = [copies[k] for k in sorted(rng.choice(len(copies), SAMPLE_SIZE, replace=False))]
    simplices = list(action.space.facets) + [(v,) for v in range(action.space.n_vertices)]
    return [NervePoint(copy, simplex) for copy in copies for simplex in simplices]


def _expect(lhs, rhs, point, relation):
    if lhs != rhs:
        raise ValidationError(f"Relation {relation} fails at {point}: {lhs} ≠ {rhs}", code='simplicial_identities')


def check_relations(action, max_level=4, seed=0):

    """
    Verifies ∂_i∂_j = ∂_{j-1}∂_i (i < j), s_i s_j = s_{j+1} s_i (i ≤ j) and the mixed
    identities ∂_i s_j on sampled points of G^p × M for p ≤ max_level.

    Returns:
    dict: number of checked instances per relation family.
    """

    rng = np.random.default_rng(seed)
    counts = {'faces': 0, 'degeneracies': 0, 'mixed': 0}
    d, s = (lambda p, i: face_map(action, p, i)), (lambda p, i: degeneracy_map(action, p, i))
    for p in range(max_level + 1):
        for point in _sample_points(action, p, rng):
            for j in range(1, p + 1):
                for i in range(j):
                    if p >= 2:
                        _expect(d(p - 1, i)(d(p, j)(point)), d(p - 1, j - 1)(d(p, i)(point)), point, f"∂{i}∂{j}")
                        counts['faces'] += 1
            for j in range(p + 1):
                for i in range(j + 1):
                    _expect(s(p + 1, i)(s(p, j)(point)), s(p + 1, j + 1)(s(p, i)(point)), point, f"s{i}s{j}")
                    counts['degeneracies'] += 1
            for j in range(p + 1):
                for i in range(p + 2):
                    lhs = d(p + 1, i)(s(p, j)(point))
                    if i < j:
                        rhs = s(p - 1, j - 1)(d(p, i)(point))
                    elif i in (j, j + 1):
                        rhs = point
                    else:
                        rhs = s(p - 1, j)(d(p, i - 1)(point))
                    _expect(lhs, rhs, point, f"∂{i}s{j}")
                    counts['mixed'] += 1
    logger.debug(f"Simplicial identities verified for {action}: {counts}")
    return counts
