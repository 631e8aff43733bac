import logging
from itertools import product
from fractions import Fraction
from dataclasses import dataclass
from Algebra.modules import ClassCoordinates
from Deligne.group_cohomology import bar_cohomology, trivial_module
from Geometry.cocycles import group_cochain_cocycle
from Geometry.classify import GeometricClassifier




logger = logging.getLogger(__name__)




@dataclass
class TwistOutcome:
    twisted: object
    before: object
    after: object

    @property
    def changed(self):
        return self.before != self.after




def twist_gerbe(action, cocycle, values):

    """
    Multiplies the equivariance isomorphism of a gerbe by a T-valued group 2-cocycle γ,
    given by rational lifts {(g, h): x}. The h-component moves by γ and the integer
    witnesses on level 3 are recomputed.

    Raises:
    PreconditionError: if γ is not a cocycle mod Z, or the gerbe cocycle is invalid.
    """

    classifier = GeometricClassifier(action, 'gerbe')
    before = classifier.classify(cocycle)
    twisted = cocycle + group_cochain_cocycle('gerbe', action, values)
    after = classifier.classify(twisted)
    logger.info(f"Twist moved the gerbe class from {before.as_dict()['coordinates']} to {after.as_dict()['coordinates']}")
    return TwistOutcome(twisted, before, after)




def discrete_torsion(group):

    """ H^2(G; Q/Z) with its bar-complex decoding data. """

    return bar_cohomology(trivial_module(group, 'Q/Z'), 2)


def twist_values(data, coordinates):

    """ The rational lifts {(g, h): x} of the group 2-cocycle whose class has `coordinates`. """

    layout = data.layouts[2]
    index = layout.index()
    vector = data.cohomology.lift(coordinates)
    values = {}
    for (p, copy, q), k in index.items():
        if p == 2 and q == 0:
            part = layout.sum.project(k, vector)
            if part.get(0):
                values[copy] = Fraction(part[0])
    return values


def twist_orbit(action, cocycle, bound=None):

    """
    The classes reachable from a gerbe cocycle by twisting with constant group 2-cocycles:
    one representative per class of H^2(G; Q/Z), the Q/Z summands sampled at multiples of
    1/bound.
    """

    data = discrete_torsion(action.group)
    module = data.module
    ranges = [[Fraction(k, bound or 1) for k in range(bound or 1)]] * module.rank_qz
    ranges += [range(s) for s in module.torsion]
    classifier = GeometricClassifier(action, 'gerbe')
    orbit = set()
    for choice in product(*ranges):
        coordinates = ClassCoordinates(
            divisible_raw=list(choice[:module.rank_qz]),
            torsion=list(choice[module.rank_qz:]),
        )
        values = twist_values(data, coordinates)
        orbit.add(classifier.classify(cocycle + group_cochain_cocycle('gerbe', action, values)))
    logger.info(f"Twist orbit of size {len(orbit)} over H^2({action.group.name}; Q/Z) = {module}")
    return orbit
