import logging
from functools import lru_cache
from dataclasses import dataclass, field
from django.conf import settings
from Algebra.cohomology import cohomology_at, is_coboundary, Witness
from Algebra.exceptions import PreconditionError
from Simplicial.groups import trivial_group
from Simplicial.actions import SimplicialAction
from Deligne.assembly import ModelSpec, DeligneAssembly, TripleCochain




logger = logging.getLogger(__name__)

CONVENTIONS = {
    'degree_shift': 'H^m(G^•×M, F̄(N)) is computed as H^{m+1} of the total complex of the Z(N+1)-model',
    'coefficients': 'T is modelled by Q/Z and R by Q',
    'forms': 'q-forms on a star are rational simplicial q-cochains on the closed star',
}




@lru_cache(maxsize=64)
def _assembly(action, N, truncation, cover, top_slot, sign_convention, max_dimension):
    return DeligneAssembly(ModelSpec(action, N, (0, truncation - 2), truncation, cover, top_slot))


def assemble(spec):

    """ Cached DeligneAssembly for a ModelSpec (keyed by everything that changes the matrices). """

    return _assembly(
        spec.action, spec.N, spec.truncation, spec.cover, spec.top_slot,
        settings.DELIGNE.get('SIGN_CONVENTION', 'standard'), settings.DELIGNE.get('MAX_DIMENSION', 6000),
    )




@dataclass
class CohomologyResult:

    """
    H^m(G^•×M, F̄(N)) in the model: canonical module, named generators and representative
    D-cocycles of total degree m + 1.
    """

    degree: int
    N: int
    group: object
    generators: list
    representatives: list
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))
    cohomology: object = field(default=None, repr=False)
    assembly: object = field(default=None, repr=False)
    complex_: object = field(default=None, repr=False)

    @property
    def total_degree(self):
        return self.degree + 1


    def _vector(self, cochain):
        if cochain.degree != self.total_degree:
            raise PreconditionError(
                f"Expected a cochain of total degree {self.total_degree}, got {cochain.degree}", code='degree'
            )
        return cochain.to_vector(self.assembly)


    def is_cocycle(self, cochain):
        return self.assembly.apply_D(cochain).is_zero()


    def decode(self, cochain):

        """
        Class coordinates of a D-cocycle.

        Raises:
        PreconditionError: if D(cochain) ≠ 0.
        """

        if not self.is_cocycle(cochain):
            raise PreconditionError("Not a cocycle of the total complex", code='not_cocycle')
        return self.cohomology.decode(self._vector(cochain))


    def lift(self, coordinates):
        return TripleCochain.from_vector(self.assembly, self.total_degree, self.cohomology.lift(coordinates))


    def is_coboundary(self, cochain):

        """
        Returns:
        Witness whose cochain is a TripleCochain x with D x = cochain, or a Certificate.
        """

        verdict = is_coboundary(self.complex_, self.total_degree, self._vector(cochain), self.cohomology)
        if isinstance(verdict, Witness):
            return Witness(TripleCochain.from_vector(self.assembly, self.degree, verdict.cochain))
        return verdict


    def timing(self):
        return {str(n): dict(c) for n, c in sorted(self.assembly.counters.items())}




def equivariant_deligne(action, N, m, cover=None, top_slot=None):

    """
    H^m(G^•×M, F̄(N)) for a finite group acting simplicially.

    Raises:
    ResourceLimitExceeded: when a total degree is larger than DELIGNE['MAX_DIMENSION'].
    """

    spec = ModelSpec(action, N, (m, m), cover=cover, top_slot=top_slot)
    assembly = assemble(spec)
    complex_ = assembly.to_mixed_complex(m, m + 2)
    group = cohomology_at(complex_, m + 1)
    representatives = [TripleCochain.from_vector(assembly, m + 1, r) for r in group.representatives]
    logger.info(f"H^{m}(F̄({N})) of {action}: {group.module}")
    return CohomologyResult(
        degree=m,
        N=N,
        group=group.module,
        generators=group.generators,
        representatives=representatives,
        cohomology=group,
        assembly=assembly,
        complex_=complex_,
    )




def ordinary_deligne(space, N, m, cover=None):

    """ H^m(M, F(N)): the same engine with the trivial group. """

    return equivariant_deligne(SimplicialAction.trivial(trivial_group(), space), N, m, cover)
