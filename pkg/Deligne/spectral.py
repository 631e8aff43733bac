import logging
from dataclasses import dataclass, field
from Algebra.modules import MixedModule, Subquotient
from Algebra.mixed import MixedSubgroup
from Algebra.cohomology import kernel, cohomology_at
from Algebra.exceptions import StructuralError
from Deligne.assembly import ModelSpec
from Deligne.engine import assemble




logger = logging.getLogger(__name__)




class LevelFiltration:

    """
    F^p = cells of level ≥ p in the total complex. Z_r^p(n) = {x ∈ F^p C^n : dx ∈ F^{p+r}}
    and E_r^p(n) = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}).
    """

    def __init__(self, assembly):
        self.assembly = assembly
        self._cycles, self._pages = {}, {}


    def coordinates(self, n, lo, hi=None):
        labels = self.assembly.space(n).labels
        return [k for k, cell in enumerate(labels) if cell.level >= lo and (hi is None or cell.level < hi)]


    def cycles(self, r, p, n):

        """ Z_r^p(n) as a subgroup of C^n. Below level 0 the filtration is everything. """

        lo, hi = max(p, 0), p + r
        key = (lo, hi, n)
        if key in self._cycles:
            return self._cycles[key]
        space = self.assembly.space(n)
        source = self.coordinates(n, lo)
        targets = self.coordinates(n + 1, lo, hi) if hi > lo else []
        if targets:
            f = self.assembly.differential(n).restrict(source, targets)
            generators = kernel(f).embed(space, source)
        else:
            generators = MixedSubgroup(
                space,
                tuple(space.unit(k) for k in source if space.is_z(k)),
                tuple(space.unit(k) for k in source if not space.is_z(k)),
            )
        self._cycles[key] = generators
        return generators


    def page(self, r, p, n):

        """ E_r^p in total degree n, as a Subquotient of C^n. """

        key = (r, p, n)
        if key in self._pages:
            return self._pages[key]
        numerator = self.cycles(r, p, n)
        below = self.cycles(r - 1, p + 1, n)
        incoming = self.cycles(r - 1, p - r + 1, n - 1) if n >= 1 else None
        denominator = below
        if incoming is not None:
            denominator = denominator + incoming.image(self.assembly.differential(n - 1))
        page = Subquotient(numerator, denominator)
        self._pages[key] = page
        return page




@dataclass
class SpectralPage:

    """
    E_r^{p,q} of the level filtration, in Deligne degrees: E_r^{p,q} contributes to
    H^{p+q}(G^•×M, F̄(N)), which sits in total degree p + q + 1.
    """

    r: object
    table: dict
    filtration: object = field(default=None, repr=False)
    horizon: int = field(default=None, repr=False)

    def entry(self, p, q):
        return self.table.get((p, q), MixedModule())


    def _subquotient(self, p, q):
        return self.filtration.page(self.horizon if self.r == 'inf' else self.r, p, p + q + 1)


    def generators(self, p, q):
        return self._subquotient(p, q).generators


    def differential(self, p, q, coordinates):

        """
        d_r of the class with the given ClassCoordinates in E_r^{p,q}: lift to Z_r^p, apply
        the total differential and decode in E_r^{p+r, q-r+1}.
        """

        if self.r == 'inf':
            raise StructuralError("E_∞ has no differential")
        source = self._subquotient(p, q)
        x = source.lift(coordinates)
        y = self.filtration.assembly.differential(p + q + 1).apply(x)
        return self.filtration.page(self.r, p + self.r, p + q + 2).decode(y)


    def differential_squares_to_zero(self, p, q):
        for coordinates in self._unit_coordinates(p, q):
            image = self.differential(p, q, coordinates)
            target = self.filtration.page(self.r, p + self.r, p + q + 2)
            if not image.is_zero:
                twice = self.filtration.assembly.differential(p + q + 2).apply(target.lift(image))
                if not self.filtration.page(self.r, p + 2 * self.r, p + q + 3).decode(twice).is_zero:
                    return False
        return True


    def _unit_coordinates(self, p, q):
        sub = self._subquotient(p, q)
        for representative in sub.representatives():
            yield sub.decode(representative)


    def as_table(self):
        return {f"{p},{q}": str(module) for (p, q), module in sorted(self.table.items())}




@dataclass
class SpectralSequence:
    pages: list
    infinity: SpectralPage
    totals: dict
    window: tuple
    N: int

    def page(self, r):
        return self.pages[r - 1]


    def is_consistent(self, m):

        """
        The graded pieces of E_∞ in Deligne degree m add up to H^m: additive invariants
        agree, and torsion orders multiply when every piece is finite.
        """

        pieces = [self.infinity.entry(p, m - p) for p in range(0, m + 2)]
        total = self.totals[m]
        sums = [sum(piece.additive_invariants()[k] for piece in pieces) for k in (0, 1)]
        if tuple(sums) != total.additive_invariants():
            return False
        if all(not (x.rank_z or x.rank_q or x.rank_qz) for x in pieces + [total]):
            order = 1
            for piece in pieces:
                order *= piece.torsion_order
            return order == total.torsion_order
        return True




def spectral_sequence(action, N, max_page=2, window=(0, 2), cover=None):

    """
    Pages E_1..E_max_page and E_∞ of the filtration by group level for Deligne degrees in
    `window`. E_1^{p,q} = H^q(G^p×M, F̄(N)) with d_1 = Σ(-1)^i ∂_i*.
    """

    m_lo, m_hi = window
    spec = ModelSpec(action, N, (m_lo, m_hi + 2), cover=cover)
    assembly = assemble(spec)
    filtration = LevelFiltration(assembly)
    horizon = m_hi + 4

    def table(r):
        entries = {}
        for m in range(m_lo, m_hi + 1):
            for p in range(0, m + 2):
                entries[(p, m - p)] = filtration.page(r, p, m + 1).module
        return entries

    pages = [SpectralPage(r, table(r), filtration, horizon) for r in range(1, max_page + 1)]
    infinity = SpectralPage('inf', table(horizon), filtration, horizon)
    complex_ = assembly.to_mixed_complex(max(m_lo, 0), m_hi + 2)
    totals = {m: cohomology_at(complex_, m + 1).module for m in range(m_lo, m_hi + 1)}
    logger.info(f"Spectral sequence of {action} for N={N}, pages 1..{max_page}")
    return SpectralSequence(pages, infinity, totals, window, N)
