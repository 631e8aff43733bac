import re
import logging
from fractions import Fraction
from dataclasses import dataclass, field
from Algebra.exceptions import StructuralError
from Algebra.matrices import IntMatrix, smith_normal_form
from Algebra.elimination import (
    RationalEchelon, IntegerEchelon, axpy, scale, to_sparse, denominator_lcm,
    leading, default_strategy,
)




logger = logging.getLogger(__name__)




@dataclass(frozen=True)
class MixedModule:

    """
    Canonical form Z^rank_z ⊕ Q^rank_q ⊕ (Q/Z)^rank_qz ⊕ Z/d1 ⊕ Z/d2 ⊕ ... with d1 | d2 | ... .
    """

    rank_z: int = 0
    rank_q: int = 0
    rank_qz: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        torsion = tuple(int(d) for d in self.torsion if d != 1)
        if any(d <= 1 for d in torsion):
            raise StructuralError(f"Torsion divisors must exceed 1: {self.torsion}")
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            raise StructuralError(f"Torsion divisors must form a divisibility chain: {self.torsion}")
        object.__setattr__(self, 'torsion', torsion)


    @classmethod
    def parse(cls, text):

        """ Inverse of str(): "Z^2 + Q/Z + Z/2" -> MixedModule(2, 0, 1, (2,)). """

        text = text.strip()
        if text == '0':
            return cls()
        counts = {'Z': 0, 'Q': 0, 'Q/Z': 0}
        torsion = []
        for part in (p.strip() for p in text.split('+')):
            match = re.fullmatch(r'\(?(Z|Q|Q/Z)\)?(?:\^(\d+))?', part)
            cyclic = re.fullmatch(r'Z/(\d+)', part)
            if cyclic:
                torsion.append(int(cyclic.group(1)))
            elif match:
                counts[match.group(1)] += int(match.group(2) or 1)
            else:
                raise ValueError(f"Cannot parse module summand '{part}'")
        return cls(counts['Z'], counts['Q'], counts['Q/Z'], tuple(sorted(torsion)))


    def __str__(self):
        parts = []
        for name, count in (('Z', self.rank_z), ('Q', self.rank_q), ('(Q/Z)', self.rank_qz)):
            if count == 1:
                parts.append(name.strip('()'))
            elif count > 1:
                parts.append(f"{name}^{count}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return ' + '.join(parts) if parts else '0'


    @property
    def is_zero(self):
        return not (self.rank_z or self.rank_q or self.rank_qz or self.torsion)


    @property
    def torsion_order(self):
        order = 1
        for d in self.torsion:
            order *= d
        return order


    def additive_invariants(self):

        """
        (rank of A⊗Q, rank_z - rank_qz). Both are additive along short exact sequences,
        so they are the numbers a filtration's graded pieces must add up to.
        """

        return (self.rank_z + self.rank_q, self.rank_z - self.rank_qz)


    def __add__(self, other):
        torsion = _invariant_factors(list(self.torsion) + list(other.torsion))
        return MixedModule(
            self.rank_z + other.rank_z, self.rank_q + other.rank_q,
            self.rank_qz + other.rank_qz, torsion,
        )




def _invariant_factors(orders):
    if not orders:
        return ()
    _, S, _ = smith_normal_form(IntMatrix([[d if i == j else 0 for j in range(len(orders))] for i, d in enumerate(orders)]))
    return tuple(d for d in S.diagonal() if d > 1)




class SubgroupBasis:

    """
    Coordinates for N = ⟨z_gens⟩_Z + ⟨q_gens⟩_Q: a rational basis of the divisible part V
    and a lattice basis n_k of the part transversal to V. Every element of N is uniquely
    Σ λ_k n_k + Σ μ_p v_p with λ integral and μ rational.
    """

    def __init__(self, subgroup, strategy=None):
        self.subgroup = subgroup
        self.space = subgroup.space
        strategy = strategy or default_strategy()

        self.rational = RationalEchelon(strategy, track=True).extend(subgroup.q_gens)
        reduced = [self._transversal(g) for g in subgroup.z_gens]
        self.scale = denominator_lcm(reduced)
        self.lattice = IntegerEchelon(strategy, track=True).extend(
            [scale(u, self.scale) for u in reduced]
        )

        self.lattice_pivots = self.lattice.pivots
        self.rational_pivots = self.rational.pivots
        self.lattice_vectors = []
        for pivot in self.lattice_pivots:
            vector = {}
            for tag, c in self.lattice.combos[pivot].items():
                axpy(vector, c, subgroup.z_gens[tag])
            self.lattice_vectors.append(vector)


    @property
    def lattice_rank(self):
        return len(self.lattice_pivots)


    @property
    def rational_rank(self):
        return len(self.rational_pivots)


    def _transversal(self, vector):
        nZ = self.space.nZ
        z_part = {k: v for k, v in vector.items() if k < nZ}
        q_part = self.rational.residual({k: v for k, v in vector.items() if k >= nZ})
        z_part.update(q_part)
        return z_part


    def coordinates(self, vector):

        """ (λ, μ) as dense lists, or None when the vector is not in N. """

        u = scale(self._transversal(vector), self.scale)
        if any(Fraction(x).denominator != 1 for x in u.values()):
            return None
        residual, coefficients = self.lattice.reduce(u)
        if residual:
            return None
        lam = [int(coefficients.get(p, 0)) for p in self.lattice_pivots]
        rest = dict(vector)
        for k, c in enumerate(lam):
            axpy(rest, -c, self.lattice_vectors[k])
        if any(key < self.space.nZ for key in rest):
            return None
        residual, mu = self.rational.reduce(rest)
        if residual:
            return None
        return lam, [mu.get(p, Fraction(0)) for p in self.rational_pivots]


    def section(self, mu):

        """ Σ μ_p v_p for μ given as a sparse dict over positions of rational_pivots. """

        out = {}
        for position, c in mu.items():
            axpy(out, c, self.rational.rows[self.rational_pivots[position]])
        return out


    def element(self, lam, mu=None):
        out = self.section(mu or {})
        for k, c in enumerate(lam):
            axpy(out, c, self.lattice_vectors[k])
        return out


    def express(self, vector):

        """
        Writes a vector of N through the generators.

        Returns:
        (integer coefficients of z_gens, rational coefficients of q_gens) as sparse dicts,
        or None when the vector is not in N.
        """

        coordinates = self.coordinates(vector)
        if coordinates is None:
            return None
        lam, mu = coordinates
        z_coefficients = {}
        for k, c in enumerate(lam):
            axpy(z_coefficients, c, self.lattice.combos[self.lattice_pivots[k]])
        q_coefficients = {}
        for k, c in enumerate(mu):
            axpy(q_coefficients, c, self.rational.combos[self.rational_pivots[k]])
        return z_coefficients, q_coefficients


    def contains_line(self, vector):

        """ Whether Q·vector ⊆ N. """

        if any(k < self.space.nZ for k in vector):
            return False
        return self.rational.contains(vector)




@dataclass(frozen=True)
class Generator:
    name: str
    kind: str
    order: int = 0




@dataclass
class ClassCoordinates:

    """
    Decoded class: integer coordinates on the Z summands, rational ones on Q, the lifts
    of the Q/Z coordinates before reduction mod 1 (`divisible_raw`) and residues on the
    cyclic summands.
    """

    free: list = field(default_factory=list)
    rational: list = field(default_factory=list)
    divisible_raw: list = field(default_factory=list)
    torsion: list = field(default_factory=list)

    @property
    def divisible(self):
        return [x - (x.numerator // x.denominator) for x in map(Fraction, self.divisible_raw)]


    def values(self):
        return list(self.free) + list(self.rational) + self.divisible + list(self.torsion)


    @property
    def is_zero(self):
        return not any(self.values())


    def nonzero(self, generators):
        return [(g, v) for g, v in zip(generators, self.values()) if v]




class Subquotient:

    """
    The group N/H for subgroups H ⊆ N of one mixed space, brought to canonical form.

    The Q-part of H is divided out first, then the integer image lattice of H in the
    lattice coordinates of N is put in Smith form; what H leaves behind inside the
    divisible part is a lattice J whose quotient contributes the Q/Z summands.
    """

    def __init__(self, numerator, denominator, strategy=None):
        if numerator.space != denominator.space:
            raise StructuralError("Numerator and denominator live in different spaces")
        self.strategy = strategy or default_strategy()
        self.numerator = numerator
        self.denominator = denominator
        self.N = SubgroupBasis(numerator, self.strategy)
        a, v = self.N.lattice_rank, self.N.rational_rank

        self.W = RationalEchelon(self.strategy)
        for g in denominator.q_gens:
            coordinates = self.N.coordinates(g)
            if coordinates is None or any(coordinates[0]):
                raise StructuralError("Denominator is not contained in the numerator")
            self.W.add(to_sparse(coordinates[1]))

        columns = []
        for g in denominator.z_gens:
            coordinates = self.N.coordinates(g)
            if coordinates is None:
                raise StructuralError("Denominator is not contained in the numerator")
            lam, mu = coordinates
            columns.append((to_sparse(lam), self.W.residual(to_sparse(mu))))

        image = IntegerEchelon(self.strategy, track=True).extend([lam for lam, _ in columns])
        pivots = image.pivots
        r = len(pivots)

        periods = []
        for relation in image.relations:
            vector = {}
            for t, c in relation.items():
                axpy(vector, c, columns[t][1])
            if vector:
                periods.append(vector)
        j_scale = denominator_lcm(periods)
        lattice = IntegerEchelon(self.strategy).extend([scale(x, j_scale) for x in periods])
        self.j_pivots = lattice.pivots
        self.j_rows = {p: scale(lattice.rows[p], Fraction(1, j_scale)) for p in self.j_pivots}
        self.f_positions = [k for k in range(v) if k not in self.W.rows and k not in lattice.rows]

        if r:
            B = IntMatrix.zeros(a, r)
            for k, p in enumerate(pivots):
                for position, value in image.rows[p].items():
                    B.array[position, k] = value
            U, S, V, U_inv = smith_normal_form(B, with_inverse=True)
            self.U = U.tolist()
            self.U_inv = U_inv.tolist()
            self.divisors = S.diagonal()
            V = V.tolist()
        else:
            self.U = IntMatrix.identity(a).tolist()
            self.U_inv = self.U
            self.divisors = []
            V = []

        self.rank = r
        self.shifts = []
        for i, s in enumerate(self.divisors):
            combination = {}
            for k, p in enumerate(pivots):
                axpy(combination, V[k][i], image.combos[p])
            shift = {}
            for t, c in combination.items():
                axpy(shift, c, columns[t][1])
            self.shifts.append(scale(shift, Fraction(1, s)))

        self.module = MixedModule(
            rank_z=a - r,
            rank_q=len(self.f_positions),
            rank_qz=len(self.j_pivots),
            torsion=tuple(s for s in self.divisors if s > 1),
        )
        self.generators = self._name_generators()
        logger.debug(f"Subquotient of lattice rank {a}, rational rank {v}: {self.module}")


    def _name_generators(self):
        names = []
        names += [Generator(f"Z#{k + 1}", 'Z') for k in range(self.module.rank_z)]
        names += [Generator(f"Q#{k + 1}", 'Q') for k in range(self.module.rank_q)]
        names += [Generator(f"Q/Z#{k + 1}", 'Q/Z') for k in range(self.module.rank_qz)]
        names += [Generator(f"Z/{s}#{k + 1}", 'torsion', s) for k, s in enumerate(self.module.torsion)]
        return names


    def _column(self, i):
        return [row[i] for row in self.U_inv]


    def _split(self, vector):

        """ Coefficients of a vector of the free part in the basis J ∪ {unit vectors}. """

        rest = dict(vector)
        periods, units = {}, {}
        while rest:
            c = leading(rest, self.strategy)
            row = self.j_rows.get(c)
            if row is not None:
                coefficient = rest[c] / row[c]
                axpy(rest, -coefficient, row)
                periods[c] = coefficient
            else:
                units[c] = rest.pop(c)
        return periods, units


    def decode(self, vector, reduce=True):

        """
        Class of an element of the numerator in generator coordinates. With reduce=False the
        cyclic residues are returned unreduced, which is what lifting automorphisms needs.

        Raises:
        StructuralError: if the vector is not in the numerator.
        """

        coordinates = self.N.coordinates(vector)
        if coordinates is None:
            raise StructuralError("Element does not lie in the numerator subgroup")
        lam, mu = coordinates
        w = [sum(u * x for u, x in zip(row, lam)) for row in self.U]
        rest = self.W.residual(to_sparse(mu))
        for i in range(self.rank):
            axpy(rest, -w[i], self.shifts[i])
        periods, units = self._split(rest)

        return ClassCoordinates(
            free=w[self.rank:],
            rational=[units.get(k, Fraction(0)) for k in self.f_positions],
            divisible_raw=[periods.get(p, Fraction(0)) for p in self.j_pivots],
            torsion=[w[i] % s if reduce else w[i] for i, s in enumerate(self.divisors) if s > 1],
        )


    def lift(self, coordinates):

        """ An element of the numerator whose class has the given coordinates. """

        lam = [0] * self.N.lattice_rank
        mu = {}
        for k, value in enumerate(coordinates.free):
            column = self._column(self.rank + k)
            lam = [x + value * c for x, c in zip(lam, column)]
        for k, value in zip(self.f_positions, coordinates.rational):
            axpy(mu, value, {k: Fraction(1)})
        for p, value in zip(self.j_pivots, coordinates.divisible_raw):
            axpy(mu, value, self.j_rows[p])
        torsion_indices = [i for i, s in enumerate(self.divisors) if s > 1]
        for i, value in zip(torsion_indices, coordinates.torsion):
            column = self._column(i)
            lam = [x + value * c for x, c in zip(lam, column)]
            axpy(mu, value, self.shifts[i])
        return self.N.element(lam, mu)


    def representatives(self):

        """
        One element per generator. Q/Z summands are represented by their element of
        order two.
        """

        out = []
        module = self.module
        sizes = (module.rank_z, module.rank_q, module.rank_qz, len(module.torsion))
        for block, size in enumerate(sizes):
            for k in range(size):
                parts = [[0] * module.rank_z, [Fraction(0)] * module.rank_q,
                         [Fraction(0)] * module.rank_qz, [0] * len(module.torsion)]
                parts[block][k] = Fraction(1, 2) if block == 2 else 1
                out.append(self.lift(ClassCoordinates(*parts)))
        return out
