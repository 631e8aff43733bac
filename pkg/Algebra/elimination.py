import logging
from math import lcm
from fractions import Fraction




logger = logging.getLogger(__name__)


# Vectors are sparse dicts {coordinate: value}; zero entries are never stored.

PIVOTING_STRATEGIES = ('row', 'column')




def egcd(a, b):

    """
    Extended gcd for arbitrary signs.

    Returns:
    (g, s, t) with g = s*a + t*b and g > 0 (g = 0 only for a = b = 0).
    """

    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t




def axpy(y, a, x):

    """ y += a*x in place on sparse vectors. """

    if a == 0:
        return y
    for key, value in x.items():
        new = y.get(key, 0) + a * value
        if new == 0:
            y.pop(key, None)
        else:
            y[key] = new
    return y




def scale(x, a):
    if a == 0:
        return {}
    return {key: value * a for key, value in x.items()}




def combine(*terms):

    """ Sparse linear combination of (coefficient, vector) pairs. """

    out = {}
    for coefficient, vector in terms:
        axpy(out, coefficient, vector)
    return out




def to_dense(vector, length):
    dense = [0] * length
    for key, value in vector.items():
        dense[key] = value
    return dense




def to_sparse(values):
    return {i: v for i, v in enumerate(values) if v != 0}




def denominator_lcm(vectors):
    return lcm(*(Fraction(value).denominator for vector in vectors for value in vector.values()))




def is_integral(value):
    return Fraction(value).denominator == 1




def leading(vector, strategy):
    return min(vector) if strategy == 'row' else max(vector)




class RationalEchelon:

    """
    Incremental reduced echelon basis of a subspace of Q^n.

    Every stored row has a 1 at its pivot and zeros at all other pivots. With tracking
    enabled each row remembers the combination of inserted vectors it came from, and every
    inserted vector that reduced to zero leaves its combination in `relations` (together
    they form a basis of the relation space).
    """

    def __init__(self, strategy='row', track=False):
        if strategy not in PIVOTING_STRATEGIES:
            raise ValueError(f"Unknown pivoting strategy: {strategy}")
        self.strategy = strategy
        self.track = track
        self.rows = {}
        self.combos = {}
        self.relations = []


    @property
    def rank(self):
        return len(self.rows)


    @property
    def pivots(self):
        return sorted(self.rows)


    def reduce(self, vector):

        """
        Returns (residual, coefficients) with vector = residual + Σ coefficients[p]·rows[p]
        and residual zero on every pivot.
        """

        residual = {k: Fraction(v) for k, v in vector.items() if v != 0}
        coefficients = {}
        for pivot in [k for k in residual if k in self.rows]:
            c = residual.get(pivot, 0)
            if c:
                axpy(residual, -c, self.rows[pivot])
                coefficients[pivot] = c
        return residual, coefficients


    def add(self, vector, tag=None):
        residual, coefficients = self.reduce(vector)
        combo = {}
        if self.track:
            combo = {tag: Fraction(1)}
            for pivot, c in coefficients.items():
                axpy(combo, -c, self.combos[pivot])

        if not residual:
            if self.track:
                self.relations.append(combo)
            return None

        pivot = leading(residual, self.strategy)
        inv = 1 / residual[pivot]
        residual = scale(residual, inv)
        combo = scale(combo, inv)
        for other, row in self.rows.items():
            c = row.get(pivot, 0)
            if c:
                axpy(row, -c, residual)
                if self.track:
                    axpy(self.combos[other], -c, combo)
        self.rows[pivot] = residual
        self.combos[pivot] = combo
        return pivot


    def extend(self, vectors, tags=None):
        for i, vector in enumerate(vectors):
            self.add(vector, i if tags is None else tags[i])
        return self


    def residual(self, vector):
        return self.reduce(vector)[0]


    def contains(self, vector):
        return not self.reduce(vector)[0]


    def express(self, vector):

        """
        Writes a vector of the span as a combination of inserted vectors (by tag).
        Returns None when the vector is outside the span.
        """

        residual, coefficients = self.reduce(vector)
        if residual:
            return None
        out = {}
        for pivot, c in coefficients.items():
            axpy(out, c, self.combos[pivot])
        return out


    def complement(self, length):
        return [k for k in range(length) if k not in self.rows]




class IntegerEchelon:

    """
    Incremental echelon basis (Hermite style, not reduced above the pivots) of the lattice
    spanned by integer vectors, using unimodular Euclid steps only. Inserted vectors that
    reduce to zero leave their combination in `relations`; these form a Z-basis of the
    relation lattice of the inserted family.
    """

    def __init__(self, strategy='row', track=False):
        if strategy not in PIVOTING_STRATEGIES:
            raise ValueError(f"Unknown pivoting strategy: {strategy}")
        self.strategy = strategy
        self.track = track
        self.rows = {}
        self.combos = {}
        self.relations = []


    @property
    def rank(self):
        return len(self.rows)


    @property
    def pivots(self):
        return sorted(self.rows, reverse=(self.strategy == 'column'))


    def add(self, vector, tag=None):
        v = {k: int(x) for k, x in vector.items() if x != 0}
        combo = {tag: 1} if self.track else {}

        while v:
            c = leading(v, self.strategy)
            if c not in self.rows:
                if v[c] < 0:
                    v = scale(v, -1)
                    combo = scale(combo, -1)
                self.rows[c] = v
                self.combos[c] = combo
                return c

            p, pc = self.rows[c], self.combos[c]
            if v[c] % p[c] == 0:
                q = v[c] // p[c]
                axpy(v, -q, p)
                if self.track:
                    axpy(combo, -q, pc)
                continue

            g, s, t = egcd(p[c], v[c])
            a, b = v[c] // g, p[c] // g
            new_p = combine((s, p), (t, v))
            new_v = combine((a, p), (-b, v))
            if self.track:
                new_pc = combine((s, pc), (t, combo))
                combo = combine((a, pc), (-b, combo))
                self.combos[c] = new_pc
            self.rows[c] = new_p
            v = new_v

        if self.track:
            self.relations.append(combo)
        return None


    def extend(self, vectors, tags=None):
        for i, vector in enumerate(vectors):
            self.add(vector, i if tags is None else tags[i])
        return self


    def reduce(self, vector):

        """
        Integer reduction against the echelon rows.

        Returns:
        (residual, coefficients); the residual is empty exactly when the vector lies in
        the lattice.
        """

        v = {k: x for k, x in vector.items() if x != 0}
        coefficients = {}
        while v:
            c = leading(v, self.strategy)
            row = self.rows.get(c)
            if row is None:
                break
            value = v[c]
            if Fraction(value).denominator != 1 or value % row[c] != 0:
                break
            q = value // row[c]
            axpy(v, -q, row)
            coefficients[c] = coefficients.get(c, 0) + q
        return v, coefficients


    def rational_coordinates(self, vector):

        """ Coordinates over Q in the echelon rows, or None outside their span. """

        v = {k: Fraction(x) for k, x in vector.items() if x != 0}
        coefficients = {}
        while v:
            c = leading(v, self.strategy)
            row = self.rows.get(c)
            if row is None:
                return None
            q = v[c] / row[c]
            axpy(v, -q, row)
            coefficients[c] = q
        return coefficients


    def contains(self, vector):
        return not self.reduce(vector)[0]


    def express(self, vector):
        residual, coefficients = self.reduce(vector)
        if residual:
            return None
        out = {}
        for pivot, q in coefficients.items():
            axpy(out, q, self.combos[pivot])
        return out




def default_strategy():
    from django.conf import settings
    return getattr(settings, 'DELIGNE', {}).get('PIVOTING', 'row')
