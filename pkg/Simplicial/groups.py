import logging
from itertools import product
from django.core.exceptions import ValidationError




logger = logging.getLogger(__name__)




class FiniteGroup:

    """
    A finite group given by its multiplication table: table[g][h] is the index of g·h.
    Associativity, the identity and inverses are verified on construction.
    """

    def __init__(self, labels, table, name=None):
        self.labels = tuple(labels)
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.name = name or f"G{len(self.labels)}"
        n = len(self.labels)
        if n == 0 or len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValidationError(f"Multiplication table must be {n}x{n}", code='shape')
        if any(not 0 <= x < n for row in self.table for x in row):
            raise ValidationError("Multiplication table leaves the group", code='closure')

        identity = [e for e in range(n) if all(self.table[e][g] == g == self.table[g][e] for g in range(n))]
        if not identity:
            raise ValidationError("No identity element in the table", code='identity')
        self.identity = identity[0]

        for a, b, c in product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise ValidationError(
                    f"({self.labels[a]}·{self.labels[b]})·{self.labels[c]} ≠ "
                    f"{self.labels[a]}·({self.labels[b]}·{self.labels[c]})",
                    code='associativity',
                )

        self.inverses = []
        for g in range(n):
            inverse = [h for h in range(n) if self.table[g][h] == self.identity]
            if not inverse:
                raise ValidationError(f"{self.labels[g]} has no inverse", code='inverse')
            self.inverses.append(inverse[0])
        self.inverses = tuple(self.inverses)


    @property
    def order(self):
        return len(self.labels)


    @property
    def elements(self):
        return range(self.order)


    def mul(self, *elements):
        result = self.identity
        for g in elements:
            result = self.table[result][g]
        return result


    def inv(self, g):
        return self.inverses[g]


    def tuples(self, p):

        """ G^p in lexicographic order. """

        return list(product(range(self.order), repeat=p))


    def is_trivial(self):
        return self.order == 1


    def is_abelian(self):
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)


    def relabel(self, automorphism):

        """ Checks that `automorphism` (list g -> φ(g)) is an automorphism and returns it. """

        phi = list(automorphism)
        if sorted(phi) != list(self.elements):
            raise ValidationError("Not a bijection of the group", code='homomorphism')
        for a in self.elements:
            for b in self.elements:
                if phi[self.table[a][b]] != self.table[phi[a]][phi[b]]:
                    raise ValidationError("Not a homomorphism", code='homomorphism')
        return phi


    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"




def cyclic_group(n):
    if n < 1:
        raise ValidationError(f"Cyclic group order must be positive, got {n}", code='preset')
    return FiniteGroup([str(k) for k in range(n)], [[(a + b) % n for b in range(n)] for a in range(n)], f"Z/{n}")




def klein_four_group():
    elements = [(0, 0), (1, 0), (0, 1), (1, 1)]
    index = {e: k for k, e in enumerate(elements)}
    table = [[index[((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)] for b in elements] for a in elements]
    return FiniteGroup(['e', 'a', 'b', 'ab'], table, 'Z/2xZ/2')




def trivial_group():
    return FiniteGroup(['e'], [[0]], 'trivial')




def symmetric_group(n):
    from itertools import permutations
    elements = list(permutations(range(n)))
    index = {p: k for k, p in enumerate(elements)}
    table = [[index[tuple(a[b[i]] for i in range(n))] for b in elements] for a in elements]
    return FiniteGroup([''.join(map(str, p)) for p in elements], table, f"S{n}")




def group_preset(name):

    """
    'trivial', 'klein4', 'cyclic:n' or 'symmetric:n'.

    Raises:
    ValidationError: code 'preset' for unknown names.
    """

    if name == 'trivial':
        return trivial_group()
    if name == 'klein4':
        return klein_four_group()
    kind, _, argument = name.partition(':')
    if kind in ('cyclic', 'symmetric') and argument.isdigit():
        return cyclic_group(int(argument)) if kind == 'cyclic' else symmetric_group(int(argument))
    raise ValidationError(f"Unknown group preset {name!r}", code='preset')
