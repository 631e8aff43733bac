import logging
from collections import deque
from django.core.exceptions import ValidationError
from Simplicial.cochains import permutation_sign




logger = logging.getLogger(__name__)




class SimplicialAction:

    """
    Left action of a FiniteGroup on a SimplicialComplex by vertex permutations:
    perms[g][v] = g·v, perms[e] = id and perms[gh] = perms[g]∘perms[h].
    Pulling cochains back along g gives the right action used by every bar complex.
    """

    def __init__(self, group, space, perms):
        self.group = group
        self.space = space
        self.perms = tuple(tuple(int(v) for v in perm) for perm in perms)
        self._covers = {}


    @classmethod
    def trivial(cls, group, space):
        identity = tuple(range(space.n_vertices))
        return cls(group, space, [identity] * group.order)


    @classmethod
    def from_generators(cls, group, space, generators):

        """
        Extends {group element: vertex permutation} multiplicatively to the whole group.

        Raises:
        ValidationError: code 'homomorphism' when the generators do not generate the
            group or two products disagree.
        """

        n = space.n_vertices
        known = {group.identity: tuple(range(n))}
        generators = {g: tuple(perm) for g, perm in generators.items()}
        for g, perm in generators.items():
            if sorted(perm) != list(range(n)):
                raise ValidationError(
                    f"Permutation for {group.labels[g]} is not a bijection of the vertices", code='not_simplicial'
                )
        queue = deque([group.identity])
        while queue:
            g = queue.popleft()
            for s, perm in generators.items():
                product = group.mul(g, s)
                image = tuple(known[g][perm[v]] for v in range(n))
                if product not in known:
                    known[product] = image
                    queue.append(product)
                elif known[product] != image:
                    raise ValidationError(
                        f"Generators do not define a homomorphism at {group.labels[product]}", code='homomorphism'
                    )
        if len(known) != group.order:
            raise ValidationError("Generators do not generate the group", code='homomorphism')
        return cls(group, space, [known[g] for g in group.elements])


    def vertex(self, g, v):
        return self.perms[g][v]


    def act(self, g, simplex):
        return tuple(sorted(self.perms[g][v] for v in simplex))


    def act_oriented(self, g, simplex):

        """ (sign, sorted image) of a sorted simplex under g. """

        return permutation_sign(self.perms[g][v] for v in simplex)


    def is_trivial(self):
        return all(perm == tuple(range(self.space.n_vertices)) for perm in self.perms)


    def orbit(self, simplex):
        return sorted({self.act(g, simplex) for g in self.group.elements})


    def stabilizer(self, simplex):
        return [g for g in self.group.elements if self.act(g, simplex) == tuple(simplex)]


    def is_free_on(self, q):
        return all(len(self.stabilizer(s)) == 1 for s in self.space.simplices(q))


    def is_free(self):

        """ No nonidentity element fixes any simplex, even setwise. """

        return all(self.is_free_on(q) for q in range(self.space.dimension + 1))


    def __repr__(self):
        return f"SimplicialAction({self.group.name} on {self.space})"




def validate_action(action, max_level=4):

    """
    Checks the action invariants and the simplicial identities of G^•×M up to `max_level`.

    Returns:
    dict: {'valid': True, 'checks': {...counts}, 'warnings': [...]}.

    Raises:
    ValidationError: codes 'identity', 'homomorphism', 'not_simplicial' or
        'simplicial_identities'.
    """

    from Simplicial.nerve import check_relations

    group, space = action.group, action.space
    n = space.n_vertices
    if len(action.perms) != group.order:
        raise ValidationError(f"Expected {group.order} permutations, got {len(action.perms)}", code='homomorphism')
    for g, perm in enumerate(action.perms):
        if sorted(perm) != list(range(n)):
            raise ValidationError(f"Permutation of {group.labels[g]} is not a bijection", code='not_simplicial')
    if action.perms[group.identity] != tuple(range(n)):
        raise ValidationError("The identity does not act trivially", code='identity')
    for g in group.elements:
        for h in group.elements:
            composite = tuple(action.perms[g][action.perms[h][v]] for v in range(n))
            if action.perms[group.mul(g, h)] != composite:
                raise ValidationError(
                    f"perm({group.labels[g]}·{group.labels[h]}) ≠ perm({group.labels[g]})∘perm({group.labels[h]})",
                    code='homomorphism',
                )
    for g in group.elements:
        for facet in space.facets:
            if not space.contains(action.act(g, facet)):
                raise ValidationError(
                    f"{group.labels[g]} maps facet {space.label(facet)} to a non-simplex", code='not_simplicial'
                )

    warnings = []
    for simplex in space.all_simplices():
        for g in action.stabilizer(simplex):
            if any(action.perms[g][v] != v for v in simplex):
                warnings.append(
                    f"{group.labels[g]} fixes {space.label(simplex)} without fixing it pointwise; "
                    f"consider the barycentric subdivision"
                )
                break
    for warning in warnings:
        logger.warning(warning)

    checks = check_relations(action, max_level)
    return {'valid': True, 'checks': checks, 'warnings': warnings}
