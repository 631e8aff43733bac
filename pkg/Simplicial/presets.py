import logging
from string import ascii_lowercase
from django.core.exceptions import ValidationError
from Simplicial.complexes import build_complex
from Simplicial.actions import SimplicialAction
from Simplicial.groups import group_preset




logger = logging.getLogger(__name__)

OCTAHEDRON_VERTICES = ['x', 'X', 'y', 'Y', 'z', 'Z']




def _circle(k):
    if k < 3:
        raise ValidationError(f"A circle needs at least 3 vertices, got {k}", code='preset')
    labels = list(ascii_lowercase[:k]) if k <= 26 else [f"v{i}" for i in range(k)]
    return build_complex([[labels[i], labels[(i + 1) % k]] for i in range(k)], labels)


def _octahedron():
    facets = [[a, b, c] for a in 'xX' for b in 'yY' for c in 'zZ']
    return build_complex(facets, OCTAHEDRON_VERTICES)


def _boundary_of_simplex(n):
    labels = list(ascii_lowercase[:n + 1])
    return build_complex([[v for v in labels if v != omitted] for omitted in labels], labels)




def complex_preset(name):

    """
    'point', 'circle:k' (k-gon), 'sphere:tetrahedron', 'sphere:octahedron',
    'sphere:boundary4simplex' (a 3-sphere) and 'pair:<preset>' for two disjoint copies of a preset.
    """

    if name == 'point':
        return build_complex([['p']])
    if name.startswith('pair:'):
        single = complex_preset(name[len('pair:'):])
        labels = [f"{label}1" for label in single.labels] + [f"{label}2" for label in single.labels]
        facets = [[f"{single.labels[v]}{c}" for v in facet] for c in '12' for facet in single.facets]
        return build_complex(facets, labels)
    kind, _, argument = name.partition(':')
    if kind == 'circle' and argument.isdigit():
        return _circle(int(argument))
    if name == 'sphere:tetrahedron':
        return _boundary_of_simplex(3)
    if name == 'sphere:octahedron':
        return _octahedron()
    if name == 'sphere:boundary4simplex':
        return _boundary_of_simplex(4)
    raise ValidationError(f"Unknown complex preset {name!r}", code='preset')




def _cyclic_order(group):
    if not group.name.startswith('Z/') or 'x' in group.name:
        raise ValidationError(f"{group.name} is not a cyclic group preset", code='preset')
    return group.order


def action_preset(group, space, name):

    """
    'trivial'; 'rotation' (Z/n turning a k-gon by k/n steps, n | k); 'antipodal' (Z/2 on
    the octahedron or an even polygon); 'swap' (Z/2 exchanging the two halves of a pair).
    """

    if name == 'trivial':
        return SimplicialAction.trivial(group, space)
    n = _cyclic_order(group)
    k = space.n_vertices
    if name == 'rotation':
        if k % n:
            raise ValidationError(f"Z/{n} cannot rotate a {k}-gon", code='preset')
        step = k // n
        generator = [(v + step) % k for v in range(k)]
    elif name == 'antipodal':
        if n != 2:
            raise ValidationError("The antipodal map needs Z/2", code='preset')
        if tuple(space.labels) == tuple(OCTAHEDRON_VERTICES):
            generator = [space.vertex_index(label.swapcase()) for label in space.labels]
        elif k % 2 == 0:
            generator = [(v + k // 2) % k for v in range(k)]
        else:
            raise ValidationError("No antipodal map on this complex", code='preset')
    elif name == 'swap':
        if n != 2 or k % 2:
            raise ValidationError("The swap needs Z/2 and a pair of components", code='preset')
        generator = [(v + k // 2) % k for v in range(k)]
    else:
        raise ValidationError(f"Unknown action preset {name!r}", code='preset')
    return SimplicialAction.from_generators(group, space, {group.elements[1 % n]: generator})




def fixture(group_name, complex_name, action_name='trivial'):

    """ Group, complex and action presets in one call. """

    group = group_preset(group_name)
    space = complex_preset(complex_name)
    return action_preset(group, space, action_name)
