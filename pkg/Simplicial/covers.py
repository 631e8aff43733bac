import logging
from itertools import product
from dataclasses import dataclass
from django.conf import settings
from django.core.exceptions import ValidationError
from Simplicial.nerve import face_copy
from Simplicial.cochains import permutation_sign




logger = logging.getLogger(__name__)




@dataclass(frozen=True)
class Patch:

    """
    The open set of Čech multi-index `index` in the copy `copy` of G^p × M, resolved to
    the closed star of the vertex set `core`.
    """

    level: int
    copy: tuple
    index: tuple
    core: tuple
    star: object

    @property
    def is_empty(self):
        return self.star.is_empty


    @property
    def degree(self):
        return len(self.index) - 1




class StarCover:

    """
    A cover of every level of G^•×M by closed stars. Subclasses say which atoms index
    level p, which vertex set each atom pins down and how the face maps move atoms.
    A Čech multi-index is a strictly increasing tuple of atoms; its patch is the star of
    the union of their cores, and only nonempty patches are kept.
    """

    name = None

    def __init__(self, action):
        self.action = action
        self.space = action.space
        self._patches = {}
        self._indices = {}


    def atoms(self, level, copy):
        raise NotImplementedError


    def core(self, level, copy, atom):
        raise NotImplementedError


    def face_atom(self, level, copy, l, atom):
        raise NotImplementedError


    def vertex_map(self, level, copy, l):

        """ The M-part of ∂_l on the copy, or None for the identity. """

        if level and l == level:
            return self.action.perms[copy[-1]]
        return None


    def patch(self, level, copy, index):
        key = (level, copy, index)
        patch = self._patches.get(key)
        if patch is None:
            core = set()
            for atom in index:
                core |= self.core(level, copy, atom)
            core = tuple(sorted(core))
            star = self.space.closed_star(core)
            patch = Patch(level, copy, index, core, star)
            self._patches[key] = patch
        return patch


    def multi_indices(self, level, copy, j):

        """ Sorted Čech multi-indices of degree j whose patch is nonempty. """

        key = (level, copy)
        table = self._indices.setdefault(key, [])
        if not table:
            atoms = sorted(a for a in self.atoms(level, copy) if not self.patch(level, copy, (a,)).is_empty)
            table.append([(a,) for a in atoms])
        while len(table) <= j:
            previous = table[-1]
            if not previous:
                table.append([])
                continue
            atoms = [index[0] for index in table[0]]
            extended = []
            for index in previous:
                for atom in atoms:
                    if atom > index[-1] and not self.patch(level, copy, index + (atom,)).is_empty:
                        extended.append(index + (atom,))
            table.append(extended)
        return table[j]


    def face_index(self, level, copy, l, index):

        """
        (sign, index at level - 1) of the face ∂_l of a multi-index; sign 0 when two atoms
        collapse, which makes the alternating cochain vanish there.
        """

        atoms = [self.face_atom(level, copy, l, atom) for atom in index]
        if len(set(atoms)) < len(atoms):
            return 0, None
        sign, ordered = permutation_sign(atoms)
        return sign, ordered


    def check_face_inclusions(self, level, copy, index):

        """ ∂_l maps the patch into the patch of the face multi-index for every l. """

        patch = self.patch(level, copy, index)
        for l in range(level + 1):
            sign, lower = self.face_index(level, copy, l, index)
            if not sign:
                continue
            target = self.patch(level - 1, face_copy(self.action.group, copy, l), lower)
            perm = self.vertex_map(level, copy, l)
            for simplex in patch.star.all_simplices():
                image = tuple(sorted(perm[v] for v in simplex)) if perm else simplex
                if not target.star.contains(image):
                    raise ValidationError(
                        f"∂{l} does not map patch {index} of copy {copy} into {lower}", code='cover_inclusion'
                    )
        return True


    def __repr__(self):
        return f"{type(self).__name__}({self.action})"




class TranslatedStarCover(StarCover):

    """
    Level p is covered by the stars of the vertices of M in every copy; the last face
    moves a vertex index v to g_p·v, the others keep it.
    """

    name = 'translated'

    def atoms(self, level, copy):
        return range(self.space.n_vertices)


    def core(self, level, copy, atom):
        return {atom}


    def face_atom(self, level, copy, l, atom):
        if l == level:
            return self.action.perms[copy[-1]][atom]
        return atom




class InductiveCover(StarCover):

    """
    Level p is indexed by A^{p+1}, A the vertex set, and the open set of α in the copy ĝ
    is the intersection of the preimages of the open sets of the faces ∂_i α:

        S(ĝ, α) = ∪_{i<p} S(∂_i ĝ, ∂_i α) ∪ g_p⁻¹·S(∂_p ĝ, ∂_p α),   S((), (v,)) = {v}.
    """

    name = 'inductive'

    def __init__(self, action):
        super().__init__(action)
        self._cores = {}


    def atoms(self, level, copy):
        return product(range(self.space.n_vertices), repeat=level + 1)


    def core(self, level, copy, atom):
        key = (copy, atom)
        core = self._cores.get(key)
        if core is not None:
            return core
        if level == 0:
            core = frozenset(atom)
        else:
            group = self.action.group
            inverse = self.action.perms[group.inv(copy[-1])]
            parts = set()
            for i in range(level + 1):
                lower = self.core(level - 1, face_copy(group, copy, i), atom[:i] + atom[i + 1:])
                parts |= {inverse[v] for v in lower} if i == level else lower
            core = frozenset(parts)
        self._cores[key] = core
        return core


    def face_atom(self, level, copy, l, atom):
        return atom[:l] + atom[l + 1:]




COVERS = {cover.name: cover for cover in (TranslatedStarCover, InductiveCover)}




def cover_for(action, name=None):

    """ The (cached) cover of G^•×M selected by name or by DELIGNE['COVER']. """

    name = name or settings.DELIGNE.get('COVER', 'translated')
    if name not in COVERS:
        raise ValidationError(f"Unknown cover {name!r}", code='cover')
    cover = action._covers.get(name)
    if cover is None:
        cover = COVERS[name](action)
        action._covers[name] = cover
    return cover




def resolve_patch(action, p, index, copy=None):

    """
    Unwinds the inductive cover for the multi-index `index` (a tuple of A^{p+1} atoms)
    in the copy ĝ = `copy` of G^p × M.
    """

    copy = tuple(copy or (action.group.identity,) * p)
    index = tuple(tuple(atom) for atom in index)
    if len(copy) != p or any(len(atom) != p + 1 for atom in index):
        raise ValidationError(f"Index {index} and copy {copy} do not live at level {p}", code='cover')
    return cover_for(action, 'inductive').patch(p, copy, tuple(sorted(set(index))))
