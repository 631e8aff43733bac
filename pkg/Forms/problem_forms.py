import logging
from fractions import Fraction
from dataclasses import dataclass, field
from django import forms
from django.core.exceptions import ValidationError
from Algebra.exceptions import StructuralError
from Simplicial.groups import FiniteGroup, group_preset
from Simplicial.complexes import build_complex
from Simplicial.actions import SimplicialAction, validate_action
from Simplicial.presets import complex_preset, action_preset
from Deligne.assembly import TripleCochain
from Deligne.sequences import KINDS as SEQUENCE_KINDS
from Geometry.cocycles import KINDS as COCYCLE_KINDS




logger = logging.getLogger(__name__)

TASKS = ('compute', 'spectral', 'verify', 'classify', 'obstruct', 'twist')




@dataclass
class Problem:

    """ A validated problem file: the action it runs on, the task and its cleaned parameters. """

    group_source: object
    complex_source: object
    action_source: object
    action: SimplicialAction
    task: str
    parameters: dict = field(default_factory=dict)

    @property
    def group(self):
        return self.action.group


    @property
    def space(self):
        return self.action.space




def parse_rational(value):

    """
    Integers and "p/q" strings. JSON floats are refused so no value is rounded in transport.

    Raises:
    ValueError: for anything else.
    """

    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"write {value!r} as a 'p/q' string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"{value!r} is not a rational number")


def parse_window(value):

    """ [a, b] or "a:b". """

    if isinstance(value, str):
        lo, sep, hi = value.partition(':')
        if not sep:
            raise ValueError(f"window {value!r} is not of the form a:b")
        value = [lo, hi]
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValueError("window must have two entries")
    lo, hi = (int(v) for v in value)
    if lo < 0 or lo > hi:
        raise ValueError(f"window {lo}:{hi} is empty or negative")
    return (lo, hi)




def _element(group, label):
    label = str(label)
    if label not in group.labels:
        raise ValueError(f"unknown group element {label!r}")
    return group.labels.index(label)


def _vertex(space, label):
    if label not in space.index:
        raise ValueError(f"unknown vertex {label!r}")
    return space.index[label]


def parse_cochain(entries, action, degree, path):

    """
    A sparse cochain payload: entries {level, copy, index, slot, simplex, value} with group
    elements and vertices given by their labels. `index` is the Čech multi-index of star
    centers and `simplex` the vertices of the cochain simplex (empty on slot 0).

    Returns:
    (TripleCochain or None, [messages prefixed with the entry path]).
    """

    if not isinstance(entries, list):
        return None, [f"{path}: expected a list of entries"]
    messages = []
    values = {}
    for k, entry in enumerate(entries):
        where = f"{path}[{k}]"
        if not isinstance(entry, dict):
            messages.append(f"{where}: expected an object")
            continue
        missing = [key for key in ('level', 'copy', 'index', 'slot', 'value') if key not in entry]
        if missing:
            messages.append(f"{where}: missing {', '.join(missing)}")
            continue
        try:
            level, slot = int(entry['level']), int(entry['slot'])
            copy = tuple(_element(action.group, g) for g in entry['copy'])
            index = tuple(_vertex(action.space, v) for v in entry['index'])
            simplex = tuple(sorted(_vertex(action.space, v) for v in entry.get('simplex', [])))
            value = parse_rational(entry['value'])
        except (TypeError, ValueError, ZeroDivisionError) as e:
            messages.append(f"{where}: {e}")
            continue
        if len(copy) != level:
            messages.append(f"{where}.copy: level {level} needs {level} group elements")
            continue
        if list(index) != sorted(set(index)):
            messages.append(f"{where}.index: Čech indices must be distinct and increasing in vertex order")
            continue
        if len(simplex) != slot:
            messages.append(f"{where}.simplex: slot {slot} needs a simplex on {slot} vertices")
            continue
        cell = (level, copy, index, slot, simplex)
        values[cell] = values.get(cell, 0) + value
    if messages:
        return None, messages
    try:
        return TripleCochain(degree, values), []
    except StructuralError as e:
        return None, [f"{path}: {e}"]




class ProblemForm(forms.Form):

    """
    Validates a problem file. Presets and explicit descriptions are accepted for the group,
    the complex and the action; every error message starts with the path of the offending
    field, e.g. "complex.facets[2]: Facet 2 is empty".
    """

    group = forms.Field(required=True, error_messages={'required': "group is required."})
    complex = forms.Field(required=True, error_messages={'required': "complex is required."})
    action = forms.Field(required=False)
    task = forms.ChoiceField(
        choices=[(t, t) for t in TASKS],
        required=True,
        error_messages={
            'required': "task is required.",
            'invalid_choice': f"task: %(value)s is not one of {', '.join(TASKS)}.",
        },
    )
    parameters = forms.Field(required=False)

    def clean(self):
        cleaned_data = super().clean()
        self.problem_errors = {}

        group = self._clean_group(cleaned_data.get('group'))
        space = self._clean_complex(cleaned_data.get('complex'))
        action = None
        if group is not None and space is not None:
            action = self._clean_action(group, space, cleaned_data.get('action'))
        task = cleaned_data.get('task')
        parameters = cleaned_data.get('parameters') or {}
        if not isinstance(parameters, dict):
            self._fail('parameters', "parameters: expected an object")
        elif action is not None and task:
            parameters = self._clean_parameters(task, action, parameters)

        if self.problem_errors:
            logger.warning(f"Problem file rejected: {self.problem_errors}")
            raise ValidationError(self.problem_errors)

        cleaned_data['problem'] = Problem(
            group_source=cleaned_data.get('group'),
            complex_source=cleaned_data.get('complex'),
            action_source=cleaned_data.get('action'),
            action=action,
            task=task,
            parameters=parameters,
        )
        return cleaned_data


    def _clean_group(self, value):
        if value is None:
            return None
        try:
            if isinstance(value, str):
                return group_preset(value)
            if not isinstance(value, dict) or 'elements' not in value or 'table' not in value:
                self._fail('group', "group: expected a preset name or {elements, table}")
                return None
            labels = [str(label) for label in value['elements']]
            index = {label: k for k, label in enumerate(labels)}
            table = []
            for i, row in enumerate(value['table']):
                entries = []
                for j, entry in enumerate(row):
                    if str(entry) not in index:
                        self._fail('group', f"group.table[{i}][{j}]: unknown element {entry!r}")
                        return None
                    entries.append(index[str(entry)])
                table.append(entries)
            return FiniteGroup(labels, table, value.get('name'))
        except ValidationError as e:
            self._fail('group', f"group: {' '.join(e.messages)} ({getattr(e, 'code', None)})")
        except TypeError as e:
            self._fail('group', f"group: {e}")
        return None


    def _clean_complex(self, value):
        if value is None:
            return None
        try:
            if isinstance(value, str):
                return complex_preset(value)
            if not isinstance(value, dict) or not isinstance(value.get('facets'), list):
                self._fail('complex', "complex.facets: expected a list of facets")
                return None
            vertices = value.get('vertices')
            if vertices is not None and not isinstance(vertices, list):
                self._fail('complex', "complex.vertices: expected a list of labels")
                return None
            known = set(vertices) if vertices is not None else None
            for k, facet in enumerate(value['facets']):
                if not isinstance(facet, list) or not facet:
                    self._fail('complex', f"complex.facets[{k}]: expected a nonempty list of vertices")
                elif known is not None and any(v not in known for v in facet):
                    unknown = next(v for v in facet if v not in known)
                    self._fail('complex', f"complex.facets[{k}]: unknown vertex {unknown!r}")
            if 'complex' in self.problem_errors:
                return None
            return build_complex(value['facets'], vertices)
        except ValidationError as e:
            self._fail('complex', f"complex: {' '.join(e.messages)} ({getattr(e, 'code', None)})")
        except TypeError as e:
            self._fail('complex', f"complex: {e}")
        return None


    def _clean_action(self, group, space, value):
        try:
            if value is None:
                action = SimplicialAction.trivial(group, space)
            elif isinstance(value, str):
                action = action_preset(group, space, value)
            elif isinstance(value, dict) and isinstance(value.get('generators'), dict):
                generators = {}
                for label, images in value['generators'].items():
                    where = f"action.generators.{label}"
                    try:
                        g = _element(group, label)
                        if not isinstance(images, list) or len(images) != space.n_vertices:
                            raise ValueError(f"expected the images of all {space.n_vertices} vertices")
                        generators[g] = [_vertex(space, v) for v in images]
                    except ValueError as e:
                        self._fail('action', f"{where}: {e}")
                if 'action' in self.problem_errors:
                    return None
                action = SimplicialAction.from_generators(group, space, generators)
            else:
                self._fail('action', "action: expected a preset name or {generators}")
                return None
            validate_action(action, max_level=3)
            return action
        except ValidationError as e:
            self._fail('action', f"action: {' '.join(e.messages)} ({getattr(e, 'code', None)})")
        return None


    def _fail(self, key, message):
        self.problem_errors.setdefault(key, []).append(message)


    def _clean_parameters(self, task, action, parameters):
        cleaned = {}
        known = set()

        def integer(key, default=None, minimum=0):
            known.add(key)
            value = parameters.get(key, default)
            if value is None:
                self._fail('parameters', f"parameters.{key}: required for task {task}")
                return None
            if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
                self._fail('parameters', f"parameters.{key}: expected an integer ≥ {minimum}")
                return None
            cleaned[key] = value
            return value

        def choice(key, options, default=None):
            known.add(key)
            value = parameters.get(key, default)
            if value not in options:
                self._fail('parameters', f"parameters.{key}: expected one of {', '.join(options)}")
                return None
            cleaned[key] = value
            return value

        def window(default):
            known.add('window')
            try:
                cleaned['window'] = parse_window(parameters.get('window', default))
            except (TypeError, ValueError) as e:
                self._fail('parameters', f"parameters.window: {e}")

        def cochain(key, kind, required=True):
            known.add(key)
            if key not in parameters:
                if required:
                    self._fail('parameters', f"parameters.{key}: required for task {task}")
                return
            degree = COCYCLE_KINDS[kind][0] + 1
            parsed, messages = parse_cochain(parameters[key], action, degree, f"parameters.{key}")
            for message in messages:
                self._fail('parameters', message)
            cleaned[key] = parsed

        if task == 'compute':
            N = integer('N')
            if 'm' in parameters:
                m = cleaned.pop('m', None) if integer('m') is not None else None
                if m is not None:
                    cleaned['window'] = (m, m)
            else:
                window([N or 0, N or 0])
        elif task == 'spectral':
            integer('N')
            integer('max_page', 2, minimum=1)
            window([0, 2])
        elif task == 'verify':
            integer('N')
            choice('sequence', SEQUENCE_KINDS)
            window([0, 2])
        elif task in ('classify', 'obstruct'):
            kind = choice('kind', tuple(COCYCLE_KINDS))
            if kind:
                cochain('cocycle', kind)
                if task == 'classify':
                    cochain('other', kind, required=False)
        elif task == 'twist':
            cochain('cocycle', 'gerbe', required=False)
            if 'bound' in parameters:
                integer('bound', minimum=1)
            known.add('gamma')
            if 'gamma' in parameters:
                cleaned['gamma'] = self._clean_gamma(action.group, parameters['gamma'])
        unknown = sorted(set(parameters) - known)
        for key in unknown:
            self._fail('parameters', f"parameters.{key}: not a parameter of task {task}")
        return cleaned


    def _clean_gamma(self, group, value):

        """ {"g,h": "p/q"} keyed by element labels. """

        if not isinstance(value, dict):
            self._fail('parameters', "parameters.gamma: expected an object {\"g,h\": value}")
            return None
        gamma = {}
        for key, entry in value.items():
            try:
                labels = str(key).split(',')
                if len(labels) != 2:
                    raise ValueError("keys name two group elements, as \"g,h\"")
                gamma[tuple(_element(group, label.strip()) for label in labels)] = parse_rational(entry)
            except (ValueError, ZeroDivisionError) as e:
                self._fail('parameters', f"parameters.gamma.{key}: {e}")
        return gamma
